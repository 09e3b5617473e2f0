use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use super::finite::FiniteAlgebra;
use super::variety::{SemiAbelianWitness, VarietyPresentation};
use crate::{Error, Result};

/// One failed instance of the witness identities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WitnessViolation {
    /// `α_i(x, x) = value ≠ 0`.
    AlphaNotZero { i: usize, x: usize, value: usize },
    /// `β(α_1(x,y), …, α_ℓ(x,y), y) = value ≠ x`.
    NotRecovered { x: usize, y: usize, value: usize },
    /// `β(0, …, 0, y) = value ≠ y`.
    BetaOnZero { y: usize, value: usize },
}

impl fmt::Display for WitnessViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            WitnessViolation::AlphaNotZero { i, x, value } => {
                write!(f, "alpha_{}({x}, {x}) = {value}, expected 0", i + 1)
            }
            WitnessViolation::NotRecovered { x, y, value } => {
                write!(f, "beta(alpha(x, y), y) = {value} at x = {x}, y = {y}")
            }
            WitnessViolation::BetaOnZero { y, value } => {
                write!(f, "beta(0, .., 0, {y}) = {value}")
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WitnessReport {
    pub violations: Vec<WitnessViolation>,
}

impl WitnessReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the witness attached to `v` on `a`, which must share `v`'s
/// signature.
pub fn verify_witness(v: &VarietyPresentation, a: &FiniteAlgebra) -> Result<WitnessReport> {
    let w = v
        .witness()
        .ok_or_else(|| Error::MissingWitness(v.name().into()))?;
    if v.signature() != a.variety().signature() {
        return Err(Error::VarietyMismatch);
    }
    verify_witness_terms(w, a)
}

/// Checks `α_i(x,x) = 0`, `β(α(x,y), y) = x` and the derived
/// `β(0,…,0,y) = y` for every `x`, `y` of `a`.
pub fn verify_witness_terms(w: &SemiAbelianWitness, a: &FiniteAlgebra) -> Result<WitnessReport> {
    let n = a.size();
    let alphas = alpha_tables(w, a)?;
    let ell = w.ell();
    let mut report = WitnessReport::default();
    for (i, t) in alphas.iter().enumerate() {
        for x in 0..n {
            let value = t[x * n + x];
            if value != 0 {
                report.violations.push(WitnessViolation::AlphaNotZero { i, x, value });
            }
        }
    }
    let mut args = vec![0; ell + 1];
    for x in 0..n {
        for y in 0..n {
            for (slot, t) in args.iter_mut().zip(&alphas) {
                *slot = t[x * n + y];
            }
            args[ell] = y;
            let value = a.eval_term(&w.beta, &args)?;
            if value != x {
                report.violations.push(WitnessViolation::NotRecovered { x, y, value });
            }
        }
    }
    for y in 0..n {
        args.iter_mut().for_each(|s| *s = 0);
        args[ell] = y;
        let value = a.eval_term(&w.beta, &args)?;
        if value != y {
            report.violations.push(WitnessViolation::BetaOnZero { y, value });
        }
    }
    Ok(report)
}

/// The `α_i` as flat `n × n` tables.
pub fn alpha_tables(w: &SemiAbelianWitness, a: &FiniteAlgebra) -> Result<Vec<Vec<usize>>> {
    let n = a.size();
    w.alphas
        .iter()
        .map(|t| {
            let mut out = Vec::with_capacity(n * n);
            for x in 0..n {
                for y in 0..n {
                    out.push(a.eval_term(t, &[x, y])?);
                }
            }
            Ok(out)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::builtins::{cyclic, named};

    #[test]
    fn group_witness_on_z2() {
        let v = VarietyPresentation::groups();
        let a = cyclic(&v, 2).unwrap();
        assert!(verify_witness(&v, &a).unwrap().passed());
    }

    #[test]
    fn loop_witness_on_nonassociative_loops() {
        let v = VarietyPresentation::loops();
        for name in ["L5", "L6", "Z3", "S3"] {
            let a = named(&v, name).unwrap();
            assert!(verify_witness(&v, &a).unwrap().passed(), "{name}");
        }
    }

    #[test]
    fn broken_witness_on_truncated_monoid() {
        let v = VarietyPresentation::monoids();
        let a = named(&v, "trunc3").unwrap();
        assert_eq!(
            verify_witness(&v, &a),
            Err(Error::MissingWitness("monoids".into()))
        );
        let w = SemiAbelianWitness::parse(v.signature(), &["x"], "z").unwrap();
        let r = verify_witness_terms(&w, &a).unwrap();
        assert!(r
            .violations
            .contains(&WitnessViolation::AlphaNotZero { i: 0, x: 1, value: 1 }));
        assert!(r.violations.contains(&WitnessViolation::BetaOnZero { y: 1, value: 0 }));
    }
}
