use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::ses::{Section, ShortExactSeq};
use crate::algebra::{alpha_tables, MixedRadix, SemiAbelianWitness};
use crate::{Error, Result};

/// Largest `|K|^ℓ·|Q|` for which the retract maps are tabulated.
pub(crate) const MAX_EMBEDDING: usize = 1 << 22;

/// The maps `φ: K^ℓ × Q → X` and `ψ: X → K^ℓ × Q` exhibiting `X` as a
/// retract over `Q`. Elements of `K^ℓ × Q` are mixed-radix codes with the
/// kernel coordinates first and `Q` last.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RetractPair {
    pub ell: usize,
    pub radix: MixedRadix,
    pub section: Vec<usize>,
    pub phi: Vec<usize>,
    pub psi: Vec<usize>,
}

/// One of the identities a retract pair has to satisfy.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RetractFailure {
    /// `φψ ≠ 1_X`.
    PhiPsi,
    /// `π_Q ψ ≠ q`.
    ProjectionPsi,
    /// `q φ ≠ π_Q`.
    QPhi,
    /// `ψ s ≠ (0,…,0,1_Q)`.
    PsiSection,
    /// `φ(0,…,0,·) ≠ s`.
    PhiZero,
    /// `ψ` is not injective.
    PsiNotInjective,
    /// `φ` or `ψ` moves `0`.
    NotPointed,
}

impl RetractPair {
    pub fn embedding_size(&self) -> usize {
        self.radix.total()
    }

    /// Code of `(0,…,0,v)`.
    pub fn base_point(&self, v: usize) -> usize {
        let mut d = vec![0; self.ell + 1];
        d[self.ell] = v;
        self.radix.encode(&d)
    }

    /// Every identity that fails for this pair against `e`.
    pub fn failures(&self, e: &ShortExactSeq) -> Vec<RetractFailure> {
        let mut out = Vec::new();
        let nx = e.middle().size();
        let nq = e.base().size();
        let proj = |c: usize| self.radix.digit(c, self.ell);
        if (0..nx).any(|x| self.phi[self.psi[x]] != x) {
            out.push(RetractFailure::PhiPsi);
        }
        if (0..nx).any(|x| proj(self.psi[x]) != e.q().apply(x)) {
            out.push(RetractFailure::ProjectionPsi);
        }
        if (0..self.embedding_size()).any(|c| e.q().apply(self.phi[c]) != proj(c)) {
            out.push(RetractFailure::QPhi);
        }
        if (0..nq).any(|v| self.psi[self.section[v]] != self.base_point(v)) {
            out.push(RetractFailure::PsiSection);
        }
        if (0..nq).any(|v| self.phi[self.base_point(v)] != self.section[v]) {
            out.push(RetractFailure::PhiZero);
        }
        let mut seen = vec![false; self.embedding_size()];
        if self.psi.iter().any(|&c| core::mem::replace(&mut seen[c], true)) {
            out.push(RetractFailure::PsiNotInjective);
        }
        if self.phi[0] != 0 || self.psi[0] != 0 {
            out.push(RetractFailure::NotPointed);
        }
        out
    }
}

/// `φ(k_1,…,k_ℓ,y) = β(k(k_1),…,k(k_ℓ),s(y))` and
/// `ψ(x) = (k⁻¹α_1(x,sq(x)),…,k⁻¹α_ℓ(x,sq(x)),q(x))`.
pub fn retract_maps(
    e: &ShortExactSeq,
    s: &Section,
    w: &SemiAbelianWitness,
) -> Result<RetractPair> {
    if !s.is_section_of(e) {
        return Err(Error::InvalidData("not a pointed section of q".into()));
    }
    let x = e.middle();
    let ell = w.ell();
    let (nk, nq) = (e.kernel_object().size(), e.base().size());
    let mut radices = vec![nk; ell];
    radices.push(nq);
    let radix = MixedRadix::new(radices);
    if nk
        .checked_pow(ell as u32)
        .and_then(|p| p.checked_mul(nq))
        .is_none_or(|t| t > MAX_EMBEDDING)
    {
        return Err(Error::LimitsExceeded(format!(
            "K^{ell} x Q is too large to tabulate"
        )));
    }
    let psi = psi_map(e, &s.map, w, &alpha_tables(w, x)?, &radix)?;
    let mut phi = Vec::with_capacity(radix.total());
    let mut digits = Vec::with_capacity(ell + 1);
    let mut args = vec![0; ell + 1];
    for c in 0..radix.total() {
        radix.decode_into(c, &mut digits);
        for i in 0..ell {
            args[i] = e.k().apply(digits[i]);
        }
        args[ell] = s.map[digits[ell]];
        phi.push(x.eval_term(&w.beta, &args)?);
    }
    let pair = RetractPair {
        ell,
        radix,
        section: s.map.clone(),
        phi,
        psi,
    };
    let failures = pair.failures(e);
    if !failures.is_empty() {
        return Err(Error::WitnessViolation(format!(
            "retract identities fail: {failures:?}"
        )));
    }
    Ok(pair)
}

/// `ψ` alone, from precomputed `α` tables on `X`.
pub(crate) fn psi_map(
    e: &ShortExactSeq,
    section: &[usize],
    w: &SemiAbelianWitness,
    alphas: &[Vec<usize>],
    radix: &MixedRadix,
) -> Result<Vec<usize>> {
    let nx = e.middle().size();
    let ell = w.ell();
    let kinv = e.k_inverse();
    let mut digits = vec![0; ell + 1];
    (0..nx)
        .map(|x| {
            let v = e.q().apply(x);
            let sx = section[v];
            for i in 0..ell {
                let a = alphas[i][x * nx + sx];
                digits[i] = kinv[a].ok_or_else(|| {
                    Error::WitnessViolation(format!(
                        "alpha_{}({x}, {sx}) = {a} is not in the image of k",
                        i + 1
                    ))
                })?;
            }
            digits[ell] = v;
            Ok(radix.encode(&digits))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::builtins::{cyclic, named};
    use crate::algebra::{product, Homomorphism, VarietyPresentation};
    use crate::ext1::{sections_of, validate_ses};

    #[test]
    fn z4_over_z2() {
        let v = VarietyPresentation::groups();
        let (z2, z4) = (cyclic(&v, 2).unwrap(), cyclic(&v, 4).unwrap());
        let k = Homomorphism::new(z2.clone(), z4.clone(), vec![0, 2]).unwrap();
        let q = Homomorphism::new(z4, z2, vec![0, 1, 0, 1]).unwrap();
        let e = validate_ses(&k, &q).unwrap();
        let s = Section { map: vec![0, 1] };
        let r = retract_maps(&e, &s, v.witness().unwrap()).unwrap();
        // (u, v) has code u + 2v.
        assert_eq!(r.psi, vec![0, 2, 1, 3]);
    }

    #[test]
    fn split_product_gives_identity() {
        let v = VarietyPresentation::groups();
        let (k3, q2) = (cyclic(&v, 3).unwrap(), cyclic(&v, 2).unwrap());
        let p = product(&k3, &q2).unwrap();
        let incl = Homomorphism::new(k3.clone(), p.algebra.clone(), vec![0, 1, 2]).unwrap();
        let e = validate_ses(&incl, &p.projections[1]).unwrap();
        let s = Section { map: vec![0, 3] };
        let r = retract_maps(&e, &s, v.witness().unwrap()).unwrap();
        assert_eq!(r.psi, (0..6).collect::<Vec<_>>());
        assert_eq!(r.phi, (0..6).collect::<Vec<_>>());
    }

    #[test]
    fn trivial_kernel() {
        let v = VarietyPresentation::loops();
        let l5 = named(&v, "L5").unwrap();
        let zero = named(&v, "0").unwrap();
        let e = validate_ses(
            &Homomorphism::zero(&zero, &l5).unwrap(),
            &Homomorphism::identity(&l5),
        )
        .unwrap();
        let s = sections_of(&e).next().unwrap();
        let r = retract_maps(&e, &s, v.witness().unwrap()).unwrap();
        assert_eq!(r.psi, (0..5).collect::<Vec<_>>());
    }

    #[test]
    fn two_alpha_witness() {
        let v = VarietyPresentation::groups();
        let w = SemiAbelianWitness::parse(
            v.signature(),
            &["mul(x, inv(y))", "0"],
            "mul(mul(z1, z2), t)",
        )
        .unwrap();
        let s3 = named(&v, "S3").unwrap();
        let z2 = cyclic(&v, 2).unwrap();
        let sign = Homomorphism::new(s3, z2, vec![0, 1, 1, 0, 0, 1]).unwrap();
        let k = crate::algebra::kernel(&sign).unwrap();
        let e = validate_ses(&k, &sign).unwrap();
        for s in sections_of(&e) {
            let r = retract_maps(&e, &s, &w).unwrap();
            assert_eq!(r.embedding_size(), 18);
            assert!(r.failures(&e).is_empty());
        }
    }
}
