use alloc::format;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use super::term::Term;
use super::variety::{same_variety, Variety};
use crate::{Error, Limits, Result};

/// Shared handle to a finite algebra.
pub type Alg = Arc<FiniteAlgebra>;

/// A finite algebra on `{0..n-1}` with one table per operation symbol.
///
/// Tables are flat and row-major: for an `r`-ary operation the entry for
/// `(a_1,…,a_r)` sits at `Σ a_i·n^(r-i)`, so the first argument selects the
/// row. The constant is always element `0`.
#[derive(Clone, Debug)]
pub struct FiniteAlgebra {
    variety: Variety,
    size: usize,
    tables: Vec<Vec<usize>>,
}

impl PartialEq for FiniteAlgebra {
    fn eq(&self, other: &Self) -> bool {
        self.size == other.size
            && self.tables == other.tables
            && same_variety(&self.variety, &other.variety)
    }
}

impl Eq for FiniteAlgebra {}

impl FiniteAlgebra {
    /// Builds an algebra and checks every defining equation exhaustively.
    /// Carriers above [`Limits::DEFAULT_MAX_CARRIER`] are refused; use
    /// [`FiniteAlgebra::with_limit`] to raise the bound.
    pub fn new(variety: Variety, size: usize, tables: Vec<Vec<usize>>) -> Result<Self> {
        Self::with_limit(variety, size, tables, Limits::DEFAULT_MAX_CARRIER)
    }

    pub fn with_limit(
        variety: Variety,
        size: usize,
        tables: Vec<Vec<usize>>,
        max_carrier: usize,
    ) -> Result<Self> {
        let a = Self::unchecked(variety, size, tables)?;
        a.check_equations(max_carrier)?;
        Ok(a)
    }

    /// Checks table shapes but not the equations.
    pub fn unchecked(variety: Variety, size: usize, tables: Vec<Vec<usize>>) -> Result<Self> {
        if size == 0 {
            return Err(Error::InvalidAlgebra("carrier must be nonempty".into()));
        }
        let sig = variety.signature();
        if tables.len() != sig.len() {
            return Err(Error::InvalidAlgebra(format!(
                "expected {} tables, got {}",
                sig.len(),
                tables.len()
            )));
        }
        for (op, t) in tables.iter().enumerate() {
            let want = size.pow(sig.arity(op) as u32);
            if t.len() != want {
                return Err(Error::InvalidAlgebra(format!(
                    "table `{}` has {} entries, expected {want}",
                    sig.name(op),
                    t.len()
                )));
            }
            if let Some(&bad) = t.iter().find(|&&v| v >= size) {
                return Err(Error::InvalidAlgebra(format!(
                    "table `{}` contains {bad}, outside the carrier",
                    sig.name(op)
                )));
            }
        }
        if tables[sig.zero()] != [0] {
            return Err(Error::InvalidAlgebra("the constant must be element 0".into()));
        }
        Ok(FiniteAlgebra {
            variety,
            size,
            tables,
        })
    }

    /// For constructions that preserve the equations (subalgebras, products,
    /// quotients of valid algebras).
    pub(crate) fn trusted(variety: Variety, size: usize, tables: Vec<Vec<usize>>) -> Self {
        debug_assert!(Self::unchecked(variety.clone(), size, tables.clone()).is_ok());
        FiniteAlgebra {
            variety,
            size,
            tables,
        }
    }

    /// Tabulates `f(op, args)` for every non-constant operation and checks the
    /// equations.
    pub fn from_fn(
        variety: Variety,
        size: usize,
        f: impl FnMut(usize, &[usize]) -> usize,
    ) -> Result<Self> {
        let tables = tabulate(&variety, size, f);
        Self::new(variety, size, tables)
    }

    pub(crate) fn from_fn_trusted(
        variety: Variety,
        size: usize,
        f: impl FnMut(usize, &[usize]) -> usize,
    ) -> Self {
        let tables = tabulate(&variety, size, f);
        Self::trusted(variety, size, tables)
    }

    /// The one-element algebra.
    pub fn trivial(variety: Variety) -> Self {
        Self::from_fn_trusted(variety, 1, |_, _| 0)
    }

    pub fn variety(&self) -> &Variety {
        &self.variety
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn is_trivial(&self) -> bool {
        self.size == 1
    }

    pub fn tables(&self) -> &[Vec<usize>] {
        &self.tables
    }

    pub fn table(&self, op: usize) -> &[usize] {
        &self.tables[op]
    }

    pub fn arity(&self, op: usize) -> usize {
        self.variety.signature().arity(op)
    }

    pub fn apply(&self, op: usize, args: &[usize]) -> usize {
        self.tables[op][table_index(self.size, args)]
    }

    #[inline]
    pub fn apply1(&self, op: usize, a: usize) -> usize {
        self.tables[op][a]
    }

    #[inline]
    pub fn apply2(&self, op: usize, a: usize, b: usize) -> usize {
        self.tables[op][a * self.size + b]
    }

    /// Evaluates `t` with variable `i` bound to `assignment[i]`.
    pub fn eval_term(&self, t: &Term, assignment: &[usize]) -> Result<usize> {
        match t {
            Term::Var(i) => assignment
                .get(*i)
                .copied()
                .ok_or(Error::UnboundVariable(*i)),
            Term::App(op, args) => {
                let sig = self.variety.signature();
                if *op >= sig.len() {
                    return Err(Error::InvalidPresentation(format!(
                        "operation index {op} out of range"
                    )));
                }
                if sig.arity(*op) != args.len() {
                    return Err(Error::ArityMismatch {
                        op: sig.name(*op).into(),
                        expected: sig.arity(*op),
                        found: args.len(),
                    });
                }
                let mut idx = 0;
                for a in args {
                    let v = self.eval_term(a, assignment)?;
                    if v >= self.size {
                        return Err(Error::InvalidData(format!("element {v} outside the carrier")));
                    }
                    idx = idx * self.size + v;
                }
                Ok(self.tables[*op][idx])
            }
        }
    }

    /// Checks every defining equation under every assignment.
    pub fn check_equations(&self, max_carrier: usize) -> Result<()> {
        if self.size > max_carrier {
            return Err(Error::CarrierTooLarge {
                size: self.size,
                limit: max_carrier,
            });
        }
        for (i, eq) in self.variety.equations().iter().enumerate() {
            let mut bad = None;
            for_each_tuple(self.size, eq.vars, |asg| {
                if bad.is_some() {
                    return;
                }
                let l = self.eval_term(&eq.lhs, asg).expect("checked presentation");
                let r = self.eval_term(&eq.rhs, asg).expect("checked presentation");
                if l != r {
                    bad = Some((asg.to_vec(), l, r));
                }
            });
            if let Some((assignment, lhs, rhs)) = bad {
                return Err(Error::EquationViolated {
                    equation: i,
                    assignment,
                    lhs,
                    rhs,
                });
            }
        }
        Ok(())
    }

    /// The same algebra with carrier relabeled by the bijection `perm`
    /// (old element `x` becomes `perm[x]`). `perm[0]` must be `0`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        let inv = invert_permutation(perm, self.size)?;
        if perm[0] != 0 {
            return Err(Error::InvalidData("relabeling must fix 0".into()));
        }
        let mut old = vec![0; 8];
        Ok(Self::from_fn_trusted(
            self.variety.clone(),
            self.size,
            |op, args| {
                old.clear();
                old.extend(args.iter().map(|&a| inv[a]));
                perm[self.apply(op, &old)]
            },
        ))
    }
}

pub(crate) fn invert_permutation(perm: &[usize], n: usize) -> Result<Vec<usize>> {
    if perm.len() != n {
        return Err(Error::InvalidData("permutation has the wrong length".into()));
    }
    let mut inv = vec![usize::MAX; n];
    for (x, &y) in perm.iter().enumerate() {
        if y >= n || inv[y] != usize::MAX {
            return Err(Error::InvalidData("not a permutation".into()));
        }
        inv[y] = x;
    }
    Ok(inv)
}

/// Row-major index of an argument tuple.
#[inline]
pub fn table_index(n: usize, args: &[usize]) -> usize {
    args.iter().fold(0, |acc, &a| acc * n + a)
}

/// Calls `f` on every `r`-tuple over `{0..n-1}` in row-major order.
pub fn for_each_tuple(n: usize, r: usize, mut f: impl FnMut(&[usize])) {
    let mut t = vec![0usize; r];
    loop {
        f(&t);
        let mut i = r;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            t[i] += 1;
            if t[i] < n {
                break;
            }
            t[i] = 0;
        }
    }
}

fn tabulate(
    variety: &Variety,
    size: usize,
    mut f: impl FnMut(usize, &[usize]) -> usize,
) -> Vec<Vec<usize>> {
    let sig = variety.signature();
    (0..sig.len())
        .map(|op| {
            if op == sig.zero() {
                return vec![0];
            }
            let mut t = Vec::with_capacity(size.pow(sig.arity(op) as u32));
            for_each_tuple(size, sig.arity(op), |args| t.push(f(op, args)));
            t
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::builtins::cyclic;
    use crate::algebra::variety::VarietyPresentation;

    #[test]
    fn eval_identity_and_constant() {
        let z4 = cyclic(&VarietyPresentation::abelian_groups(), 4).unwrap();
        assert_eq!(z4.eval_term(&Term::Var(0), &[3]).unwrap(), 3);
        assert_eq!(z4.eval_term(&Term::App(0, vec![]), &[]).unwrap(), 0);
        assert_eq!(
            z4.eval_term(&Term::Var(1), &[3]),
            Err(Error::UnboundVariable(1))
        );
        assert!(matches!(
            z4.eval_term(&Term::App(1, vec![Term::Var(0)]), &[1]),
            Err(Error::ArityMismatch { .. })
        ));
    }

    #[test]
    fn alpha_in_z4_is_subtraction() {
        let z4 = cyclic(&VarietyPresentation::abelian_groups(), 4).unwrap();
        let w = z4.variety().witness().unwrap().clone();
        assert_eq!(z4.eval_term(&w.alphas[0], &[1, 3]).unwrap(), 2);
    }

    #[test]
    fn equation_violation_reports_instance() {
        let v = VarietyPresentation::monoids();
        // 1+1 = 0, 1+2 = 1, 2+1 = 2: not associative.
        let t = vec![vec![0], vec![0, 1, 2, 1, 0, 1, 2, 2, 2]];
        let err = FiniteAlgebra::new(v, 3, t).unwrap_err();
        assert!(matches!(err, Error::EquationViolated { equation: 0, .. }));
    }

    #[test]
    fn carrier_guard() {
        let v = VarietyPresentation::abelian_groups();
        let a = cyclic(&v, 70);
        assert!(matches!(a, Err(Error::CarrierTooLarge { size: 70, limit: 64 })));
    }

    #[test]
    fn tuples_are_row_major() {
        let mut seen = Vec::new();
        for_each_tuple(3, 2, |t| seen.push(table_index(3, t)));
        assert_eq!(seen, (0..9).collect::<Vec<_>>());
        let mut count = 0;
        for_each_tuple(5, 0, |_| count += 1);
        assert_eq!(count, 1);
    }
}
