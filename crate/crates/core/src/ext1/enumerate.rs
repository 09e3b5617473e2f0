use alloc::collections::BTreeSet;
use alloc::format;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use super::canonical::{canonical_form_with, CanonicalForm};
use super::ses::{validate_ses, ShortExactSeq};
use crate::algebra::{
    for_each_tuple, same_variety, Alg, FiniteAlgebra, Homomorphism, SemiAbelianWitness, Term,
};
use crate::search::{Flow, TableSearch};
use crate::{Error, Limits, Result};

/// Carrier layout for extensions of `Q` by `K`: the fiber over `v` is the
/// block `start[v] .. start[v] + sizes[v]`, with `K` itself as fiber `0`.
/// With every fiber of size `|K|` the element `(u, v)` is `u + |K|·v`.
#[derive(Clone, Debug)]
pub(crate) struct Layout {
    pub k: Alg,
    pub q: Alg,
    pub sizes: Vec<usize>,
    pub start: Vec<usize>,
    pub fiber_of: Vec<usize>,
}

impl Layout {
    pub fn new(k: &Alg, q: &Alg, sizes: Vec<usize>) -> Self {
        let mut start = Vec::with_capacity(sizes.len());
        let mut fiber_of = Vec::new();
        for (v, &c) in sizes.iter().enumerate() {
            start.push(fiber_of.len());
            fiber_of.extend(core::iter::repeat_n(v, c));
        }
        Layout {
            k: k.clone(),
            q: q.clone(),
            sizes,
            start,
            fiber_of,
        }
    }

    pub fn uniform(k: &Alg, q: &Alg) -> Self {
        Self::new(k, q, vec![k.size(); q.size()])
    }

    pub fn size(&self) -> usize {
        self.fiber_of.len()
    }

    fn fiber(&self, v: usize) -> core::ops::Range<usize> {
        self.start[v]..self.start[v] + self.sizes[v]
    }

    /// Table search on this carrier: `u ↦ u` from `K` and the fiber map to
    /// `Q` are forced to be homomorphisms. With `normalize = Some(op)` the
    /// cells `(u,0) op (0,v)` are pinned to `(u,v)` (uniform layouts only).
    pub fn search(&self, limits: &Limits, normalize: Option<usize>) -> Result<TableSearch> {
        let variety = self.k.variety();
        let sig = variety.signature();
        let n = self.size();
        let nk = self.k.size();
        let mut s = TableSearch::new(variety, n, limits)?;
        let mut qargs = Vec::new();
        for op in 0..sig.len() {
            if op == sig.zero() {
                continue;
            }
            let r = sig.arity(op);
            for_each_tuple(n, r, |args| {
                qargs.clear();
                qargs.extend(args.iter().map(|&x| self.fiber_of[x]));
                let target = self.q.apply(op, &qargs);
                let cands: Vec<usize> = self.fiber(target).collect();
                s.restrict(op, args, &cands);
            });
            for_each_tuple(nk, r, |args| {
                s.pin(op, args, self.k.apply(op, args));
            });
        }
        if let Some(op) = normalize {
            for v in 0..self.q.size() {
                for u in 0..nk {
                    s.pin(op, &[u, nk * v], u + nk * v);
                }
            }
        }
        Ok(s)
    }

    /// The extension on this carrier with the given tables.
    pub fn ses(&self, tables: &[Vec<usize>]) -> Result<core::result::Result<ShortExactSeq, Error>> {
        let x = Arc::new(FiniteAlgebra::unchecked(
            self.k.variety().clone(),
            self.size(),
            tables.to_vec(),
        )?);
        let k = Homomorphism::unchecked(self.k.clone(), x.clone(), (0..self.k.size()).collect())?;
        let q = Homomorphism::unchecked(x, self.q.clone(), self.fiber_of.clone())?;
        Ok(validate_ses(&k, &q))
    }
}

/// One table search whose solutions are candidate extensions of `Q` by `K`.
/// [`enumerate_ext1`] runs all problems of a plan sequentially; callers may
/// instead split each search and run the parts on several threads.
#[derive(Clone, Debug)]
pub struct Ext1Problem {
    layout: Layout,
    witness: SemiAbelianWitness,
    limits: Limits,
    search: TableSearch,
}

impl Ext1Problem {
    /// Searches covering all extensions of `q` by `k`. Fiber-uniform
    /// varieties use the single carrier `K × Q`; otherwise `carriers` lists
    /// the middle-object sizes to try and every distribution of the extra
    /// elements over the nonzero fibers gets its own search.
    pub fn plan(
        q: &Alg,
        k: &Alg,
        carriers: Option<&[usize]>,
        limits: &Limits,
    ) -> Result<Vec<Ext1Problem>> {
        if !same_variety(q.variety(), k.variety()) {
            return Err(Error::VarietyMismatch);
        }
        let variety = k.variety();
        let witness = variety
            .witness()
            .ok_or_else(|| Error::MissingWitness(variety.name().into()))?
            .clone();
        let embedding = k
            .size()
            .checked_pow(witness.ell() as u32)
            .and_then(|p| p.checked_mul(q.size()));
        if embedding.is_none_or(|t| t > limits.max_carrier.saturating_mul(limits.max_carrier)) {
            return Err(Error::LimitsExceeded("K^l x Q exceeds the limits".into()));
        }
        let layouts: Vec<Layout> = match carriers {
            None if variety.kind().is_fiber_uniform() => vec![Layout::uniform(k, q)],
            None => {
                return Err(Error::UnsupportedVariety(format!(
                    "`{}` needs explicit carrier sizes",
                    variety.name()
                )))
            }
            Some(sizes) => {
                let mut out = Vec::new();
                let mut sizes = sizes.to_vec();
                sizes.sort_unstable();
                sizes.dedup();
                for &n in &sizes {
                    for comp in compositions(n, k.size(), q.size()) {
                        out.push(Layout::new(k, q, comp));
                    }
                }
                out
            }
        };
        let normalize = match (&witness.beta, witness.ell()) {
            (Term::App(op, args), 1)
                if carriers.is_none()
                    && args.as_slice() == [Term::Var(0), Term::Var(1)] =>
            {
                Some(*op)
            }
            _ => None,
        };
        layouts
            .into_iter()
            .map(|layout| {
                let search = layout.search(limits, normalize)?;
                Ok(Ext1Problem {
                    layout,
                    witness: witness.clone(),
                    limits: *limits,
                    search,
                })
            })
            .collect()
    }

    pub fn carrier_size(&self) -> usize {
        self.layout.size()
    }

    /// A fresh copy of the configured search.
    pub fn search(&self) -> TableSearch {
        self.search.clone()
    }

    /// The extension a solution describes, or `None` if it is not exact.
    pub fn ses_of(&self, tables: &[Vec<usize>]) -> Result<Option<ShortExactSeq>> {
        match self.layout.ses(tables)? {
            Ok(e) => Ok(Some(e)),
            Err(Error::NotExact(_)) => Ok(None),
            Err(e) => Err(e),
        }
    }

    /// Canonical form of a solution, or `None` if it is not exact.
    pub fn form_of(&self, tables: &[Vec<usize>]) -> Result<Option<CanonicalForm>> {
        match self.ses_of(tables)? {
            Some(e) => canonical_form_with(&e, &self.witness, &self.limits).map(Some),
            None => Ok(None),
        }
    }
}

/// Fiber sizes `[k, c_1, …]` with `q` entries, each `c_i ≥ 1`, summing to `n`,
/// in lexicographic order.
fn compositions(n: usize, k: usize, q: usize) -> Vec<Vec<usize>> {
    fn go(rest: usize, slots: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if slots == 0 {
            if rest == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for c in 1..=rest.saturating_sub(slots - 1) {
            cur.push(c);
            go(rest - c, slots - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n < k || (q == 1 && n != k) {
        return out;
    }
    let mut cur = vec![k];
    go(n - k, q - 1, &mut cur, &mut out);
    out
}

/// Sorted, deduplicated canonical forms of all extensions of `q` by `k`
/// (fiber-uniform varieties).
pub fn enumerate_ext1(q: &Alg, k: &Alg, limits: &Limits) -> Result<Vec<CanonicalForm>> {
    run_all(Ext1Problem::plan(q, k, None, limits)?)
}

/// As [`enumerate_ext1`], searching middle objects of the given sizes.
pub fn enumerate_ext1_with_carriers(
    q: &Alg,
    k: &Alg,
    carriers: &[usize],
    limits: &Limits,
) -> Result<Vec<CanonicalForm>> {
    run_all(Ext1Problem::plan(q, k, Some(carriers), limits)?)
}

fn run_all(problems: Vec<Ext1Problem>) -> Result<Vec<CanonicalForm>> {
    let mut forms = BTreeSet::new();
    for p in &problems {
        let mut err = None;
        p.search().run(|tables| match p.form_of(tables) {
            Ok(Some(f)) => {
                forms.insert(f);
                Flow::Continue
            }
            Ok(None) => Flow::Continue,
            Err(e) => {
                err = Some(e);
                Flow::Stop
            }
        })?;
        if let Some(e) = err {
            return Err(e);
        }
    }
    Ok(forms.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::builtins::{cyclic, named};
    use crate::algebra::VarietyPresentation;

    #[test]
    fn abelian_z2_by_z2() {
        let v = VarietyPresentation::abelian_groups();
        let z2 = cyclic(&v, 2).unwrap();
        assert_eq!(enumerate_ext1(&z2, &z2, &Limits::default()).unwrap().len(), 2);
    }

    #[test]
    fn groups_z3_by_z2() {
        let v = VarietyPresentation::groups();
        let (z2, z3) = (cyclic(&v, 2).unwrap(), cyclic(&v, 3).unwrap());
        let forms = enumerate_ext1(&z2, &z3, &Limits::default()).unwrap();
        assert_eq!(forms.len(), 2);
        for f in &forms {
            f.to_ses(&z3, &z2).unwrap();
        }
    }

    #[test]
    fn trivial_kernel_has_one_class() {
        for v in [
            VarietyPresentation::groups(),
            VarietyPresentation::loops(),
            VarietyPresentation::modules(4),
        ] {
            let zero = named(&v, "0").unwrap();
            let q = cyclic(&v, 4).unwrap();
            assert_eq!(enumerate_ext1(&q, &zero, &Limits::default()).unwrap().len(), 1);
        }
    }

    #[test]
    fn explicit_carriers_agree_for_groups() {
        let v = VarietyPresentation::groups();
        let z2 = cyclic(&v, 2).unwrap();
        let a = enumerate_ext1(&z2, &z2, &Limits::default()).unwrap();
        let b = enumerate_ext1_with_carriers(&z2, &z2, &[3, 4, 5], &Limits::default()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn composition_listing() {
        assert_eq!(compositions(5, 2, 3), vec![vec![2, 1, 2], vec![2, 2, 1]]);
        assert!(compositions(3, 2, 1).is_empty());
        assert_eq!(compositions(2, 2, 1), vec![vec![2]]);
    }

    #[test]
    fn monoids_need_a_witness() {
        let v = VarietyPresentation::monoids();
        let z2 = cyclic(&v, 2).unwrap();
        assert!(matches!(
            enumerate_ext1(&z2, &z2, &Limits::default()),
            Err(Error::MissingWitness(_))
        ));
    }
}
