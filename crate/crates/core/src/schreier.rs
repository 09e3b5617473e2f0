//! Schreier extensions of monoids (written additively): short exact
//! sequences `K →k X →q Q` in which every fiber `q⁻¹(v)` has an element
//! `x_v` with `u ↦ k(u) + x_v` a bijection `K → q⁻¹(v)`.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::{
    same_algebra, Alg, FiniteAlgebra, Homomorphism, MixedRadix, UnionFind, VarietyKind,
    VarietyPresentation,
};
use crate::ext1::enumerate::Layout;
use crate::ext1::{
    canonical::transport, find_morphism, validate_ses, CanonicalForm, MorphismKind,
    RetractPair, ShortExactSeq,
};
use crate::search::{Flow, TableSearch};
use crate::{Error, Limits, Result};

fn add_op(e: &ShortExactSeq) -> Result<usize> {
    let v = e.middle().variety();
    if v.kind() != VarietyKind::Monoid {
        return Err(Error::UnsupportedVariety(format!(
            "Schreier extensions are defined for monoids, not `{}`",
            v.name()
        )));
    }
    v.require_op("add")
}

/// A pointed section `s` of `q` and the function `p: X → K` with
/// `qs = 1_Q`, `kp + sq = 1_X` and `p(k(u) + s(v)) = u`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct SchreierData {
    pub section: Vec<usize>,
    pub retraction: Vec<usize>,
}

impl SchreierData {
    /// The transversal element `x_v = s(v)`.
    pub fn transversal(&self, v: usize) -> usize {
        self.section[v]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SchreierCheck {
    Schreier(SchreierData),
    /// No element of the fiber over `fiber` works as `x_v`.
    NotSchreier { fiber: usize },
}

impl SchreierCheck {
    pub fn is_schreier(&self) -> bool {
        matches!(self, SchreierCheck::Schreier(_))
    }
}

/// Whether `u ↦ k(u) + x_v` is a bijection onto the fiber of `x_v`.
fn decomposes(e: &ShortExactSeq, add: usize, fiber: &[usize], xv: usize) -> bool {
    let x = e.middle();
    if fiber.len() != e.kernel_object().size() {
        return false;
    }
    let mut seen = vec![false; x.size()];
    (0..e.kernel_object().size()).all(|u| {
        let y = x.apply2(add, e.k().apply(u), xv);
        e.q().apply(y) == e.q().apply(xv) && !core::mem::replace(&mut seen[y], true)
    })
}

/// Valid transversal elements of every fiber in ascending order
/// (`x_0 = 0` only).
fn transversal_candidates(e: &ShortExactSeq, add: usize) -> Vec<Vec<usize>> {
    e.fibers()
        .iter()
        .enumerate()
        .map(|(v, fiber)| {
            let pool: &[usize] = if v == 0 { &[0] } else { fiber };
            pool.iter()
                .copied()
                .filter(|&xv| decomposes(e, add, fiber, xv))
                .collect()
        })
        .collect()
}

/// `p` for the section `s`: `p(k(u) + s(v)) = u`.
fn retraction_for(e: &ShortExactSeq, add: usize, section: &[usize]) -> Vec<usize> {
    let x = e.middle();
    let mut p = vec![0; x.size()];
    for (v, &xv) in section.iter().enumerate() {
        debug_assert_eq!(e.q().apply(xv), v);
        for u in 0..e.kernel_object().size() {
            p[x.apply2(add, e.k().apply(u), xv)] = u;
        }
    }
    p
}

/// The definitional check: the first valid `x_v` per fiber (fiber order,
/// then element order) with `x_0 = 0`.
pub fn is_schreier(e: &ShortExactSeq) -> Result<SchreierCheck> {
    let add = add_op(e)?;
    let cands = transversal_candidates(e, add);
    if let Some(fiber) = cands.iter().position(Vec::is_empty) {
        return Ok(SchreierCheck::NotSchreier { fiber });
    }
    let section: Vec<usize> = cands.iter().map(|c| c[0]).collect();
    let retraction = retraction_for(e, add, &section);
    debug_assert_eq!(
        e.middle().size(),
        e.kernel_object().size() * e.base().size()
    );
    Ok(SchreierCheck::Schreier(SchreierData {
        section,
        retraction,
    }))
}

/// The three identities `qs = 1_Q`, `kp + sq = 1_X`, `p(k(u) + s(v)) = u`,
/// plus `s(0) = 0`, checked pointwise.
pub fn check_sp_characterisation(e: &ShortExactSeq, d: &SchreierData) -> Result<bool> {
    let add = add_op(e)?;
    let (x, nk, nq) = (e.middle(), e.kernel_object().size(), e.base().size());
    if d.section.len() != nq
        || d.retraction.len() != x.size()
        || d.section.iter().any(|&y| y >= x.size())
        || d.retraction.iter().any(|&u| u >= nk)
    {
        return Ok(false);
    }
    let qs = (0..nq).all(|v| e.q().apply(d.section[v]) == v);
    let kp_sq = (0..x.size()).all(|y| {
        x.apply2(
            add,
            e.k().apply(d.retraction[y]),
            d.section[e.q().apply(y)],
        ) == y
    });
    let p_inv = (0..nk).all(|u| {
        (0..nq).all(|v| d.retraction[x.apply2(add, e.k().apply(u), d.section[v])] == u)
    });
    Ok(qs && kp_sq && p_inv && d.section[0] == 0)
}

/// `φ(u, v) = k(u) + s(v)` and `ψ(x) = (p(x), q(x))` on `K × Q` (code
/// `u + |K|·v`); errors if any retract identity fails.
pub fn schreier_retract(e: &ShortExactSeq, d: &SchreierData) -> Result<RetractPair> {
    let add = add_op(e)?;
    if !check_sp_characterisation(e, d)? {
        return Err(Error::InvalidData("not Schreier data for this extension".into()));
    }
    let x = e.middle();
    let (nk, nq) = (e.kernel_object().size(), e.base().size());
    let radix = MixedRadix::new(vec![nk, nq]);
    let phi = (0..nk * nq)
        .map(|c| x.apply2(add, e.k().apply(c % nk), d.section[c / nk]))
        .collect();
    let psi = (0..x.size())
        .map(|y| radix.encode(&[d.retraction[y], e.q().apply(y)]))
        .collect();
    let pair = RetractPair {
        ell: 1,
        radix,
        section: d.section.clone(),
        phi,
        psi,
    };
    let failures = pair.failures(e);
    if !failures.is_empty() {
        return Err(Error::InvalidData(format!("retract identities fail: {failures:?}")));
    }
    Ok(pair)
}

/// Every valid choice of Schreier data, in lexicographic order of sections.
pub fn all_schreier_data(e: &ShortExactSeq) -> Result<Vec<SchreierData>> {
    let add = add_op(e)?;
    let cands = transversal_candidates(e, add);
    let mut out = Vec::new();
    if cands.iter().any(Vec::is_empty) {
        return Ok(out);
    }
    let mut digits = vec![0; cands.len()];
    loop {
        let section: Vec<usize> = digits.iter().zip(&cands).map(|(&d, c)| c[d]).collect();
        let retraction = retraction_for(e, add, &section);
        out.push(SchreierData {
            section,
            retraction,
        });
        let mut i = cands.len();
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            digits[i] += 1;
            if digits[i] < cands[i].len() {
                break;
            }
            digits[i] = 0;
        }
    }
}

/// The least transported structure on `K × Q` over all Schreier data.
pub fn canonical_form_schreier(e: &ShortExactSeq) -> Result<CanonicalForm> {
    if let SchreierCheck::NotSchreier { fiber } = is_schreier(e)? {
        return Err(Error::NotSchreier { fiber });
    }
    let (nk, nq) = (e.kernel_object().size(), e.base().size());
    let mut best: Option<CanonicalForm> = None;
    for d in all_schreier_data(e)? {
        let psi: Vec<usize> = (0..e.middle().size())
            .map(|y| d.retraction[y] + nk * e.q().apply(y))
            .collect();
        let f = transport(e, &psi, 1, nk, nq)?;
        if best.as_ref().is_none_or(|b| f.code < b.code) {
            best = Some(f);
        }
    }
    Ok(best.expect("Schreier extensions have data"))
}

/// The table search for Schreier extensions of `Q` by `K` on `K × Q` with
/// `(u,0) + (0,v) = (u,v)`.
#[derive(Clone, Debug)]
pub struct SchreierProblem {
    layout: Layout,
    search: TableSearch,
}

impl SchreierProblem {
    pub fn new(q: &Alg, k: &Alg, limits: &Limits) -> Result<Self> {
        for a in [q, k] {
            if a.variety().kind() != VarietyKind::Monoid {
                return Err(Error::UnsupportedVariety(format!(
                    "Schreier extensions are defined for monoids, not `{}`",
                    a.variety().name()
                )));
            }
        }
        if !crate::algebra::same_variety(q.variety(), k.variety()) {
            return Err(Error::VarietyMismatch);
        }
        let layout = Layout::uniform(k, q);
        let add = k.variety().require_op("add")?;
        let search = layout.search(limits, Some(add))?;
        Ok(SchreierProblem { layout, search })
    }

    pub fn search(&self) -> TableSearch {
        self.search.clone()
    }

    /// The canonical form of a solution if it is a Schreier extension.
    pub fn form_of(&self, tables: &[Vec<usize>]) -> Result<Option<CanonicalForm>> {
        let e = match self.layout.ses(tables)? {
            Ok(e) => e,
            Err(Error::NotExact(_)) => return Ok(None),
            Err(err) => return Err(err),
        };
        if !is_schreier(&e)?.is_schreier() {
            return Ok(None);
        }
        canonical_form_schreier(&e).map(Some)
    }
}

/// Distinct canonical forms and their classes: connected components of the
/// graph joining two forms when an endpoint-fixing homomorphism exists in
/// either direction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchreierClasses {
    pub forms: Vec<CanonicalForm>,
    /// Indices into `forms`, each ascending; ordered by least index.
    pub classes: Vec<Vec<usize>>,
}

impl SchreierClasses {
    pub fn class_of(&self, form: &CanonicalForm) -> Option<usize> {
        let i = self.forms.binary_search(form).ok()?;
        self.classes.iter().position(|c| c.contains(&i))
    }
}

/// Groups sorted, deduplicated forms into classes.
pub fn schreier_classes(q: &Alg, k: &Alg, forms: Vec<CanonicalForm>) -> Result<SchreierClasses> {
    let forms: Vec<CanonicalForm> = forms.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
    let seqs = forms
        .iter()
        .map(|f| f.to_ses(k, q))
        .collect::<Result<Vec<_>>>()?;
    let mut uf = UnionFind::new(forms.len());
    for i in 0..seqs.len() {
        for j in i + 1..seqs.len() {
            if uf.find(i) == uf.find(j) {
                continue;
            }
            if find_morphism(&seqs[i], &seqs[j], MorphismKind::Any)?.is_some()
                || find_morphism(&seqs[j], &seqs[i], MorphismKind::Any)?.is_some()
            {
                uf.union(i, j);
            }
        }
    }
    let mut by_root: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..forms.len() {
        by_root.entry(uf.find(i)).or_default().push(i);
    }
    let mut classes: Vec<Vec<usize>> = by_root.into_values().collect();
    classes.sort();
    Ok(SchreierClasses { forms, classes })
}

/// All Schreier extensions of `q` by `k` up to equivalence.
pub fn enumerate_schreier(q: &Alg, k: &Alg, limits: &Limits) -> Result<SchreierClasses> {
    let problem = SchreierProblem::new(q, k, limits)?;
    let mut forms = BTreeSet::new();
    let mut err = None;
    problem.search().run(|tables| match problem.form_of(tables) {
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
    schreier_classes(q, k, forms.into_iter().collect())
}

/// Whether two Schreier extensions with the same ends are connected by a
/// zigzag of morphisms.
pub fn are_equivalent_schreier(
    e1: &ShortExactSeq,
    e2: &ShortExactSeq,
    limits: &Limits,
) -> Result<bool> {
    if !same_algebra(e1.kernel_object(), e2.kernel_object()) || !same_algebra(e1.base(), e2.base())
    {
        return Err(Error::EndpointMismatch);
    }
    let (f1, f2) = (canonical_form_schreier(e1)?, canonical_form_schreier(e2)?);
    if f1 == f2 {
        return Ok(true);
    }
    let classes = enumerate_schreier(e1.base(), e1.kernel_object(), limits)?;
    let c1 = classes.class_of(&f1);
    Ok(c1.is_some() && c1 == classes.class_of(&f2))
}

/// The monoid `(A, op, 0)` underlying an algebra with an associative binary
/// operation named `op` and identity `0`.
pub fn underlying_monoid(a: &Alg, op: &str) -> Result<Alg> {
    let i = a.variety().require_op(op)?;
    let table = a.table(i).to_vec();
    let m = VarietyPresentation::monoids();
    Ok(Arc::new(FiniteAlgebra::new(m, a.size(), vec![vec![0], table])?))
}

/// The same sequence with every object replaced by its underlying monoid.
pub fn underlying_monoid_ses(e: &ShortExactSeq, op: &str) -> Result<ShortExactSeq> {
    let k = underlying_monoid(e.kernel_object(), op)?;
    let x = underlying_monoid(e.middle(), op)?;
    let q = underlying_monoid(e.base(), op)?;
    validate_ses(
        &Homomorphism::new(k, x.clone(), e.k().map().to_vec())?,
        &Homomorphism::new(x, q, e.q().map().to_vec())?,
    )
}
