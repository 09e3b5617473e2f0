use alloc::format;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use super::retract::{psi_map, MAX_EMBEDDING};
use super::ses::{sections_of, validate_ses, Sections, ShortExactSeq};
use crate::algebra::{
    alpha_tables, for_each_tuple, same_algebra, table_index, Alg, FiniteAlgebra, Homomorphism,
    MixedRadix, SemiAbelianWitness,
};
use crate::{Error, Limits, Result};

/// An extension transported onto a subset of `K^ℓ × Q`, in the form that
/// minimizes [`CanonicalForm::code`] over all pointed sections.
///
/// `subset` holds ascending mixed-radix codes (kernel digits first, `Q`
/// last); the transported element at position `i` is `subset[i]`, tables are
/// row-major over positions and `kmap[u]` is the position of `k(u)`.
///
/// The code is the concatenation of `ℓ`, `|K|`, `|Q|` (big-endian `u32`),
/// the subset as a bitmap over all of `K^ℓ × Q` (most significant bit
/// first), every operation table and `kmap` (entries as big-endian `u32`).
/// Ordering and equality are those of the code.
#[derive(Clone, Debug)]
pub struct CanonicalForm {
    pub ell: usize,
    pub k_size: usize,
    pub q_size: usize,
    pub subset: Vec<usize>,
    pub tables: Vec<Vec<usize>>,
    pub kmap: Vec<usize>,
    pub code: Vec<u8>,
}

impl PartialEq for CanonicalForm {
    fn eq(&self, other: &Self) -> bool {
        self.code == other.code
    }
}

impl Eq for CanonicalForm {}

impl PartialOrd for CanonicalForm {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CanonicalForm {
    fn cmp(&self, other: &Self) -> Ordering {
        self.code.cmp(&other.code)
    }
}

impl CanonicalForm {
    /// Assembles a form from its parts and computes the code.
    pub fn new(
        ell: usize,
        k_size: usize,
        q_size: usize,
        subset: Vec<usize>,
        tables: Vec<Vec<usize>>,
        kmap: Vec<usize>,
    ) -> Self {
        let code = encode(ell, k_size, q_size, &subset, &tables, &kmap);
        CanonicalForm {
            ell,
            k_size,
            q_size,
            subset,
            tables,
            kmap,
            code,
        }
    }

    pub fn radix(&self) -> MixedRadix {
        let mut r = vec![self.k_size; self.ell];
        r.push(self.q_size);
        MixedRadix::new(r)
    }

    /// Rebuilds the extension `K → X' → Q`, checking the equations of `X'`.
    pub fn to_ses(&self, k: &Alg, q: &Alg) -> Result<ShortExactSeq> {
        if k.size() != self.k_size || q.size() != self.q_size {
            return Err(Error::EndpointMismatch);
        }
        let x = Arc::new(FiniteAlgebra::new(
            k.variety().clone(),
            self.subset.len(),
            self.tables.clone(),
        )?);
        let radix = self.radix();
        let qmap = self.subset.iter().map(|&c| radix.digit(c, self.ell)).collect();
        let kh = Homomorphism::unchecked(k.clone(), x.clone(), self.kmap.clone())?;
        let qh = Homomorphism::unchecked(x, q.clone(), qmap)?;
        validate_ses(&kh, &qh)
    }
}

fn encode(
    ell: usize,
    k_size: usize,
    q_size: usize,
    subset: &[usize],
    tables: &[Vec<usize>],
    kmap: &[usize],
) -> Vec<u8> {
    let total = k_size.pow(ell as u32) * q_size;
    let mut out = Vec::new();
    for h in [ell, k_size, q_size] {
        out.extend_from_slice(&(h as u32).to_be_bytes());
    }
    let mut bitmap = vec![0u8; total.div_ceil(8)];
    for &c in subset {
        bitmap[c / 8] |= 0x80 >> (c % 8);
    }
    out.extend_from_slice(&bitmap);
    for t in tables {
        for &v in t {
            out.extend_from_slice(&(v as u32).to_be_bytes());
        }
    }
    for &v in kmap {
        out.extend_from_slice(&(v as u32).to_be_bytes());
    }
    out
}

/// [`canonical_form_with`] under default limits.
pub fn canonical_form(e: &ShortExactSeq, w: &SemiAbelianWitness) -> Result<CanonicalForm> {
    canonical_form_with(e, w, &Limits::default())
}

/// The least code over every pointed section `s` of the structure of `X`
/// transported along `ψ_s`. The number of sections is bounded by
/// `limits.max_nodes`.
pub fn canonical_form_with(
    e: &ShortExactSeq,
    w: &SemiAbelianWitness,
    limits: &Limits,
) -> Result<CanonicalForm> {
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
        return Err(Error::LimitsExceeded(format!("K^{ell} x Q is too large")));
    }
    let mut fibers = e.fibers();
    fibers[0] = vec![0];
    let count = Sections::count(&fibers);
    if count > limits.max_nodes as u128 {
        return Err(Error::LimitsExceeded(format!(
            "{count} sections exceed the node limit {}",
            limits.max_nodes
        )));
    }
    let alphas = alpha_tables(w, e.middle())?;
    let mut best: Option<CanonicalForm> = None;
    for s in sections_of(e) {
        let psi = psi_map(e, &s.map, w, &alphas, &radix)?;
        let cand = transport(e, &psi, ell, nk, nq)?;
        if best.as_ref().is_none_or(|b| cand.code < b.code) {
            best = Some(cand);
        }
    }
    best.ok_or_else(|| Error::InvalidData("no sections".into()))
}

/// The structure of `X` moved onto `ψ(X)`.
pub(crate) fn transport(
    e: &ShortExactSeq,
    psi: &[usize],
    ell: usize,
    nk: usize,
    nq: usize,
) -> Result<CanonicalForm> {
    let x = e.middle();
    let n = x.size();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_unstable_by_key(|&i| psi[i]);
    if order.windows(2).any(|p| psi[p[0]] == psi[p[1]]) {
        return Err(Error::WitnessViolation("psi is not injective".into()));
    }
    let subset: Vec<usize> = order.iter().map(|&i| psi[i]).collect();
    let mut pos = vec![0; n];
    for (p, &i) in order.iter().enumerate() {
        pos[i] = p;
    }
    let sig = x.variety().signature();
    let mut args = Vec::new();
    let tables = (0..sig.len())
        .map(|op| {
            let r = sig.arity(op);
            let mut t = vec![0; n.pow(r as u32)];
            for_each_tuple(n, r, |ps| {
                args.clear();
                args.extend(ps.iter().map(|&p| order[p]));
                t[table_index(n, ps)] = pos[x.apply(op, &args)];
            });
            t
        })
        .collect();
    let kmap = e.k().map().iter().map(|&y| pos[y]).collect();
    Ok(CanonicalForm::new(ell, nk, nq, subset, tables, kmap))
}

/// Equivalence over the same `K` and `Q`, decided by canonical forms.
pub fn are_equivalent(
    e1: &ShortExactSeq,
    e2: &ShortExactSeq,
    w: &SemiAbelianWitness,
) -> Result<bool> {
    if !same_algebra(e1.kernel_object(), e2.kernel_object()) || !same_algebra(e1.base(), e2.base())
    {
        return Err(Error::EndpointMismatch);
    }
    Ok(canonical_form(e1, w)? == canonical_form(e2, w)?)
}
