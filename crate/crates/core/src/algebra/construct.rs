use alloc::format;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use super::congruence::{congruence_closure, quotient, Congruence};
use super::finite::{Alg, FiniteAlgebra};
use super::hom::{same_algebra, Homomorphism};
use super::variety::same_variety;
use crate::{Error, Result};

/// Mixed-radix numbering of tuples, first digit fastest, so the all-zero
/// tuple is `0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MixedRadix {
    radices: Vec<usize>,
}

impl MixedRadix {
    pub fn new(radices: Vec<usize>) -> Self {
        MixedRadix { radices }
    }

    pub fn radices(&self) -> &[usize] {
        &self.radices
    }

    pub fn total(&self) -> usize {
        self.radices.iter().product()
    }

    pub fn encode(&self, digits: &[usize]) -> usize {
        debug_assert_eq!(digits.len(), self.radices.len());
        digits
            .iter()
            .zip(&self.radices)
            .rev()
            .fold(0, |acc, (&d, &r)| acc * r + d)
    }

    pub fn decode_into(&self, mut idx: usize, out: &mut Vec<usize>) {
        out.clear();
        for &r in &self.radices {
            out.push(idx % r);
            idx /= r;
        }
    }

    pub fn decode(&self, idx: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.radices.len());
        self.decode_into(idx, &mut out);
        out
    }

    pub fn digit(&self, mut idx: usize, i: usize) -> usize {
        for &r in &self.radices[..i] {
            idx /= r;
        }
        idx % self.radices[i]
    }
}

/// A finite product with its projections.
#[derive(Clone, Debug)]
pub struct Product {
    pub algebra: Alg,
    pub factors: Vec<Alg>,
    pub radix: MixedRadix,
    pub projections: Vec<Homomorphism>,
}

impl Product {
    /// The map `A → ∏ B_i` with components `maps[i]`.
    pub fn pairing(&self, maps: &[Homomorphism]) -> Result<Homomorphism> {
        pairing(self, maps)
    }
}

pub fn product(a: &Alg, b: &Alg) -> Result<Product> {
    product_many(&[a.clone(), b.clone()])
}

/// `A^ℓ`; `ℓ = 0` gives the trivial algebra.
pub fn power(a: &Alg, ell: usize) -> Result<Product> {
    if ell == 0 {
        let t = Arc::new(FiniteAlgebra::trivial(a.variety().clone()));
        return Ok(Product {
            algebra: t,
            factors: Vec::new(),
            radix: MixedRadix::new(Vec::new()),
            projections: Vec::new(),
        });
    }
    product_many(&vec![a.clone(); ell])
}

/// Componentwise product; element index is the mixed-radix code of the
/// component tuple with the first factor fastest.
pub fn product_many(factors: &[Alg]) -> Result<Product> {
    let first = factors
        .first()
        .ok_or_else(|| Error::InvalidData("empty product".into()))?;
    if factors.iter().any(|f| !same_variety(f.variety(), first.variety())) {
        return Err(Error::VarietyMismatch);
    }
    let radix = MixedRadix::new(factors.iter().map(|f| f.size()).collect());
    let total = radix.total();
    let codes: Vec<usize> = (0..total).collect();
    let algebra = Arc::new(sub_product(factors, &radix, &codes)?);
    let projections = (0..factors.len())
        .map(|i| {
            let map = (0..total).map(|x| radix.digit(x, i)).collect();
            Homomorphism::trusted(algebra.clone(), factors[i].clone(), map)
        })
        .collect();
    Ok(Product {
        algebra,
        factors: factors.to_vec(),
        radix,
        projections,
    })
}

/// The algebra on a sorted set of product codes closed under the
/// componentwise operations, numbered in code order.
pub(crate) fn sub_product(
    factors: &[Alg],
    radix: &MixedRadix,
    codes: &[usize],
) -> Result<FiniteAlgebra> {
    let variety = factors[0].variety().clone();
    let sig = variety.signature();
    let mut pos = vec![usize::MAX; radix.total()];
    for (i, &c) in codes.iter().enumerate() {
        pos[c] = i;
    }
    let tuples: Vec<Vec<usize>> = codes.iter().map(|&c| radix.decode(c)).collect();
    let mut tables = Vec::with_capacity(sig.len());
    let mut comp = Vec::new();
    let mut out = vec![0; factors.len()];
    for op in 0..sig.len() {
        if op == sig.zero() {
            tables.push(vec![0]);
            continue;
        }
        let r = sig.arity(op);
        let mut t = Vec::with_capacity(codes.len().pow(r as u32));
        let mut bad = false;
        super::finite::for_each_tuple(codes.len(), r, |args| {
            for (i, f) in factors.iter().enumerate() {
                comp.clear();
                comp.extend(args.iter().map(|&a| tuples[a][i]));
                out[i] = f.apply(op, &comp);
            }
            let p = pos[radix.encode(&out)];
            if p == usize::MAX {
                bad = true;
                t.push(0);
            } else {
                t.push(p);
            }
        });
        if bad {
            return Err(Error::InvalidData(format!(
                "subset is not closed under `{}`",
                sig.name(op)
            )));
        }
        tables.push(t);
    }
    if codes.first() != Some(&0) {
        return Err(Error::InvalidData("subset does not contain 0".into()));
    }
    Ok(FiniteAlgebra::trusted(variety, codes.len(), tables))
}

/// The map `A → ∏ B_i` with the given components.
pub fn pairing(p: &Product, maps: &[Homomorphism]) -> Result<Homomorphism> {
    if maps.len() != p.factors.len() {
        return Err(Error::ShapeMismatch("one component per factor required".into()));
    }
    let dom = maps
        .first()
        .map(|m| m.dom().clone())
        .ok_or_else(|| Error::InvalidData("empty pairing".into()))?;
    for (m, f) in maps.iter().zip(&p.factors) {
        if !same_algebra(m.dom(), &dom) || !same_algebra(m.cod(), f) {
            return Err(Error::ShapeMismatch("pairing components do not match".into()));
        }
    }
    let mut digits = Vec::with_capacity(maps.len());
    let map = (0..dom.size())
        .map(|x| {
            digits.clear();
            digits.extend(maps.iter().map(|m| m.apply(x)));
            p.radix.encode(&digits)
        })
        .collect();
    Ok(Homomorphism::trusted(dom, p.algebra.clone(), map))
}

/// The subalgebra on `elems` (any order, duplicates allowed) with its
/// inclusion. Elements keep their relative order, so `0` stays `0`.
pub fn subalgebra(a: &Alg, elems: &[usize]) -> Result<(Alg, Homomorphism)> {
    let mut elems = elems.to_vec();
    elems.sort_unstable();
    elems.dedup();
    if elems.first() != Some(&0) {
        return Err(Error::InvalidData("subalgebra must contain 0".into()));
    }
    if let Some(&x) = elems.last().filter(|&&x| x >= a.size()) {
        return Err(Error::InvalidData(format!("element {x} outside the carrier")));
    }
    let radix = MixedRadix::new(vec![a.size()]);
    let sub = Arc::new(sub_product(core::slice::from_ref(a), &radix, &elems)?);
    let incl = Homomorphism::trusted(sub.clone(), a.clone(), elems);
    Ok((sub, incl))
}

/// Sorted carrier of the subalgebra generated by `gens` (and `0`).
pub fn generated_subalgebra(a: &Alg, gens: &[usize]) -> Vec<usize> {
    let n = a.size();
    let sig = a.variety().signature();
    let mut inside = vec![false; n];
    inside[0] = true;
    for &g in gens {
        inside[g] = true;
    }
    let mut members: Vec<usize> = (0..n).filter(|&x| inside[x]).collect();
    loop {
        let before = members.len();
        for op in 0..sig.len() {
            let r = sig.arity(op);
            let current = members.clone();
            let mut args = vec![0; r];
            super::finite::for_each_tuple(current.len(), r, |ix| {
                for (slot, &i) in args.iter_mut().zip(ix) {
                    *slot = current[i];
                }
                let y = a.apply(op, &args);
                if !inside[y] {
                    inside[y] = true;
                    members.push(y);
                }
            });
        }
        if members.len() == before {
            break;
        }
    }
    members.sort_unstable();
    members
}

/// Inclusion of `f⁻¹(0)` into the domain of `f`.
pub fn kernel(f: &Homomorphism) -> Result<Homomorphism> {
    let zeros: Vec<usize> = (0..f.dom().size()).filter(|&x| f.apply(x) == 0).collect();
    subalgebra(f.dom(), &zeros)
        .map(|(_, incl)| incl)
        .map_err(|_| Error::UnsupportedVariety("preimage of 0 is not a subalgebra".into()))
}

/// Projection of the codomain onto its quotient by the congruence generated
/// by `{(f(a), 0)}`.
pub fn cokernel(f: &Homomorphism) -> Homomorphism {
    let pairs: Vec<(usize, usize)> = f.map().iter().map(|&y| (y, 0)).collect();
    let c = congruence_closure(f.cod(), &pairs).expect("pairs lie in the codomain");
    quotient(f.cod(), &c).expect("closure is a congruence").1
}

/// Whether the injective map `k` is the kernel of its cokernel.
pub fn is_normal_mono(k: &Homomorphism) -> bool {
    if !k.is_injective() {
        return false;
    }
    match kernel(&cokernel(k)) {
        Ok(kk) => kk.map() == k.image().as_slice(),
        Err(_) => false,
    }
}

/// Whether the surjective map `q` is the cokernel of its kernel.
pub fn is_normal_epi(q: &Homomorphism) -> bool {
    if !q.is_surjective() {
        return false;
    }
    match kernel(q) {
        Ok(k) => {
            let c = cokernel(&k);
            Congruence::of_hom(&c).classes() == Congruence::of_hom(q).classes()
        }
        Err(_) => false,
    }
}

/// `f = m ∘ e` with `e` onto the image subalgebra and `m` its inclusion.
pub fn image_factorization(f: &Homomorphism) -> (Homomorphism, Homomorphism) {
    let (img, m) = subalgebra(f.cod(), &f.image()).expect("image of a homomorphism is closed");
    let inv = m.preimage_table();
    let e = Homomorphism::trusted(
        f.dom().clone(),
        img,
        f.map().iter().map(|&y| inv[y].expect("in the image")).collect(),
    );
    (e, m)
}

/// The image factorization when both halves are normal, otherwise `None`.
pub fn normal_image_factorization(f: &Homomorphism) -> Option<(Homomorphism, Homomorphism)> {
    let (e, m) = image_factorization(f);
    (is_normal_mono(&m) && is_normal_epi(&e)).then_some((e, m))
}

/// `A ×_C B` for `f: A → C`, `g: B → C`, as the subalgebra of `A × B` of
/// pairs with `f(a) = g(b)`, numbered by product code.
pub fn fiber_product(
    f: &Homomorphism,
    g: &Homomorphism,
) -> Result<(Alg, Homomorphism, Homomorphism)> {
    if !same_algebra(f.cod(), g.cod()) {
        return Err(Error::ShapeMismatch("fiber product over different bases".into()));
    }
    let (a, b) = (f.dom(), g.dom());
    let radix = MixedRadix::new(vec![a.size(), b.size()]);
    let mut codes = Vec::new();
    for y in 0..b.size() {
        for x in 0..a.size() {
            if f.apply(x) == g.apply(y) {
                codes.push(radix.encode(&[x, y]));
            }
        }
    }
    let p = Arc::new(sub_product(&[a.clone(), b.clone()], &radix, &codes)?);
    let p1 = codes.iter().map(|&c| radix.digit(c, 0)).collect();
    let p2 = codes.iter().map(|&c| radix.digit(c, 1)).collect();
    Ok((
        p.clone(),
        Homomorphism::trusted(p.clone(), a.clone(), p1),
        Homomorphism::trusted(p, b.clone(), p2),
    ))
}
