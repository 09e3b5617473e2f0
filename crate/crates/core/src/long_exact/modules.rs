use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::sequence::ExactSequence;
use crate::algebra::{
    generated_subalgebra, kernel, power, Alg, Homomorphism, MixedRadix, VarietyKind,
};
use crate::ext1::ShortExactSeq;
use crate::{Error, Result};

/// The ring modulus `m` of a `ℤ/m`-module.
pub fn modulus_of(a: &Alg) -> Result<usize> {
    match a.variety().kind() {
        VarietyKind::Module { modulus } => Ok(modulus),
        _ => Err(Error::UnsupportedVariety(format!(
            "syzygies are computed for Z/m-modules, not `{}`",
            a.variety().name()
        ))),
    }
}

fn add_op(a: &Alg) -> usize {
    a.variety().op("add").expect("modules have `add`")
}

/// `c·x`.
pub fn scalar(a: &Alg, c: usize, x: usize) -> usize {
    let add = add_op(a);
    (0..c).fold(0, |acc, _| a.apply2(add, acc, x))
}

/// `Σ c_j·x_j`.
pub fn combination(a: &Alg, coeffs: &[usize], elems: &[usize]) -> usize {
    let add = add_op(a);
    coeffs
        .iter()
        .zip(elems)
        .fold(0, |acc, (&c, &x)| a.apply2(add, acc, scalar(a, c, x)))
}

/// Least `k ≥ 1` with `k·x = 0`.
pub fn additive_order(a: &Alg, x: usize) -> usize {
    let add = add_op(a);
    let mut y = x;
    let mut k = 1;
    while y != 0 {
        y = a.apply2(add, y, x);
        k += 1;
    }
    k
}

/// The free module `(ℤ/m)^rank`; the element with coordinates `c` has code
/// `Σ c_j·m^j` and the basis vector `e_j` is `m^j`.
pub fn free_module(like: &Alg, rank: usize) -> Result<Alg> {
    let m = modulus_of(like)?;
    let ring = crate::algebra::builtins::cyclic(like.variety(), m)?;
    Ok(power(&ring, rank)?.algebra)
}

/// Coordinates of an element of a free module of the given rank.
pub fn coordinates(m: usize, rank: usize, x: usize) -> Vec<usize> {
    MixedRadix::new(vec![m; rank]).decode(x)
}

/// The homomorphism from a free module sending `e_j` to `images[j]`.
pub fn free_map(free: &Alg, rank: usize, cod: &Alg, images: &[usize]) -> Result<Homomorphism> {
    let m = modulus_of(free)?;
    if images.len() != rank {
        return Err(Error::ShapeMismatch(format!(
            "{} basis images for rank {rank}",
            images.len()
        )));
    }
    let radix = MixedRadix::new(vec![m; rank]);
    let mut digits = Vec::with_capacity(rank);
    let map = (0..free.size())
        .map(|x| {
            radix.decode_into(x, &mut digits);
            combination(cod, &digits, images)
        })
        .collect();
    Homomorphism::unchecked(free.clone(), cod.clone(), map)
}

/// A generating set chosen greedily: repeatedly the element of largest
/// additive order outside the span so far, ties broken by the position of
/// the element in `priority` (a permutation of the carrier).
pub fn greedy_generators(a: &Alg, priority: &[usize]) -> Vec<usize> {
    let orders: Vec<usize> = (0..a.size()).map(|x| additive_order(a, x)).collect();
    let mut gens = Vec::new();
    let mut inside = vec![false; a.size()];
    inside[0] = true;
    loop {
        let next = priority
            .iter()
            .copied()
            .filter(|&x| !inside[x])
            .fold(None, |best: Option<usize>, x| match best {
                Some(b) if orders[b] >= orders[x] => Some(b),
                _ => Some(x),
            });
        let Some(g) = next else { break };
        gens.push(g);
        for y in generated_subalgebra(a, &gens) {
            inside[y] = true;
        }
    }
    gens
}

/// A syzygy `0 → Ω(Q) →w P →p Q → 0` with `P` free on `generators`.
#[derive(Clone, Debug)]
pub struct Syzygy {
    pub generators: Vec<usize>,
    pub cover: Homomorphism,
    pub inclusion: Homomorphism,
}

impl Syzygy {
    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    /// `P`.
    pub fn free(&self) -> &Alg {
        self.cover.dom()
    }

    /// `Ω(Q)`.
    pub fn omega(&self) -> &Alg {
        self.inclusion.dom()
    }

    pub fn base(&self) -> &Alg {
        self.cover.cod()
    }

    pub fn ses(&self) -> ShortExactSeq {
        crate::ext1::validate_ses(&self.inclusion, &self.cover).expect("syzygies are exact")
    }

    pub fn sequence(&self) -> ExactSequence {
        ExactSequence::from_ses(&self.ses())
    }
}

/// The syzygy on the greedy generating set with ties broken by carrier index.
pub fn syzygy(q: &Alg) -> Result<Syzygy> {
    let priority: Vec<usize> = (0..q.size()).collect();
    syzygy_with(q, &priority)
}

/// The syzygy on the greedy generating set with ties broken by `priority`.
pub fn syzygy_with(q: &Alg, priority: &[usize]) -> Result<Syzygy> {
    modulus_of(q)?;
    let generators = greedy_generators(q, priority);
    let free = free_module(q, generators.len())?;
    let cover = free_map(&free, generators.len(), q, &generators)?;
    let inclusion = kernel(&cover)?;
    Ok(Syzygy {
        generators,
        cover,
        inclusion,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::builtins::{cyclic, named};
    use crate::algebra::VarietyPresentation;

    #[test]
    fn free_module_has_no_syzygy() {
        let v = VarietyPresentation::modules(4);
        let z4 = cyclic(&v, 4).unwrap();
        let s = syzygy(&z4).unwrap();
        assert_eq!(s.rank(), 1);
        assert_eq!(s.omega().size(), 1);
        assert_eq!(s.cover.map(), &[0, 1, 2, 3]);
    }

    #[test]
    fn z2_over_z4() {
        let v = VarietyPresentation::modules(4);
        let z2 = cyclic(&v, 2).unwrap();
        let s = syzygy(&z2).unwrap();
        assert_eq!(s.free().size(), 4);
        assert_eq!(s.inclusion.map(), &[0, 2]);
        s.ses();
    }

    #[test]
    fn zero_module() {
        let v = VarietyPresentation::modules(4);
        let zero = named(&v, "0").unwrap();
        let s = syzygy(&zero).unwrap();
        assert_eq!((s.rank(), s.free().size(), s.omega().size()), (0, 1, 1));
    }

    #[test]
    fn greedy_prefers_large_order() {
        let v = VarietyPresentation::modules(4);
        let a = named(&v, "Z2xZ4").unwrap();
        let gens = greedy_generators(&a, &(0..8).collect::<Vec<_>>());
        assert_eq!(gens.len(), 2);
        assert_eq!(additive_order(&a, gens[0]), 4);
        assert_eq!(combination(&a, &[2, 1], &[gens[0], gens[0]]), scalar(&a, 3, gens[0]));
    }

    #[test]
    fn not_a_module() {
        let g = cyclic(&VarietyPresentation::groups(), 2).unwrap();
        assert!(matches!(syzygy(&g), Err(Error::UnsupportedVariety(_))));
    }
}
