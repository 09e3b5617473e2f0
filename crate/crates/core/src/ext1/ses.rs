use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::{
    cokernel, fiber_product, is_normal_epi, is_normal_mono, same_algebra, Alg, Congruence,
    Homomorphism, VarietyKind,
};
use crate::{Error, ExactnessFailure, Result};

/// A validated pair `K →k X →q Q` with `k = ker q` and `q = coker k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShortExactSeq {
    k: Homomorphism,
    q: Homomorphism,
}

impl ShortExactSeq {
    pub fn k(&self) -> &Homomorphism {
        &self.k
    }

    pub fn q(&self) -> &Homomorphism {
        &self.q
    }

    /// `K`.
    pub fn kernel_object(&self) -> &Alg {
        self.k.dom()
    }

    /// `X`.
    pub fn middle(&self) -> &Alg {
        self.k.cod()
    }

    /// `Q`.
    pub fn base(&self) -> &Alg {
        self.q.cod()
    }

    /// Elements of `X` over each `v ∈ Q`, ascending.
    pub fn fibers(&self) -> Vec<Vec<usize>> {
        let mut f = vec![Vec::new(); self.base().size()];
        for (x, &v) in self.q.map().iter().enumerate() {
            f[v].push(x);
        }
        f
    }

    /// Inverse of `k` on its image.
    pub fn k_inverse(&self) -> Vec<Option<usize>> {
        self.k.preimage_table()
    }

    /// The same sequence with `X` relabeled by `perm` (old `x` becomes
    /// `perm[x]`).
    pub fn relabel(&self, perm: &[usize]) -> Result<ShortExactSeq> {
        let x = alloc::sync::Arc::new(self.middle().relabel(perm)?);
        let k = self.k.map().iter().map(|&y| perm[y]).collect();
        let inv = crate::algebra::invert_permutation(perm, perm.len())?;
        let q = (0..perm.len()).map(|y| self.q.apply(inv[y])).collect();
        Ok(ShortExactSeq {
            k: Homomorphism::unchecked(self.kernel_object().clone(), x.clone(), k)?,
            q: Homomorphism::unchecked(x, self.base().clone(), q)?,
        })
    }
}

/// Checks exactness three ways (kernel and cokernel; normal mono and
/// cokernel; kernel and normal epi) and insists they agree.
pub fn validate_ses(k: &Homomorphism, q: &Homomorphism) -> Result<ShortExactSeq> {
    if !same_algebra(k.cod(), q.dom()) {
        return Err(ExactnessFailure::NotComposable.into());
    }
    if !k.is_homomorphism() {
        return Err(ExactnessFailure::KernelMapNotHomomorphism.into());
    }
    if !q.is_homomorphism() {
        return Err(ExactnessFailure::QuotientMapNotHomomorphism.into());
    }
    let injective = k.is_injective();
    let surjective = q.is_surjective();
    let zeros: Vec<usize> = (0..q.dom().size()).filter(|&x| q.apply(x) == 0).collect();
    let is_ker = injective && k.image() == zeros;
    let coker = cokernel(k);
    let is_coker =
        surjective && Congruence::of_hom(q).classes() == Congruence::of_hom(&coker).classes();
    let first = is_ker && is_coker;
    let second = is_normal_mono(k) && is_coker;
    let third = is_ker && is_normal_epi(q);
    if first != second || first != third {
        return Err(ExactnessFailure::Inconsistent {
            first,
            second,
            third,
        }
        .into());
    }
    if !first {
        let why = if !injective {
            ExactnessFailure::NotInjective
        } else if !surjective {
            ExactnessFailure::NotSurjective
        } else if !is_ker {
            ExactnessFailure::NotKernel
        } else {
            ExactnessFailure::NotCokernel
        };
        return Err(why.into());
    }
    Ok(ShortExactSeq {
        k: k.clone(),
        q: q.clone(),
    })
}

/// A pointed set-theoretic section of `q`: `q(s(v)) = v`, `s(0) = 0`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Section {
    pub map: Vec<usize>,
}

impl Section {
    pub fn is_section_of(&self, e: &ShortExactSeq) -> bool {
        self.map.len() == e.base().size()
            && self.map.first() == Some(&0)
            && self
                .map
                .iter()
                .enumerate()
                .all(|(v, &x)| x < e.middle().size() && e.q().apply(x) == v)
    }
}

/// All pointed sections in lexicographic order of their map arrays.
#[derive(Clone, Debug)]
pub struct Sections {
    fibers: Vec<Vec<usize>>,
    digits: Vec<usize>,
    done: bool,
}

impl Sections {
    /// Number of sections still to come from a fresh iterator.
    pub fn count(fibers: &[Vec<usize>]) -> u128 {
        fibers.iter().skip(1).map(|f| f.len() as u128).product()
    }
}

impl Iterator for Sections {
    type Item = Section;

    fn next(&mut self) -> Option<Section> {
        if self.done {
            return None;
        }
        let map = self
            .digits
            .iter()
            .zip(&self.fibers)
            .map(|(&d, f)| f[d])
            .collect();
        let mut i = self.digits.len();
        loop {
            if i <= 1 {
                self.done = true;
                break;
            }
            i -= 1;
            self.digits[i] += 1;
            if self.digits[i] < self.fibers[i].len() {
                break;
            }
            self.digits[i] = 0;
        }
        Some(Section { map })
    }
}

pub fn sections_of(e: &ShortExactSeq) -> Sections {
    let mut fibers = e.fibers();
    fibers[0] = vec![0];
    Sections {
        digits: vec![0; fibers.len()],
        fibers,
        done: false,
    }
}

/// Whether `k(K)` commutes with all of `X` (groups); always true for
/// abelian groups and modules.
pub fn is_central(e: &ShortExactSeq) -> Result<bool> {
    let x = e.middle();
    match x.variety().kind() {
        VarietyKind::AbelianGroup | VarietyKind::Module { .. } => Ok(true),
        VarietyKind::Group => {
            let mul = x.variety().require_op("mul")?;
            Ok(e.k().map().iter().all(|&ku| {
                (0..x.size()).all(|y| x.apply2(mul, ku, y) == x.apply2(mul, y, ku))
            }))
        }
        _ => Err(Error::UnsupportedVariety(alloc::format!(
            "centrality is defined here for groups and modules, not `{}`",
            x.variety().name()
        ))),
    }
}

/// Pulls `e` back along `eta: Q' → Q`: the middle object is
/// `X ×_Q Q' ⊆ X × Q'`, the kernel map `u ↦ (k(u), 0)`.
pub fn pullback_ses(e: &ShortExactSeq, eta: &Homomorphism) -> Result<ShortExactSeq> {
    let (p, _, p2) = fiber_product(e.q(), eta)?;
    // Elements of P are numbered by product code `x + |X|·v`, ascending.
    let nx = e.middle().size();
    let mut pos = vec![usize::MAX; nx * eta.dom().size()];
    let mut i = 0;
    for v in 0..eta.dom().size() {
        for x in 0..nx {
            if e.q().apply(x) == eta.apply(v) {
                pos[x + nx * v] = i;
                i += 1;
            }
        }
    }
    let k = e.k().map().iter().map(|&x| pos[x]).collect();
    let k = Homomorphism::unchecked(e.kernel_object().clone(), p.clone(), k)?;
    validate_ses(&k, &p2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::builtins::{cyclic, named};
    use crate::algebra::VarietyPresentation;

    fn z4_over_z2() -> ShortExactSeq {
        let v = VarietyPresentation::groups();
        let (z2, z4) = (cyclic(&v, 2).unwrap(), cyclic(&v, 4).unwrap());
        let k = Homomorphism::new(z2.clone(), z4.clone(), vec![0, 2]).unwrap();
        let q = Homomorphism::new(z4, z2, vec![0, 1, 0, 1]).unwrap();
        validate_ses(&k, &q).unwrap()
    }

    #[test]
    fn validation_examples() {
        let v = VarietyPresentation::groups();
        let z2 = cyclic(&v, 2).unwrap();
        let zero = named(&v, "0").unwrap();
        let id = Homomorphism::identity(&z2);
        let k0 = Homomorphism::zero(&zero, &z2).unwrap();
        assert!(validate_ses(&k0, &id).is_ok());
        z4_over_z2();
        assert_eq!(
            validate_ses(&id, &id),
            Err(Error::NotExact(ExactnessFailure::NotKernel))
        );
    }

    #[test]
    fn section_counts() {
        let e = z4_over_z2();
        let s: Vec<Section> = sections_of(&e).collect();
        assert_eq!(s.len(), 2);
        assert_eq!(s[0].map, vec![0, 1]);
        assert_eq!(s[1].map, vec![0, 3]);
        assert!(s.iter().all(|x| x.is_section_of(&e)));
    }

    #[test]
    fn centrality() {
        assert!(is_central(&z4_over_z2()).unwrap());
        let v = VarietyPresentation::groups();
        let s3 = named(&v, "S3").unwrap();
        let z2 = cyclic(&v, 2).unwrap();
        // Sign map: the even permutations are 0, 3, 4 in lexicographic order.
        let sign = Homomorphism::new(s3.clone(), z2, vec![0, 1, 1, 0, 0, 1]).unwrap();
        let k = crate::algebra::kernel(&sign).unwrap();
        let e = validate_ses(&k, &sign).unwrap();
        assert!(!is_central(&e).unwrap());
        let m = VarietyPresentation::monoids();
        let t = named(&m, "Z2").unwrap();
        let id = Homomorphism::identity(&t);
        let zero = named(&m, "0").unwrap();
        let e = validate_ses(&Homomorphism::zero(&zero, &t).unwrap(), &id).unwrap();
        assert!(is_central(&e).is_err());
    }

    #[test]
    fn pullback_along_identity_and_zero() {
        let e = z4_over_z2();
        let id = Homomorphism::identity(e.base());
        let p = pullback_ses(&e, &id).unwrap();
        assert_eq!(p.middle().size(), 4);
        let zero = Homomorphism::zero(e.base(), e.base()).unwrap();
        let p = pullback_ses(&e, &zero).unwrap();
        assert_eq!(p.middle().size(), 4);
        // Split: the middle is the Klein group, every element has order 2.
        let x = p.middle();
        let mul = x.variety().op("mul").unwrap();
        assert!((0..4).all(|a| x.apply2(mul, a, a) == 0));
    }
}
