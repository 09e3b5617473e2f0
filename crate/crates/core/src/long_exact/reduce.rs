use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::modules::{free_map, Syzygy};
use super::sequence::{validate_exact_sequence, ExactSequence};
use crate::algebra::{fiber_product, same_algebra, Homomorphism};
use crate::{Error, Result};

/// Pulls a sequence of length `n + 1` from `K` to `Q` back along the syzygy
/// `Ω(Q) → P → Q` to one of length `n` from `K` to `Ω(Q)`.
///
/// `α_1: P → X_1` lifts `p` along `f_1` (free generators go to chosen
/// preimages); its restriction `ᾱ_1: Ω(Q) → I_2` lands in `ker f_1`.
/// `Y_1 = X_2 ×_{I_2} Ω(Q)` with `g_1` the projection to `Ω(Q)`, the kernel
/// `m_3` of `e_2` lifts to `l_2: I_3 → Y_1`, `g_2 = l_2 e_3`, and the maps
/// above `X_3` are kept.
pub fn pullback_reduce(e: &ExactSequence, s: &Syzygy) -> Result<ExactSequence> {
    let n = e.len();
    if n < 2 {
        return Err(Error::ShapeMismatch(
            "pullback reduction needs a sequence of length at least 2".into(),
        ));
    }
    if !same_algebra(s.base(), e.base()) {
        return Err(Error::EndpointMismatch);
    }
    let f1 = e.f(1);
    let inv = f1.preimage_table();
    let lifts = s
        .generators
        .iter()
        .map(|&g| inv[g].ok_or_else(|| Error::NoLift(format!("generator {g} is not hit by f_1"))))
        .collect::<Result<Vec<_>>>()?;
    let alpha1 = free_map(s.free(), s.rank(), e.object(1), &lifts)?;

    let (e2, m2) = (e.e(2), e.m(2));
    let m2_inv = m2.preimage_table();
    let bar = s
        .inclusion
        .map()
        .iter()
        .map(|&x| {
            let y = alpha1.apply(x);
            m2_inv[y].ok_or_else(|| Error::NoLift(format!("alpha_1 sends {x} outside ker f_1")))
        })
        .collect::<Result<Vec<_>>>()?;
    let bar = Homomorphism::unchecked(s.omega().clone(), m2.dom().clone(), bar)?;

    let (y1, alpha2, g1) = fiber_product(e2, &bar)?;
    let mut pos = vec![usize::MAX; alpha2.cod().size() * g1.cod().size()];
    for p in 0..y1.size() {
        pos[alpha2.apply(p) + alpha2.cod().size() * g1.apply(p)] = p;
    }
    let (e3, m3) = (e.e(3), e.m(3));
    let l2 = m3.map().iter().map(|&x| pos[x]).collect();
    let l2 = Homomorphism::unchecked(m3.dom().clone(), y1.clone(), l2)?;
    let g2 = e3.then(&l2)?;

    let mut maps: Vec<Homomorphism> = e.maps()[..n - 2].to_vec();
    maps.push(g2);
    maps.push(g1);
    validate_exact_sequence(&maps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::builtins::cyclic;
    use crate::algebra::{Alg, VarietyPresentation};
    use crate::ext1::validate_ses;
    use crate::long_exact::{splice, syzygy, yoneda_class_of};

    fn z(n: usize) -> Alg {
        cyclic(&VarietyPresentation::modules(4), n).unwrap()
    }

    fn nonsplit() -> ExactSequence {
        let k = Homomorphism::new(z(2), z(4), vec![0, 2]).unwrap();
        let q = Homomorphism::new(z(4), z(2), vec![0, 1, 0, 1]).unwrap();
        ExactSequence::from_ses(&validate_ses(&k, &q).unwrap())
    }

    #[test]
    fn length_two_reduces_to_nonsplit_ses() {
        let e = splice(&nonsplit(), &nonsplit()).unwrap();
        let s = syzygy(e.base()).unwrap();
        let r = pullback_reduce(&e, &s).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r.base().size(), 2);
        assert!(!yoneda_class_of(&r).unwrap().is_zero());
        let back = splice(&r, &s.sequence()).unwrap();
        assert_eq!(yoneda_class_of(&back).unwrap(), yoneda_class_of(&e).unwrap());
    }

    #[test]
    fn length_three() {
        let e = splice(&splice(&nonsplit(), &nonsplit()).unwrap(), &nonsplit()).unwrap();
        let s = syzygy(e.base()).unwrap();
        let r = pullback_reduce(&e, &s).unwrap();
        assert_eq!(r.len(), 2);
        let back = splice(&r, &s.sequence()).unwrap();
        assert_eq!(yoneda_class_of(&back).unwrap(), yoneda_class_of(&e).unwrap());
    }

    #[test]
    fn short_sequences_are_rejected() {
        let e = nonsplit();
        let s = syzygy(e.base()).unwrap();
        assert!(matches!(pullback_reduce(&e, &s), Err(Error::ShapeMismatch(_))));
    }
}
