use alloc::vec::Vec;

use crate::algebra::{normal_image_factorization, same_algebra, Alg, Homomorphism};
use crate::ext1::{validate_ses, ShortExactSeq};
use crate::{Error, Result};

/// `0 → K → X_n → ⋯ → X_1 → Q → 0` with cached normal image
/// factorizations `f_i = m_i e_i` through `I_i`.
///
/// Maps are stored longest-first: `maps()[0]` is `f_{n+1}: K → X_n` and
/// `maps()[n]` is `f_1: X_1 → Q`. Methods taking an index `i` use the
/// numbering `f_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactSequence {
    maps: Vec<Homomorphism>,
    factors: Vec<(Homomorphism, Homomorphism)>,
}

impl ExactSequence {
    pub fn from_ses(e: &ShortExactSeq) -> Self {
        validate_exact_sequence(&[e.k().clone(), e.q().clone()]).expect("a short exact sequence")
    }

    /// The length `n`.
    pub fn len(&self) -> usize {
        self.maps.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn maps(&self) -> &[Homomorphism] {
        &self.maps
    }

    /// `f_i`, `1 ≤ i ≤ n + 1`.
    pub fn f(&self, i: usize) -> &Homomorphism {
        &self.maps[self.maps.len() - i]
    }

    /// `e_i: X_i → I_i` (with `X_{n+1} = K`).
    pub fn e(&self, i: usize) -> &Homomorphism {
        &self.factors[self.maps.len() - i].0
    }

    /// `m_i: I_i → X_{i-1}` (with `X_0 = Q`).
    pub fn m(&self, i: usize) -> &Homomorphism {
        &self.factors[self.maps.len() - i].1
    }

    /// `X_i`, `1 ≤ i ≤ n`.
    pub fn object(&self, i: usize) -> &Alg {
        self.f(i).dom()
    }

    pub fn kernel_object(&self) -> &Alg {
        self.maps[0].dom()
    }

    pub fn base(&self) -> &Alg {
        self.maps[self.maps.len() - 1].cod()
    }

    /// The short exact sequence `(m_{i+1}, e_i)` around `X_i`.
    pub fn junction(&self, i: usize) -> ShortExactSeq {
        validate_ses(self.m(i + 1), self.e(i)).expect("validated on construction")
    }

    /// For `n = 1`, the sequence as a pair `(k, q)`.
    pub fn as_ses(&self) -> Option<ShortExactSeq> {
        (self.len() == 1).then(|| validate_ses(&self.maps[0], &self.maps[1]).expect("exact"))
    }
}

/// Factorizes every map and checks that each `(m_{i+1}, e_i)` is a short
/// exact sequence, `f_{n+1}` is injective and `f_1` surjective. Errors name
/// the first offending map (`NotNormal`) or object `X_i` (`NotExactAt`).
pub fn validate_exact_sequence(maps: &[Homomorphism]) -> Result<ExactSequence> {
    if maps.len() < 2 {
        return Err(Error::ShapeMismatch(
            "an exact sequence needs at least two maps".into(),
        ));
    }
    if maps.windows(2).any(|w| !same_algebra(w[0].cod(), w[1].dom())) {
        return Err(Error::ShapeMismatch("maps are not composable".into()));
    }
    let total = maps.len();
    let mut factors = Vec::with_capacity(total);
    for (j, f) in maps.iter().enumerate() {
        if !f.is_homomorphism() {
            return Err(Error::NotHomomorphism(alloc::format!("f_{}", total - j)));
        }
        factors.push(normal_image_factorization(f).ok_or(Error::NotNormal(total - j))?);
    }
    let n = total - 1;
    // f_1 onto Q, then each X_i, then f_{n+1} injective.
    if !factors[n].1.is_surjective() {
        return Err(Error::NotExactAt(1));
    }
    for i in 1..=n {
        let (_, m_next) = &factors[total - (i + 1)];
        let (e_i, _) = &factors[total - i];
        if validate_ses(m_next, e_i).is_err() {
            return Err(Error::NotExactAt(i));
        }
    }
    if !maps[0].is_injective() {
        return Err(Error::NotExactAt(n));
    }
    Ok(ExactSequence {
        maps: maps.to_vec(),
        factors,
    })
}

/// `a` from `K` to `R` followed by `b` from `R` to `Q`, joined by
/// `X^a_1 → R → X^b_{n_b}`.
pub fn splice(a: &ExactSequence, b: &ExactSequence) -> Result<ExactSequence> {
    if !same_algebra(a.base(), b.kernel_object()) {
        return Err(Error::EndpointMismatch);
    }
    let la = a.maps.len();
    let mut maps: Vec<Homomorphism> = a.maps[..la - 1].to_vec();
    maps.push(a.maps[la - 1].then(&b.maps[0])?);
    maps.extend_from_slice(&b.maps[1..]);
    validate_exact_sequence(&maps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::builtins::{cyclic, named};
    use crate::algebra::VarietyPresentation;

    fn z4_seq() -> (Alg, Alg, ExactSequence) {
        let v = VarietyPresentation::modules(4);
        let (z2, z4) = (cyclic(&v, 2).unwrap(), cyclic(&v, 4).unwrap());
        let k = Homomorphism::new(z2.clone(), z4.clone(), alloc::vec![0, 2]).unwrap();
        let q = Homomorphism::new(z4.clone(), z2.clone(), alloc::vec![0, 1, 0, 1]).unwrap();
        let e = ExactSequence::from_ses(&validate_ses(&k, &q).unwrap());
        (z2, z4, e)
    }

    #[test]
    fn length_two_by_hand() {
        let (z2, z4, _) = z4_seq();
        let k = Homomorphism::new(z2.clone(), z4.clone(), alloc::vec![0, 2]).unwrap();
        let two = Homomorphism::new(z4.clone(), z4.clone(), alloc::vec![0, 2, 0, 2]).unwrap();
        let q = Homomorphism::new(z4.clone(), z2.clone(), alloc::vec![0, 1, 0, 1]).unwrap();
        let s = validate_exact_sequence(&[k, two, q]).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s.m(2).map(), &[0, 2]);
        assert_eq!(s.junction(1).kernel_object().size(), 2);
    }

    #[test]
    fn splice_of_two_copies() {
        let (_, _, e) = z4_seq();
        let s = splice(&e, &e).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s.f(2).map(), &[0, 2, 0, 2]);
    }

    #[test]
    fn non_exact_chain() {
        let v = VarietyPresentation::modules(4);
        let (z2, z4) = (cyclic(&v, 2).unwrap(), cyclic(&v, 4).unwrap());
        let zero = named(&v, "0").unwrap();
        let f2 = Homomorphism::zero(&zero, &z2).unwrap();
        let f1 = Homomorphism::new(z2, z4, alloc::vec![0, 2]).unwrap();
        assert_eq!(validate_exact_sequence(&[f2, f1]), Err(Error::NotExactAt(1)));
    }

    #[test]
    fn endpoints_must_match() {
        let (z2, _, e) = z4_seq();
        let id = Homomorphism::identity(&z2);
        let v = VarietyPresentation::modules(4);
        let z4 = cyclic(&v, 4).unwrap();
        let other = validate_exact_sequence(&[
            Homomorphism::zero(&named(&v, "0").unwrap(), &z4).unwrap(),
            Homomorphism::identity(&z4),
        ])
        .unwrap();
        assert!(validate_exact_sequence(&[id.clone(), id]).is_err());
        assert_eq!(splice(&e, &other), Err(Error::EndpointMismatch));
    }
}
