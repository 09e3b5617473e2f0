use alloc::vec;
use alloc::vec::Vec;

use super::ses::ShortExactSeq;
use crate::algebra::{for_each_tuple, same_algebra, Homomorphism};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MorphismKind {
    /// Any homomorphism.
    Any,
    /// Only bijective homomorphisms.
    Bijective,
}

/// A homomorphism `ξ: X_1 → X_2` with `ξ k_1 = k_2` and `q_2 ξ = q_1`, found
/// by backtracking; values forced by the operations are propagated.
pub fn find_morphism(
    e1: &ShortExactSeq,
    e2: &ShortExactSeq,
    kind: MorphismKind,
) -> Result<Option<Homomorphism>> {
    if !same_algebra(e1.kernel_object(), e2.kernel_object()) || !same_algebra(e1.base(), e2.base())
    {
        return Err(Error::EndpointMismatch);
    }
    let (x1, x2) = (e1.middle(), e2.middle());
    if kind == MorphismKind::Bijective && x1.size() != x2.size() {
        return Ok(None);
    }
    let fibers2 = e2.fibers();
    let mut st = State {
        e1,
        e2,
        bijective: kind == MorphismKind::Bijective,
        xi: vec![None; x1.size()],
        used: vec![false; x2.size()],
    };
    for u in 0..e1.kernel_object().size() {
        if !st.set(e1.k().apply(u), e2.k().apply(u)) {
            return Ok(None);
        }
    }
    if !st.close() {
        return Ok(None);
    }
    Ok(st.search(&fibers2).map(|map| {
        Homomorphism::unchecked(x1.clone(), x2.clone(), map).expect("shapes match")
    }))
}

#[derive(Clone)]
struct State<'a> {
    e1: &'a ShortExactSeq,
    e2: &'a ShortExactSeq,
    bijective: bool,
    xi: Vec<Option<usize>>,
    used: Vec<bool>,
}

impl State<'_> {
    fn set(&mut self, x: usize, y: usize) -> bool {
        match self.xi[x] {
            Some(z) => z == y,
            None => {
                if self.e2.q().apply(y) != self.e1.q().apply(x) {
                    return false;
                }
                if self.bijective && self.used[y] {
                    return false;
                }
                self.xi[x] = Some(y);
                self.used[y] = true;
                true
            }
        }
    }

    /// Applies `ξ(ω(a)) = ω(ξ(a))` to a fixpoint.
    fn close(&mut self) -> bool {
        let (x1, x2) = (self.e1.middle().clone(), self.e2.middle().clone());
        let sig = x1.variety().signature();
        loop {
            let mut changed = false;
            let mut ok = true;
            let mut image = Vec::new();
            for op in 0..sig.len() {
                for_each_tuple(x1.size(), sig.arity(op), |args| {
                    if !ok {
                        return;
                    }
                    image.clear();
                    for &a in args {
                        match self.xi[a] {
                            Some(b) => image.push(b),
                            None => return,
                        }
                    }
                    let x = x1.apply(op, args);
                    let y = x2.apply(op, &image);
                    if self.xi[x].is_none() {
                        changed = true;
                    }
                    ok = self.set(x, y);
                });
                if !ok {
                    return false;
                }
            }
            if !changed {
                return true;
            }
        }
    }

    fn search(&mut self, fibers2: &[Vec<usize>]) -> Option<Vec<usize>> {
        let Some(x) = self.xi.iter().position(Option::is_none) else {
            return Some(self.xi.iter().map(|v| v.unwrap_or(0)).collect());
        };
        let v = self.e1.q().apply(x);
        for &y in &fibers2[v] {
            if self.bijective && self.used[y] {
                continue;
            }
            let mut next = self.clone();
            if next.set(x, y) && next.close() {
                if let Some(m) = next.search(fibers2) {
                    return Some(m);
                }
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::builtins::cyclic;
    use crate::algebra::{product, VarietyPresentation};
    use crate::ext1::validate_ses;

    #[test]
    fn finds_relabeling_but_not_across_types() {
        let v = VarietyPresentation::groups();
        let (z2, z4) = (cyclic(&v, 2).unwrap(), cyclic(&v, 4).unwrap());
        let k = Homomorphism::new(z2.clone(), z4.clone(), vec![0, 2]).unwrap();
        let q = Homomorphism::new(z4, z2.clone(), vec![0, 1, 0, 1]).unwrap();
        let cyc = validate_ses(&k, &q).unwrap();
        let p = product(&z2, &z2).unwrap();
        let k = Homomorphism::new(z2.clone(), p.algebra.clone(), vec![0, 1]).unwrap();
        let split = validate_ses(&k, &p.projections[1]).unwrap();
        let r = cyc.relabel(&[0, 2, 3, 1]).unwrap();
        assert!(find_morphism(&cyc, &r, MorphismKind::Bijective).unwrap().is_some());
        assert!(find_morphism(&cyc, &split, MorphismKind::Any).unwrap().is_none());
        assert!(find_morphism(&split, &cyc, MorphismKind::Any).unwrap().is_none());
    }
}
