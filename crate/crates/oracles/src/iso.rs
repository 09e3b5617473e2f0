//! Endpoint-fixing isomorphisms of short exact sequences by direct
//! backtracking over bijections of the middle objects.

use extcalc_core::algebra::for_each_tuple;
use extcalc_core::ext1::ShortExactSeq;

/// A bijection `ξ: X1 → X2` preserving every operation with `ξ k1 = k2` and
/// `q2 ξ = q1`, if one exists.
pub fn find_ses_iso(e1: &ShortExactSeq, e2: &ShortExactSeq) -> Option<Vec<usize>> {
    let (x1, x2) = (e1.middle(), e2.middle());
    let n = x1.size();
    if n != x2.size() || e1.kernel_object().size() != e2.kernel_object().size() {
        return None;
    }
    let mut xi = vec![usize::MAX; n];
    let mut used = vec![false; n];
    for u in 0..e1.kernel_object().size() {
        let (a, b) = (e1.k().apply(u), e2.k().apply(u));
        if xi[a] != usize::MAX || used[b] {
            return None;
        }
        xi[a] = b;
        used[b] = true;
    }
    let ctx = Ctx { e1, e2, n };
    ctx.extend(0, &mut xi, &mut used).then_some(xi)
}

struct Ctx<'a> {
    e1: &'a ShortExactSeq,
    e2: &'a ShortExactSeq,
    n: usize,
}

impl Ctx<'_> {
    fn extend(&self, i: usize, xi: &mut [usize], used: &mut [bool]) -> bool {
        if i == self.n {
            return self.preserves(xi);
        }
        if xi[i] != usize::MAX {
            return self.extend(i + 1, xi, used);
        }
        for y in 0..self.n {
            if used[y] || self.e2.q().apply(y) != self.e1.q().apply(i) {
                continue;
            }
            xi[i] = y;
            used[y] = true;
            if self.partial_ok(xi) && self.extend(i + 1, xi, used) {
                return true;
            }
            used[y] = false;
        }
        xi[i] = usize::MAX;
        false
    }

    /// Every operation instance whose arguments and result are all assigned.
    fn partial_ok(&self, xi: &[usize]) -> bool {
        self.check(xi, true)
    }

    fn preserves(&self, xi: &[usize]) -> bool {
        self.check(xi, false)
    }

    fn check(&self, xi: &[usize], partial: bool) -> bool {
        let (x1, x2) = (self.e1.middle(), self.e2.middle());
        let mut ok = true;
        let mut img = Vec::new();
        for op in 0..x1.tables().len() {
            for_each_tuple(self.n, x1.arity(op), |args| {
                if !ok {
                    return;
                }
                if args.iter().any(|&a| xi[a] == usize::MAX) {
                    return;
                }
                let r = x1.apply(op, args);
                if xi[r] == usize::MAX {
                    ok = partial;
                    return;
                }
                img.clear();
                img.extend(args.iter().map(|&a| xi[a]));
                ok = x2.apply(op, &img) == xi[r];
            });
        }
        ok
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use extcalc_core::algebra::builtins::cyclic;
    use extcalc_core::algebra::{product, Homomorphism, VarietyPresentation};
    use extcalc_core::ext1::validate_ses;

    #[test]
    fn z4_is_not_split() {
        let g = VarietyPresentation::groups();
        let (z2, z4) = (cyclic(&g, 2).unwrap(), cyclic(&g, 4).unwrap());
        let e = validate_ses(
            &Homomorphism::new(z2.clone(), z4.clone(), vec![0, 2]).unwrap(),
            &Homomorphism::new(z4, z2.clone(), vec![0, 1, 0, 1]).unwrap(),
        )
        .unwrap();
        let p = product(&z2, &z2).unwrap();
        let incl = Homomorphism::new(z2.clone(), p.algebra.clone(), vec![0, 1]).unwrap();
        let s = validate_ses(&incl, &p.projections[1]).unwrap();
        assert!(find_ses_iso(&e, &s).is_none());
        let r = e.relabel(&[0, 3, 2, 1]).unwrap();
        assert!(find_ses_iso(&e, &r).is_some());
    }
}
