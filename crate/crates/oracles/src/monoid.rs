//! Monoid short exact sequences enumerated exhaustively, and a brute-force
//! search for Schreier data `(s, p)`.

use std::sync::Arc;

use extcalc_core::algebra::{
    congruence_closure, kernel, quotient, FiniteAlgebra, Homomorphism, VarietyPresentation,
};
use extcalc_core::ext1::{validate_ses, ShortExactSeq};
use extcalc_core::Result;

use crate::tables::associative_tables_up_to_iso;

/// Every short exact sequence of monoids whose middle object has `n`
/// elements, up to relabeling the middle object: one per isomorphism class
/// of tables and per submonoid `K` whose generated congruence has `K` as its
/// class of `0`.
pub fn monoid_sequences(n: usize) -> Result<Vec<ShortExactSeq>> {
    let v = VarietyPresentation::monoids();
    let mut out = Vec::new();
    for t in associative_tables_up_to_iso(n, false) {
        let x = Arc::new(FiniteAlgebra::new(v.clone(), n, vec![vec![0], t])?);
        out.extend(sequences_of(&x)?);
    }
    Ok(out)
}

/// The sequences with middle object `x`, by subsets of `x` containing `0`.
pub fn sequences_of(x: &extcalc_core::algebra::Alg) -> Result<Vec<ShortExactSeq>> {
    let n = x.size();
    let mut out = Vec::new();
    for mask in 0..1usize << (n - 1) {
        let members: Vec<usize> = (0..n).filter(|&y| y == 0 || mask >> (y - 1) & 1 == 1).collect();
        let pairs: Vec<(usize, usize)> = members.iter().map(|&u| (u, 0)).collect();
        let c = congruence_closure(x, &pairs)?;
        if c.zero_block() != members.as_slice() {
            continue;
        }
        let (_, q) = quotient(x, &c)?;
        let k = kernel(&q)?;
        if let Ok(e) = validate_ses(&k, &q) {
            out.push(e);
        }
    }
    Ok(out)
}

/// Whether some `s: Q → X` with `s(0) = 0` and `p: X → K` satisfy
/// `qs = 1`, `k(p(x)) + s(q(x)) = x` and `p(k(u) + s(v)) = u`.
pub fn exists_sp_data(e: &ShortExactSeq) -> bool {
    let x = e.middle();
    let add = x.variety().op("add").expect("monoid signature");
    let (nx, nk, nq) = (x.size(), e.kernel_object().size(), e.base().size());
    let fibers: Vec<Vec<usize>> = (0..nq)
        .map(|v| (0..nx).filter(|&y| e.q().apply(y) == v).collect())
        .collect();
    let mut s = vec![0usize; nq];
    let mut digits = vec![0usize; nq];
    loop {
        for v in 1..nq {
            s[v] = fibers[v][digits[v]];
        }
        if sp_for_section(e, add, &s, nx, nk, nq) {
            return true;
        }
        let mut v = nq;
        loop {
            if v <= 1 {
                return false;
            }
            v -= 1;
            digits[v] += 1;
            if digits[v] < fibers[v].len() {
                break;
            }
            digits[v] = 0;
        }
    }
}

/// With `s` fixed, tries every `p` (pointwise choices allowed by the second
/// identity), checking the third.
fn sp_for_section(e: &ShortExactSeq, add: usize, s: &[usize], nx: usize, nk: usize, nq: usize) -> bool {
    let x = e.middle();
    let choices: Vec<Vec<usize>> = (0..nx)
        .map(|y| {
            (0..nk)
                .filter(|&u| x.apply2(add, e.k().apply(u), s[e.q().apply(y)]) == y)
                .collect()
        })
        .collect();
    if choices.iter().any(Vec::is_empty) {
        return false;
    }
    let mut p: Vec<usize> = choices.iter().map(|c| c[0]).collect();
    let mut digits = vec![0usize; nx];
    loop {
        let ok = (0..nk).all(|u| (0..nq).all(|v| p[x.apply2(add, e.k().apply(u), s[v])] == u));
        if ok {
            return true;
        }
        let mut y = nx;
        loop {
            if y == 0 {
                return false;
            }
            y -= 1;
            digits[y] += 1;
            if digits[y] < choices[y].len() {
                p[y] = choices[y][digits[y]];
                break;
            }
            digits[y] = 0;
            p[y] = choices[y][0];
        }
    }
}

/// Every monoid homomorphism `Q' → Q` from a table `q_prime` on
/// `{0..m-1}` into the base of `e`, for pulling back.
pub fn maps_into_base(e: &ShortExactSeq, m: usize, q_prime: &[usize]) -> Result<Vec<Homomorphism>> {
    let q = e.base();
    let add = q.variety().op("add").expect("monoid signature");
    let src = Arc::new(FiniteAlgebra::new(
        q.variety().clone(),
        m,
        vec![vec![0], q_prime.to_vec()],
    )?);
    crate::tables::homomorphisms(m, q_prime, q.size(), q.table(add))
        .into_iter()
        .map(|f| Homomorphism::new(src.clone(), q.clone(), f))
        .collect()
}
