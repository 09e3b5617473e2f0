//! Abelian extensions counted as symmetric 2-cocycles modulo coboundaries.
//!
//! For abelian groups `Q`, `K` (addition tables with identity `0`), the
//! extensions of `Q` by `K` inside abelian groups correspond to normalized
//! symmetric `f: Q × Q → K` with
//! `f(b, c) − f(a + b, c) + f(a, b + c) − f(a, b) = 0`, modulo
//! `δg(a, b) = g(a) + g(b) − g(a + b)`.

use std::collections::BTreeSet;

use crate::tables::inverses;

/// `|Z²_sym / B²|` by brute force over all normalized functions.
pub fn abelian_ext_order(nq: usize, q_add: &[usize], nk: usize, k_add: &[usize]) -> usize {
    let k_neg = inverses(nk, k_add);
    let add = |a: usize, b: usize| k_add[a * nk + b];
    let sub = |a: usize, b: usize| k_add[a * nk + k_neg[b]];
    let qa = |a: usize, b: usize| q_add[a * nq + b];
    // Free cells: (a, b) with a, b ≠ 0.
    let cells: Vec<(usize, usize)> = (1..nq).flat_map(|a| (1..nq).map(move |b| (a, b))).collect();
    let total = nk.checked_pow(cells.len() as u32).expect("cochain count fits");
    let mut cocycles = 0usize;
    let mut f = vec![0usize; nq * nq];
    for code in 0..total {
        let mut c = code;
        for &(a, b) in &cells {
            f[a * nq + b] = c % nk;
            c /= nk;
        }
        let sym = (0..nq).all(|a| (0..nq).all(|b| f[a * nq + b] == f[b * nq + a]));
        let closed = sym
            && (0..nq).all(|a| {
                (0..nq).all(|b| {
                    (0..nq).all(|c| {
                        let lhs = add(f[b * nq + c], f[a * nq + qa(b, c)]);
                        let rhs = add(f[qa(a, b) * nq + c], f[a * nq + b]);
                        lhs == rhs
                    })
                })
            });
        if closed {
            cocycles += 1;
        }
    }
    let mut boundaries = BTreeSet::new();
    let gtotal = nk.pow(nq.saturating_sub(1) as u32);
    let mut g = vec![0usize; nq];
    for code in 0..gtotal {
        let mut c = code;
        for v in g.iter_mut().skip(1) {
            *v = c % nk;
            c /= nk;
        }
        let d: Vec<usize> = (0..nq * nq)
            .map(|i| sub(add(g[i / nq], g[i % nq]), g[qa(i / nq, i % nq)]))
            .collect();
        boundaries.insert(d);
    }
    cocycles / boundaries.len()
}

/// Addition table of `ℤ/n`.
pub fn cyclic_table(n: usize) -> Vec<usize> {
    (0..n * n).map(|i| (i / n + i % n) % n).collect()
}
