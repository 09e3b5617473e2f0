//! Group extensions counted from scratch: every group table of order
//! `|K|·|Q|`, every exact pair of homomorphisms into and out of it, and the
//! least relabeling of each triple as its class.

use std::collections::BTreeSet;

use crate::tables::{associative_tables, homomorphisms, pointed_permutations};

/// Number of equivalence classes of group extensions `K → X → Q` for group
/// tables `k` (order `nk`) and `q` (order `nq`). Practical up to order 6.
pub fn group_extension_classes(nk: usize, k: &[usize], nq: usize, q: &[usize]) -> usize {
    let n = nk * nq;
    let perms = pointed_permutations(n);
    let mut classes = BTreeSet::new();
    for x in associative_tables(n, true) {
        let ins: Vec<Vec<usize>> = homomorphisms(nk, k, n, &x)
            .into_iter()
            .filter(|f| distinct(f))
            .collect();
        let outs: Vec<Vec<usize>> = homomorphisms(n, &x, nq, q)
            .into_iter()
            .filter(|g| (0..nq).all(|v| g.contains(&v)))
            .collect();
        for f in &ins {
            for g in &outs {
                let kernel: BTreeSet<usize> = (0..n).filter(|&y| g[y] == 0).collect();
                let image: BTreeSet<usize> = f.iter().copied().collect();
                if kernel != image {
                    continue;
                }
                let least = perms
                    .iter()
                    .map(|p| relabeled(n, &x, f, g, p))
                    .min()
                    .expect("at least the identity");
                classes.insert(least);
            }
        }
    }
    classes.len()
}

fn distinct(f: &[usize]) -> bool {
    f.iter().collect::<BTreeSet<_>>().len() == f.len()
}

/// `(table, k, q)` after renaming `y` to `p[y]`.
fn relabeled(n: usize, x: &[usize], f: &[usize], g: &[usize], p: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; n];
    for (y, &py) in p.iter().enumerate() {
        inv[py] = y;
    }
    let mut out = Vec::with_capacity(n * n + f.len() + n);
    for a in 0..n {
        for b in 0..n {
            out.push(p[x[inv[a] * n + inv[b]]]);
        }
    }
    out.extend(f.iter().map(|&y| p[y]));
    out.extend((0..n).map(|y| g[inv[y]]));
    out
}
