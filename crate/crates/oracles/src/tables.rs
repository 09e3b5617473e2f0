//! Plain enumeration of associative tables with identity `0`.
//!
//! Cells are filled in row-major order; a partial table is rejected as soon
//! as some triple with all four entries known fails associativity.

/// Every associative binary table on `{0..n-1}` with two-sided identity `0`,
/// in lexicographic order. With `latin` only quasigroup tables (hence
/// groups) are kept.
pub fn associative_tables(n: usize, latin: bool) -> Vec<Vec<usize>> {
    let mut t = vec![usize::MAX; n * n];
    for a in 0..n {
        t[a] = a;
        t[a * n] = a;
    }
    let free: Vec<usize> = (0..n * n).filter(|&c| c / n != 0 && c % n != 0).collect();
    let mut out = Vec::new();
    fill(n, latin, &free, 0, &mut t, &mut out);
    out
}

fn fill(n: usize, latin: bool, free: &[usize], i: usize, t: &mut [usize], out: &mut Vec<Vec<usize>>) {
    if i == free.len() {
        out.push(t.to_vec());
        return;
    }
    let cell = free[i];
    let (a, b) = (cell / n, cell % n);
    for v in 0..n {
        if latin && (0..n).any(|j| (j != b && t[a * n + j] == v) || (j != a && t[j * n + b] == v)) {
            continue;
        }
        t[cell] = v;
        if consistent_at(n, t, a, b) {
            fill(n, latin, free, i + 1, t, out);
        }
    }
    t[cell] = usize::MAX;
}

/// Associativity of every fully known triple that looks up cell `(a, b)`.
fn consistent_at(n: usize, t: &[usize], a: usize, b: usize) -> bool {
    let get = |x: usize, y: usize| {
        let v = t[x * n + y];
        (v != usize::MAX).then_some(v)
    };
    let triple = |x: usize, y: usize, z: usize| {
        let l = get(x, y).and_then(|xy| get(xy, z));
        let r = get(y, z).and_then(|yz| get(x, yz));
        match (l, r) {
            (Some(l), Some(r)) => l == r,
            _ => true,
        }
    };
    for u in 0..n {
        // (x, y) = (a, b), (y, z) = (a, b)
        if !triple(a, b, u) || !triple(u, a, b) {
            return false;
        }
        for w in 0..n {
            // xy = a with z = b, and yz = b with x = a
            if get(u, w) == Some(a) && !triple(u, w, b) {
                return false;
            }
            if get(u, w) == Some(b) && !triple(a, u, w) {
                return false;
            }
        }
    }
    true
}

/// Whether no relabeling in `perms` gives a lexicographically smaller table.
pub fn is_least_relabeling(n: usize, t: &[usize], perms: &[Vec<usize>]) -> bool {
    let mut inv = vec![0; n];
    for p in perms {
        for (y, &py) in p.iter().enumerate() {
            inv[py] = y;
        }
        for c in 0..n * n {
            let r = p[t[inv[c / n] * n + inv[c % n]]];
            match r.cmp(&t[c]) {
                std::cmp::Ordering::Less => return false,
                std::cmp::Ordering::Greater => break,
                std::cmp::Ordering::Equal => {}
            }
        }
    }
    true
}

/// One table per isomorphism class: the least relabeling of each.
pub fn associative_tables_up_to_iso(n: usize, latin: bool) -> Vec<Vec<usize>> {
    let perms = pointed_permutations(n);
    associative_tables(n, latin)
        .into_iter()
        .filter(|t| is_least_relabeling(n, t, &perms))
        .collect()
}

/// Inverse table of a group table with identity `0`.
pub fn inverses(n: usize, mul: &[usize]) -> Vec<usize> {
    (0..n)
        .map(|a| (0..n).find(|&b| mul[a * n + b] == 0).expect("group table"))
        .collect()
}

/// All maps `f` with `f(0) = 0` and `f(ab) = f(a)f(b)` between two tables.
pub fn homomorphisms(n: usize, a: &[usize], m: usize, b: &[usize]) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut f = vec![usize::MAX; n];
    f[0] = 0;
    homs_from(1, n, a, m, b, &mut f, &mut out);
    out
}

fn homs_from(
    i: usize,
    n: usize,
    a: &[usize],
    m: usize,
    b: &[usize],
    f: &mut [usize],
    out: &mut Vec<Vec<usize>>,
) {
    if i == n {
        let ok = (0..n).all(|x| (0..n).all(|y| f[a[x * n + y]] == b[f[x] * m + f[y]]));
        if ok {
            out.push(f.to_vec());
        }
        return;
    }
    for v in 0..m {
        f[i] = v;
        let ok = (0..=i).all(|x| {
            (0..=i).all(|y| {
                let xy = a[x * n + y];
                xy > i || f[xy] == b[f[x] * m + f[y]]
            })
        });
        if ok {
            homs_from(i + 1, n, a, m, b, f, out);
        }
    }
    f[i] = usize::MAX;
}

/// Every permutation of `{0..n-1}` fixing `0`, in lexicographic order.
pub fn pointed_permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    loop {
        out.push(p.clone());
        // next_permutation on p[1..]
        let s = &mut p[1.min(n)..];
        let Some(i) = (1..s.len()).rev().find(|&i| s[i - 1] < s[i]) else {
            return out;
        };
        let j = (i..s.len()).rev().find(|&j| s[j] > s[i - 1]).expect("successor");
        s.swap(i - 1, j);
        s[i..].reverse();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labelled_counts() {
        // Groups on {0..n-1} with identity 0: (n-1)!/|Aut| summed over types.
        let groups: Vec<usize> = (1..=6).map(|n| associative_tables(n, true).len()).collect();
        assert_eq!(groups, vec![1, 1, 1, 4, 6, 80]);
        let monoids: Vec<usize> = (1..=4).map(|n| associative_tables(n, false).len()).collect();
        assert_eq!(monoids, vec![1, 2, 11, 156]);
    }

    #[test]
    fn iso_classes() {
        // Groups: 1, 1, 1, 2, 1, 2; monoids of order 1..4: 1, 2, 7, 35.
        let groups: Vec<usize> = (1..=6).map(|n| associative_tables_up_to_iso(n, true).len()).collect();
        assert_eq!(groups, vec![1, 1, 1, 2, 1, 2]);
        let monoids: Vec<usize> = (1..=4).map(|n| associative_tables_up_to_iso(n, false).len()).collect();
        assert_eq!(monoids, vec![1, 2, 7, 35]);
    }

    #[test]
    fn permutations_fix_zero() {
        let p = pointed_permutations(4);
        assert_eq!(p.len(), 6);
        assert!(p.iter().all(|q| q[0] == 0));
        assert_eq!(pointed_permutations(1), vec![vec![0]]);
    }

    #[test]
    fn homs_z4_to_z2() {
        let z4: Vec<usize> = (0..16).map(|i| (i / 4 + i % 4) % 4).collect();
        let z2 = vec![0, 1, 1, 0];
        assert_eq!(homomorphisms(4, &z4, 2, &z2).len(), 2);
    }
}
