//! Small named algebras used as fixtures and CLI shorthands.
//!
//! Every builtin is described by a multiplication table with identity `0`;
//! the remaining operations of the target variety (`inv`/`neg`, `ldiv`,
//! `rdiv`, scalar multiples `s<r>`) are derived from it and the result is
//! checked against the variety's equations, so asking for `S3` in abelian
//! groups fails with the violated commutativity instance.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use super::construct::product_many;
use super::finite::{Alg, FiniteAlgebra};
use super::variety::{Variety, VarietyKind};
use crate::{Error, Result};

/// A non-associative loop of order 5 (multiplication rows).
const L5: [[usize; 5]; 5] = [
    [0, 1, 2, 3, 4],
    [1, 0, 3, 4, 2],
    [2, 3, 4, 0, 1],
    [3, 4, 1, 2, 0],
    [4, 2, 0, 1, 3],
];

/// A non-associative loop of order 6.
const L6: [[usize; 6]; 6] = [
    [0, 1, 2, 3, 4, 5],
    [1, 0, 3, 2, 5, 4],
    [2, 3, 4, 5, 0, 1],
    [3, 2, 5, 4, 1, 0],
    [4, 5, 0, 1, 3, 2],
    [5, 4, 1, 0, 2, 3],
];

/// Names accepted by [`named`] for algebras of order at most 8, in a fixed
/// order. Not every name is valid in every variety.
pub const SMALL_NAMES: &[&str] = &[
    "0", "Z2", "Z3", "Z4", "Z5", "Z6", "Z7", "Z8", "Klein", "Z2xZ4", "Z2xZ2xZ2", "S3", "D4",
    "Q8", "L5", "L6", "semilattice2", "trunc3",
];

/// Builds an algebra of `variety` from a multiplication table with identity
/// `0` (`mul[a * n + b]`), deriving the other operations.
pub fn from_mul_table(variety: &Variety, n: usize, mul: &[usize]) -> Result<Alg> {
    if mul.len() != n * n {
        return Err(Error::InvalidAlgebra("multiplication table has the wrong size".into()));
    }
    let sig = variety.signature();
    let latin = is_latin(n, mul);
    let mut tables = Vec::with_capacity(sig.len());
    for op in 0..sig.len() {
        let name = sig.name(op);
        let table = match (name, sig.arity(op)) {
            (_, 0) => vec![0],
            ("mul" | "add", 2) => mul.to_vec(),
            ("inv" | "neg", 1) if latin => {
                (0..n).map(|x| solve_right(n, mul, x, 0)).collect()
            }
            ("ldiv", 2) if latin => {
                let mut t = Vec::with_capacity(n * n);
                for x in 0..n {
                    for y in 0..n {
                        t.push(solve_right(n, mul, x, y));
                    }
                }
                t
            }
            ("rdiv", 2) if latin => {
                let mut t = Vec::with_capacity(n * n);
                for x in 0..n {
                    for y in 0..n {
                        t.push(solve_left(n, mul, y, x));
                    }
                }
                t
            }
            (s, 1) if scalar(s).is_some() => {
                let r = scalar(s).unwrap_or(0);
                (0..n)
                    .map(|x| (1..r).fold(x, |acc, _| mul[acc * n + x]))
                    .collect()
            }
            _ => {
                return Err(Error::InvalidAlgebra(format!(
                    "cannot derive operation `{name}` from a multiplication table{}",
                    if latin { "" } else { " that is not a latin square" }
                )))
            }
        };
        tables.push(table);
    }
    Ok(Arc::new(FiniteAlgebra::new(variety.clone(), n, tables)?))
}

fn scalar(name: &str) -> Option<usize> {
    name.strip_prefix('s')?.parse().ok()
}

fn is_latin(n: usize, mul: &[usize]) -> bool {
    (0..n).all(|a| {
        let mut row = vec![false; n];
        let mut col = vec![false; n];
        (0..n).all(|b| {
            !core::mem::replace(&mut row[mul[a * n + b]], true)
                && !core::mem::replace(&mut col[mul[b * n + a]], true)
        })
    })
}

/// The `z` with `a·z = b`.
fn solve_right(n: usize, mul: &[usize], a: usize, b: usize) -> usize {
    (0..n).find(|&z| mul[a * n + z] == b).unwrap_or(0)
}

/// The `z` with `z·a = b`.
fn solve_left(n: usize, mul: &[usize], a: usize, b: usize) -> usize {
    (0..n).find(|&z| mul[z * n + a] == b).unwrap_or(0)
}

/// `ℤ/n` in any of the shipped varieties (addition mod `n`).
pub fn cyclic(variety: &Variety, n: usize) -> Result<Alg> {
    if n == 0 {
        return Err(Error::InvalidData("cyclic group of order 0".into()));
    }
    if let VarietyKind::Module { modulus } = variety.kind() {
        if modulus % n != 0 {
            return Err(Error::InvalidData(format!(
                "Z{n} is not a Z{modulus}-module"
            )));
        }
    }
    if n > crate::Limits::DEFAULT_MAX_CARRIER {
        return Err(Error::CarrierTooLarge {
            size: n,
            limit: crate::Limits::DEFAULT_MAX_CARRIER,
        });
    }
    let mul: Vec<usize> = (0..n * n).map(|i| (i / n + i % n) % n).collect();
    from_mul_table(variety, n, &mul)
}

/// Looks up a named algebra: `0` (also `trivial`, `Z1`), `Z<n>`, `Klein`,
/// `S3`, `D4`, `Q8`, the loops `L5` and `L6`, the monoids `semilattice2`
/// (`{0, e}` with `e + e = e`) and `trunc3` (addition on `{0,1,2}` capped at
/// 2), and products written `AxB` (first factor fastest).
pub fn named(variety: &Variety, name: &str) -> Result<Alg> {
    if name.contains('x') {
        let factors = name
            .split('x')
            .map(|f| named(variety, f))
            .collect::<Result<Vec<_>>>()?;
        return Ok(product_many(&factors)?.algebra);
    }
    let unknown = || Error::UnknownName(format!("algebra `{name}`"));
    match name {
        "0" | "trivial" | "Z1" => Ok(Arc::new(FiniteAlgebra::trivial(variety.clone()))),
        "Klein" | "V4" => named(variety, "Z2xZ2"),
        "S3" => from_permutations(variety, &[&[1, 0, 2], &[1, 2, 0]]),
        "D4" => from_permutations(variety, &[&[1, 2, 3, 0], &[0, 3, 2, 1]]),
        "Q8" => {
            let mul: Vec<usize> = (0..64).map(|i| quaternion_mul(i / 8, i % 8)).collect();
            from_mul_table(variety, 8, &mul)
        }
        "L5" => from_mul_table(variety, 5, &L5.concat()),
        "L6" => from_mul_table(variety, 6, &L6.concat()),
        "semilattice2" | "trunc3" => {
            if variety.kind() != VarietyKind::Monoid {
                return Err(Error::UnknownName(format!(
                    "`{name}` is only defined for monoids"
                )));
            }
            let (n, mul): (usize, &[usize]) = if name == "trunc3" {
                (3, &[0, 1, 2, 1, 2, 2, 2, 2, 2])
            } else {
                (2, &[0, 1, 1, 1])
            };
            from_mul_table(variety, n, mul)
        }
        _ => {
            let n = name
                .strip_prefix('Z')
                .and_then(|d| d.parse::<usize>().ok())
                .filter(|&n| n > 0)
                .ok_or_else(unknown)?;
            cyclic(variety, n)
        }
    }
}

/// Every entry of [`SMALL_NAMES`] that is valid in `variety`.
pub fn small_catalogue(variety: &Variety) -> Vec<(String, Alg)> {
    SMALL_NAMES
        .iter()
        .filter_map(|&name| named(variety, name).ok().map(|a| (name.into(), a)))
        .collect()
}

/// The permutation group generated by `gens`, elements in lexicographic
/// order (so the identity is `0`), product `(p·q)(i) = p(q(i))`.
fn from_permutations(variety: &Variety, gens: &[&[usize]]) -> Result<Alg> {
    let degree = gens[0].len();
    let mut elems: Vec<Vec<usize>> = vec![(0..degree).collect()];
    let mut i = 0;
    while i < elems.len() {
        for g in gens {
            let p: Vec<usize> = (0..degree).map(|j| elems[i][g[j]]).collect();
            if !elems.contains(&p) {
                elems.push(p);
            }
        }
        i += 1;
    }
    elems.sort();
    let n = elems.len();
    let mut mul = Vec::with_capacity(n * n);
    for p in &elems {
        for q in &elems {
            let pq: Vec<usize> = (0..degree).map(|j| p[q[j]]).collect();
            mul.push(elems.iter().position(|e| *e == pq).unwrap_or(0));
        }
    }
    from_mul_table(variety, n, &mul)
}

/// Quaternion units `1,-1,i,-i,j,-j,k,-k` as `0..8`.
fn quaternion_mul(a: usize, b: usize) -> usize {
    // Basis products of 1, i, j, k as (sign, basis).
    const BASIS: [[(bool, usize); 4]; 4] = [
        [(false, 0), (false, 1), (false, 2), (false, 3)],
        [(false, 1), (true, 0), (false, 3), (true, 2)],
        [(false, 2), (true, 3), (true, 0), (false, 1)],
        [(false, 3), (false, 2), (true, 1), (true, 0)],
    ];
    let (neg, basis) = BASIS[a / 2][b / 2];
    let neg = neg ^ (a % 2 == 1) ^ (b % 2 == 1);
    basis * 2 + usize::from(neg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::VarietyPresentation;

    #[test]
    fn groups_of_order_at_most_8() {
        let v = VarietyPresentation::groups();
        let sizes: Vec<(String, usize)> = small_catalogue(&v)
            .into_iter()
            .map(|(n, a)| (n, a.size()))
            .collect();
        assert!(sizes.contains(&("S3".into(), 6)));
        assert!(sizes.contains(&("D4".into(), 8)));
        assert!(sizes.contains(&("Q8".into(), 8)));
        assert!(!sizes.iter().any(|(n, _)| n == "L5" || n == "trunc3"));
    }

    #[test]
    fn abelian_rejects_s3() {
        let v = VarietyPresentation::abelian_groups();
        assert!(matches!(named(&v, "S3"), Err(Error::EquationViolated { .. })));
        assert_eq!(named(&v, "Klein").unwrap().size(), 4);
    }

    #[test]
    fn loops_are_not_groups() {
        let l = VarietyPresentation::loops();
        assert!(named(&l, "L5").is_ok());
        assert!(named(&l, "L6").is_ok());
        let g = VarietyPresentation::groups();
        assert!(named(&g, "L5").is_err());
    }

    #[test]
    fn module_scalars() {
        let v = VarietyPresentation::modules(4);
        let z4 = cyclic(&v, 4).unwrap();
        let s3 = v.op("s3").unwrap();
        assert_eq!(z4.table(s3), &[0, 3, 2, 1]);
        assert!(cyclic(&v, 3).is_err());
        assert!(named(&v, "Z2xZ4").is_ok());
    }

    #[test]
    fn monoids() {
        let v = VarietyPresentation::monoids();
        assert_eq!(named(&v, "semilattice2").unwrap().table(1), &[0, 1, 1, 1]);
        assert!(named(&v, "S3").is_ok());
        assert!(named(&VarietyPresentation::groups(), "semilattice2").is_err());
    }
}
