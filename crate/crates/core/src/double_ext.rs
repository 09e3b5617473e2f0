//! 3×3 diagrams
//!
//! ```text
//!   K   → X2' → I2'
//!   ↓      ↓     ↓
//!   X2  →  Y  → X1'
//!   ↓      ↓     ↓
//!   I2  → X1  →  Q
//! ```
//!
//! their decomposition into the pullback square over `Q` and the extension
//! `K → Y → X1 ×_Q X1'`, and the reduction of such a diagram along a double
//! syzygy of `Q`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::{
    congruence_closure, fiber_product, kernel, quotient, same_algebra, Alg, Homomorphism,
};
use crate::ext1::{pullback_ses, validate_ses, ShortExactSeq};
use crate::long_exact::{free_map, syzygy, syzygy_with, Syzygy};
use crate::{Error, Result};

/// Nine objects and twelve maps: `rows[r]` is the pair of maps along row `r`
/// and `cols[c]` the pair down column `c` (rows and columns counted from the
/// top left corner `K`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThreeByThree {
    rows: [[Homomorphism; 2]; 3],
    cols: [[Homomorphism; 2]; 3],
}

impl ThreeByThree {
    /// Checks that the maps fit together as a 3×3 grid.
    pub fn new(rows: [[Homomorphism; 2]; 3], cols: [[Homomorphism; 2]; 3]) -> Result<Self> {
        for (r, row) in rows.iter().enumerate() {
            if !same_algebra(row[0].cod(), row[1].dom()) {
                return Err(Error::ShapeMismatch(format!("row {r} is not composable")));
            }
        }
        let d = ThreeByThree { rows, cols };
        for c in 0..3 {
            for r in 0..3 {
                let obj = d.object(r, c);
                let from_col = if r < 2 {
                    d.cols[c][r].dom()
                } else {
                    d.cols[c][1].cod()
                };
                if !same_algebra(obj, from_col) {
                    return Err(Error::ShapeMismatch(format!(
                        "column {c} does not meet row {r}"
                    )));
                }
            }
        }
        Ok(d)
    }

    /// Object in row `r`, column `c`.
    pub fn object(&self, r: usize, c: usize) -> &Alg {
        match c {
            0 => self.rows[r][0].dom(),
            1 => self.rows[r][0].cod(),
            _ => self.rows[r][1].cod(),
        }
    }

    pub fn rows(&self) -> &[[Homomorphism; 2]; 3] {
        &self.rows
    }

    pub fn cols(&self) -> &[[Homomorphism; 2]; 3] {
        &self.cols
    }

    pub fn k(&self) -> &Alg {
        self.object(0, 0)
    }

    pub fn y(&self) -> &Alg {
        self.object(1, 1)
    }

    pub fn q(&self) -> &Alg {
        self.object(2, 2)
    }

    pub fn total_size(&self) -> usize {
        (0..9).map(|i| self.object(i / 3, i % 3).size()).sum()
    }

    /// `X1 → Q` and `X1' → Q`.
    pub fn base_square(&self) -> (&Homomorphism, &Homomorphism) {
        (&self.rows[2][1], &self.cols[2][1])
    }

    /// The diagram with `X2`, `X2'` renumbered as subalgebras of `Y` and
    /// `I2`, `I2'` as subalgebras of `X1`, `X1'` (the numbering produced by
    /// [`reconstruct_3x3`]).
    pub fn normalized(&self) -> Result<ThreeByThree> {
        // (object, injective map into its host) for the four inner kernels.
        let embeddings = [
            ((1, 0), &self.rows[1][0]),
            ((0, 1), &self.cols[1][0]),
            ((2, 0), &self.rows[2][0]),
            ((0, 2), &self.cols[2][0]),
        ];
        let mut relabel: [[Option<(Alg, Vec<usize>)>; 3]; 3] = Default::default();
        for ((r, c), incl) in embeddings {
            if !incl.is_injective() {
                return Err(Error::ShapeMismatch(format!(
                    "map out of object ({r}, {c}) is not injective"
                )));
            }
            let (sub, sub_incl) = crate::algebra::subalgebra(incl.cod(), &incl.image())?;
            let inv = sub_incl.preimage_table();
            let perm = incl.map().iter().map(|&y| inv[y].expect("in the image")).collect();
            relabel[r][c] = Some((sub, perm));
        }
        let obj = |r: usize, c: usize| -> (Alg, Option<&Vec<usize>>) {
            match &relabel[r][c] {
                Some((a, p)) => (a.clone(), Some(p)),
                None => (self.object(r, c).clone(), None),
            }
        };
        let moved = |f: &Homomorphism, from: (usize, usize), to: (usize, usize)| {
            let (a, pa) = obj(from.0, from.1);
            let (b, pb) = obj(to.0, to.1);
            let mut map = vec![0; a.size()];
            for (x, &y) in f.map().iter().enumerate() {
                let nx = pa.map_or(x, |p| p[x]);
                map[nx] = pb.map_or(y, |p| p[y]);
            }
            Homomorphism::unchecked(a, b, map)
        };
        let mut rows: Vec<[Homomorphism; 2]> = Vec::new();
        let mut cols: Vec<[Homomorphism; 2]> = Vec::new();
        for i in 0..3 {
            rows.push([
                moved(&self.rows[i][0], (i, 0), (i, 1))?,
                moved(&self.rows[i][1], (i, 1), (i, 2))?,
            ]);
            cols.push([
                moved(&self.cols[i][0], (0, i), (1, i))?,
                moved(&self.cols[i][1], (1, i), (2, i))?,
            ]);
        }
        let arr = |v: Vec<[Homomorphism; 2]>| -> [[Homomorphism; 2]; 3] {
            v.try_into().expect("three entries")
        };
        ThreeByThree::new(arr(rows), arr(cols))
    }

    /// The same diagram with every object relabeled: `perms[3r + c]` sends
    /// old elements of object `(r, c)` to new ones and must fix `0`.
    pub fn relabel(&self, perms: &[Vec<usize>]) -> Result<ThreeByThree> {
        if perms.len() != 9 {
            return Err(Error::ShapeMismatch("nine permutations expected".into()));
        }
        let mut objects = Vec::with_capacity(9);
        for (i, p) in perms.iter().enumerate() {
            objects.push(alloc::sync::Arc::new(self.object(i / 3, i % 3).relabel(p)?));
        }
        let moved = |f: &Homomorphism, from: usize, to: usize| {
            let (pa, pb) = (&perms[from], &perms[to]);
            let mut map = vec![0; f.dom().size()];
            for (x, &y) in f.map().iter().enumerate() {
                map[pa[x]] = pb[y];
            }
            Homomorphism::unchecked(objects[from].clone(), objects[to].clone(), map)
        };
        let mut rows: Vec<[Homomorphism; 2]> = Vec::new();
        let mut cols: Vec<[Homomorphism; 2]> = Vec::new();
        for i in 0..3 {
            rows.push([
                moved(&self.rows[i][0], 3 * i, 3 * i + 1)?,
                moved(&self.rows[i][1], 3 * i + 1, 3 * i + 2)?,
            ]);
            cols.push([
                moved(&self.cols[i][0], i, 3 + i)?,
                moved(&self.cols[i][1], 3 + i, 6 + i)?,
            ]);
        }
        ThreeByThree::new(
            rows.try_into().expect("three rows"),
            cols.try_into().expect("three columns"),
        )
    }

    /// The diagram obtained from two surjections out of `Y`: `X1 = Y/N`,
    /// `X1' = Y/N'`, `Q = Y/(N ∨ N')`, `K = N ∧ N'`, and the remaining
    /// objects as kernels.
    pub fn from_quotients(to_x1: &Homomorphism, to_x1p: &Homomorphism) -> Result<ThreeByThree> {
        let y = to_x1.dom();
        if !same_algebra(y, to_x1p.dom()) {
            return Err(Error::ShapeMismatch("quotient maps leave different algebras".into()));
        }
        let mut pairs = Vec::new();
        for f in [to_x1, to_x1p] {
            let mut first = vec![usize::MAX; f.cod().size()];
            for x in 0..y.size() {
                let rep = first[f.apply(x)].min(x);
                first[f.apply(x)] = rep;
                pairs.push((x, rep));
            }
        }
        let join = congruence_closure(y, &pairs)?;
        let (q, to_q) = quotient(y, &join)?;
        // X1 → Q and X1' → Q through the quotient maps.
        let down = |f: &Homomorphism| -> Result<Homomorphism> {
            let mut map = vec![usize::MAX; f.cod().size()];
            for x in 0..y.size() {
                map[f.apply(x)] = to_q.apply(x);
            }
            if map.contains(&usize::MAX) {
                return Err(Error::InvalidData("quotient map is not surjective".into()));
            }
            Homomorphism::unchecked(f.cod().clone(), q.clone(), map)
        };
        let x1_q = down(to_x1)?;
        let x1p_q = down(to_x1p)?;
        let (p, p1, p2) = fiber_product(&x1_q, &x1p_q)?;
        let pos = pair_index(&p1, &p2);
        let comparison: Vec<usize> = (0..y.size())
            .map(|x| pos[to_x1.apply(x) + to_x1.cod().size() * to_x1p.apply(x)])
            .collect();
        let comparison = Homomorphism::unchecked(y.clone(), p, comparison)?;
        let k = kernel(&comparison)?;
        reconstruct_3x3(&Decomposition {
            x1: x1_q,
            x1p: x1p_q,
            ses: validate_ses(&k, &comparison)?,
        })
    }
}

/// Position in `A ×_C B` of the pair `(a, b)`, indexed by `a + |A|·b`.
fn pair_index(p1: &Homomorphism, p2: &Homomorphism) -> Vec<usize> {
    let na = p1.cod().size();
    let mut pos = vec![usize::MAX; na * p2.cod().size()];
    for x in 0..p1.dom().size() {
        pos[p1.apply(x) + na * p2.apply(x)] = x;
    }
    pos
}

/// What is wrong with one part of a diagram.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CellFailure {
    Row { index: usize, error: Error },
    Column { index: usize, error: Error },
    /// The square with top left corner at `(row, col)` does not commute.
    Square { row: usize, col: usize },
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DiagramReport {
    pub failures: Vec<CellFailure>,
}

impl DiagramReport {
    pub fn is_valid(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Exactness of every row and column and commutativity of the four squares.
pub fn validate_3x3(d: &ThreeByThree) -> DiagramReport {
    let mut failures = Vec::new();
    for i in 0..3 {
        if let Err(error) = validate_ses(&d.rows[i][0], &d.rows[i][1]) {
            failures.push(CellFailure::Row { index: i, error });
        }
        if let Err(error) = validate_ses(&d.cols[i][0], &d.cols[i][1]) {
            failures.push(CellFailure::Column { index: i, error });
        }
    }
    for r in 0..2 {
        for c in 0..2 {
            let right_down = d.rows[r][c].then(&d.cols[c + 1][r]);
            let down_right = d.cols[c][r].then(&d.rows[r + 1][c]);
            match (right_down, down_right) {
                (Ok(a), Ok(b)) if a.map() == b.map() => {}
                _ => failures.push(CellFailure::Square { row: r, col: c }),
            }
        }
    }
    DiagramReport { failures }
}

/// The comparison `Y → X1 ×_Q X1'` with the pullback and its projections.
pub fn comparison_map(d: &ThreeByThree) -> Result<(Homomorphism, Homomorphism, Homomorphism)> {
    let (x1_q, x1p_q) = d.base_square();
    let (p, p1, p2) = fiber_product(x1_q, x1p_q)?;
    let pos = pair_index(&p1, &p2);
    let (y_x1, y_x1p) = (&d.cols[1][1], &d.rows[1][1]);
    let n1 = x1_q.dom().size();
    let map = (0..d.y().size())
        .map(|y| {
            let i = pos[y_x1.apply(y) + n1 * y_x1p.apply(y)];
            (i != usize::MAX)
                .then_some(i)
                .ok_or_else(|| Error::ShapeMismatch("bottom right square does not commute".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((Homomorphism::unchecked(d.y().clone(), p, map)?, p1, p2))
}

/// Whether `Y → X1 ×_Q X1'` is surjective.
pub fn is_regular_pushout(d: &ThreeByThree) -> bool {
    comparison_map(d).is_ok_and(|(c, _, _)| c.is_surjective())
}

/// A diagram split into the maps `X1 → Q`, `X1' → Q` and the extension
/// `K → Y → X1 ×_Q X1'`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub x1: Homomorphism,
    pub x1p: Homomorphism,
    pub ses: ShortExactSeq,
}

pub fn decompose_3x3(d: &ThreeByThree) -> Result<Decomposition> {
    let (c, _, _) = comparison_map(d)?;
    if !c.is_surjective() {
        return Err(Error::ComparisonNotSurjective);
    }
    let k = d.rows[0][0].then(&d.cols[1][0])?;
    Ok(Decomposition {
        x1: d.rows[2][1].clone(),
        x1p: d.cols[2][1].clone(),
        ses: validate_ses(&k, &c)?,
    })
}

/// Rebuilds the diagram: `X2' = ker(Y → X1)`, `X2 = ker(Y → X1')`,
/// `I2 = ker(X1 → Q)`, `I2' = ker(X1' → Q)`, with the induced maps.
pub fn reconstruct_3x3(dec: &Decomposition) -> Result<ThreeByThree> {
    let (x1_q, x1p_q) = (&dec.x1, &dec.x1p);
    let (p, p1, p2) = fiber_product(x1_q, x1p_q)?;
    if !same_algebra(&p, dec.ses.base()) {
        return Err(Error::ShapeMismatch(
            "extension does not lie over the pullback".into(),
        ));
    }
    let c = dec.ses.q();
    let y_x1 = c.then(&p1)?;
    let y_x1p = c.then(&p2)?;
    let x2p = kernel(&y_x1)?;
    let x2 = kernel(&y_x1p)?;
    let i2 = kernel(x1_q)?;
    let i2p = kernel(x1p_q)?;
    let k = dec.ses.k();
    let through = |f: &Homomorphism, incl: &Homomorphism| -> Result<Homomorphism> {
        let inv = incl.preimage_table();
        let map = f
            .map()
            .iter()
            .map(|&y| inv[y].ok_or_else(|| Error::InvalidData("map leaves the kernel".into())))
            .collect::<Result<Vec<_>>>()?;
        Homomorphism::unchecked(f.dom().clone(), incl.dom().clone(), map)
    };
    let k_x2p = through(k, &x2p)?;
    let k_x2 = through(k, &x2)?;
    let x2p_i2p = through(&x2p.then(&y_x1p)?, &i2p)?;
    let x2_i2 = through(&x2.then(&y_x1)?, &i2)?;
    ThreeByThree::new(
        [
            [k_x2p, x2p_i2p],
            [x2.clone(), y_x1p],
            [i2.clone(), x1_q.clone()],
        ],
        [
            [k_x2, x2_i2],
            [x2p.clone(), y_x1],
            [i2p.clone(), x1p_q.clone()],
        ],
    )
}

/// Two free covers of `Q` and their pullback `P ×_Q P'`.
#[derive(Clone, Debug)]
pub struct DoubleSyzygy {
    pub first: Syzygy,
    pub second: Syzygy,
    pub pullback: Alg,
    pub pr1: Homomorphism,
    pub pr2: Homomorphism,
}

/// Covers on the greedy generating sets with ties broken in ascending and
/// in descending carrier order.
pub fn double_syzygy(q: &Alg) -> Result<DoubleSyzygy> {
    let first = syzygy(q)?;
    let reversed: Vec<usize> = (0..q.size()).rev().collect();
    let second = syzygy_with(q, &reversed)?;
    let (pullback, pr1, pr2) = fiber_product(&first.cover, &second.cover)?;
    Ok(DoubleSyzygy {
        first,
        second,
        pullback,
        pr1,
        pr2,
    })
}

/// The extension `K → Y → X1 ×_Q X1'` of `d` pulled back along the map
/// `P ×_Q P' → X1 ×_Q X1'` induced by lifts `P → X1`, `P' → X1'` of the
/// covers.
pub fn reduce_2ext(d: &ThreeByThree, ds: &DoubleSyzygy) -> Result<ShortExactSeq> {
    if !same_algebra(ds.first.base(), d.q()) {
        return Err(Error::EndpointMismatch);
    }
    let dec = decompose_3x3(d)?;
    let lift = |s: &Syzygy, f: &Homomorphism| -> Result<Homomorphism> {
        let inv = f.preimage_table();
        let images = s
            .generators
            .iter()
            .map(|&g| inv[g].ok_or_else(|| Error::NoLift(format!("{g} is not hit"))))
            .collect::<Result<Vec<_>>>()?;
        free_map(s.free(), s.rank(), f.dom(), &images)
    };
    let a = lift(&ds.first, &dec.x1)?;
    let ap = lift(&ds.second, &dec.x1p)?;
    let (_, p1, p2) = fiber_product(&dec.x1, &dec.x1p)?;
    let pos = pair_index(&p1, &p2);
    let n1 = dec.x1.dom().size();
    let map = (0..ds.pullback.size())
        .map(|z| pos[a.apply(ds.pr1.apply(z)) + n1 * ap.apply(ds.pr2.apply(z))])
        .collect();
    let eta = Homomorphism::unchecked(ds.pullback.clone(), dec.ses.base().clone(), map)?;
    pullback_ses(&dec.ses, &eta)
}

/// The zero diagram of a variety.
pub fn zero_diagram(zero: &Alg) -> ThreeByThree {
    let id = Homomorphism::identity(zero);
    let pair = || [id.clone(), id.clone()];
    ThreeByThree {
        rows: [pair(), pair(), pair()],
        cols: [pair(), pair(), pair()],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::builtins::{cyclic, named};
    use crate::algebra::{product, Variety, VarietyPresentation};
    use crate::long_exact::{yoneda_class_of, ExactSequence};

    fn m4() -> Variety {
        VarietyPresentation::modules(4)
    }

    #[test]
    fn zero_diagram_is_valid() {
        let d = zero_diagram(&named(&m4(), "0").unwrap());
        assert!(validate_3x3(&d).is_valid());
        assert!(is_regular_pushout(&d));
        let dec = decompose_3x3(&d).unwrap();
        assert_eq!(reconstruct_3x3(&dec).unwrap(), d.normalized().unwrap());
    }

    #[test]
    fn product_of_two_sequences() {
        // Y = Z2 × Z2 with the two projections: K = 0, Q = 0.
        let v = VarietyPresentation::groups();
        let z2 = cyclic(&v, 2).unwrap();
        let p = product(&z2, &z2).unwrap();
        let d = ThreeByThree::from_quotients(&p.projections[0], &p.projections[1]).unwrap();
        assert!(validate_3x3(&d).is_valid());
        assert_eq!((d.k().size(), d.q().size()), (1, 1));
        let dec = decompose_3x3(&d).unwrap();
        assert_eq!(dec.ses.middle().size(), 4);
        assert_eq!(reconstruct_3x3(&dec).unwrap(), d.normalized().unwrap());
    }

    #[test]
    fn one_bad_row_is_reported() {
        let v = m4();
        let z2 = cyclic(&v, 2).unwrap();
        let zero = named(&v, "0").unwrap();
        let to_zero = Homomorphism::zero(&z2, &zero).unwrap();
        let d = ThreeByThree::from_quotients(&to_zero, &Homomorphism::identity(&z2)).unwrap();
        assert!(validate_3x3(&d).is_valid());
        let mut rows = d.rows().clone();
        let f = &rows[0][1];
        rows[0][1] = Homomorphism::zero(f.dom(), f.cod()).unwrap();
        let bad = ThreeByThree::new(rows, d.cols().clone()).unwrap();
        let report = validate_3x3(&bad);
        assert!(report
            .failures
            .iter()
            .any(|f| matches!(f, CellFailure::Row { index: 0, .. })));
        assert!(!report
            .failures
            .iter()
            .any(|f| matches!(f, CellFailure::Row { index: 1 | 2, .. } | CellFailure::Column { .. })));
    }

    #[test]
    fn non_exact_diagram_is_not_a_regular_pushout() {
        let v = m4();
        let z2 = cyclic(&v, 2).unwrap();
        let zero = named(&v, "0").unwrap();
        let z = |a: &Alg, b: &Alg| Homomorphism::zero(a, b).unwrap();
        let id = Homomorphism::identity(&z2);
        let d = ThreeByThree::new(
            [
                [z(&zero, &zero), z(&zero, &zero)],
                [z(&zero, &zero), z(&zero, &z2)],
                [z(&zero, &z2), id.clone()],
            ],
            [
                [z(&zero, &zero), z(&zero, &zero)],
                [z(&zero, &zero), z(&zero, &z2)],
                [z(&zero, &z2), id],
            ],
        )
        .unwrap();
        assert!(!is_regular_pushout(&d));
        assert!(!validate_3x3(&d).is_valid());
        assert_eq!(decompose_3x3(&d), Err(Error::ComparisonNotSurjective));
    }

    #[test]
    fn double_syzygy_of_z2() {
        let ds = double_syzygy(&cyclic(&m4(), 2).unwrap()).unwrap();
        assert_eq!(ds.first.free().size(), 4);
        assert_eq!(ds.second.free().size(), 4);
        assert_eq!(ds.pullback.size(), 8);
    }

    #[test]
    fn nonsplit_reduction() {
        // Z4 → Z2 on both axes; Y = Z4 × Z4 over the pullback by (a, b) ↦ (a, a + 2b).
        let v = m4();
        let (z2, z4) = (cyclic(&v, 2).unwrap(), cyclic(&v, 4).unwrap());
        let red = Homomorphism::new(z4.clone(), z2.clone(), vec![0, 1, 0, 1]).unwrap();
        let (p, p1, p2) = fiber_product(&red, &red).unwrap();
        let y = product(&z4, &z4).unwrap();
        let pos = pair_index(&p1, &p2);
        let c = (0..16)
            .map(|x| {
                let (a, b) = (x % 4, x / 4);
                pos[a + 4 * ((a + 2 * b) % 4)]
            })
            .collect();
        let c = Homomorphism::new(y.algebra.clone(), p.clone(), c).unwrap();
        let k = kernel(&c).unwrap();
        let ses = validate_ses(&k, &c).unwrap();
        let d = reconstruct_3x3(&Decomposition {
            x1: red.clone(),
            x1p: red,
            ses,
        })
        .unwrap();
        assert!(validate_3x3(&d).is_valid());
        let ds = double_syzygy(&z2).unwrap();
        let r = reduce_2ext(&d, &ds).unwrap();
        assert_eq!(r.base().size(), 8);
        assert_eq!(**r.kernel_object(), **d.k());
        assert!(!yoneda_class_of(&ExactSequence::from_ses(&r)).unwrap().is_zero());
    }
}
