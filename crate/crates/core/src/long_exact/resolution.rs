use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::modules::{coordinates, free_map, modulus_of, scalar, syzygy_with, Syzygy};
use super::sequence::ExactSequence;
use crate::algebra::{for_each_tuple, same_algebra, Alg, Homomorphism};
use crate::{Error, Result};

/// Largest cochain group `K^r` enumerated when computing cohomology.
pub const MAX_COCHAINS: usize = 1 << 16;

/// A matrix over `ℤ/m`; column `j` holds the coordinates of the image of
/// the `j`-th basis vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    pub modulus: usize,
    pub rows: usize,
    pub cols: usize,
    /// Row-major entries.
    pub entries: Vec<usize>,
}

impl Matrix {
    pub fn get(&self, r: usize, c: usize) -> usize {
        self.entries[r * self.cols + c]
    }

    /// `self · other`.
    pub fn mul(&self, other: &Matrix) -> Matrix {
        debug_assert_eq!(self.cols, other.rows);
        let mut entries = vec![0; self.rows * other.cols];
        for r in 0..self.rows {
            for c in 0..other.cols {
                entries[r * other.cols + c] = (0..self.cols)
                    .map(|k| self.get(r, k) * other.get(k, c))
                    .sum::<usize>()
                    % self.modulus;
            }
        }
        Matrix {
            modulus: self.modulus,
            rows: self.rows,
            cols: other.cols,
            entries,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&x| x == 0)
    }
}

/// A free resolution `⋯ → P_1 → P_0 → Q` built from iterated syzygies:
/// `P_i` covers `Ω^i(Q)` and `d_i = w_i p_i: P_i → P_{i-1}`.
#[derive(Clone, Debug)]
pub struct Resolution {
    levels: Vec<Syzygy>,
    boundaries: Vec<Homomorphism>,
}

impl Resolution {
    /// `P_0, …, P_depth` with greedy generators.
    pub fn new(q: &Alg, depth: usize) -> Result<Self> {
        Self::with_priorities(q, depth, |a| (0..a.size()).collect())
    }

    /// As [`Resolution::new`], breaking generator ties at each level by the
    /// carrier order `priority(Ω^i(Q))`.
    pub fn with_priorities(
        q: &Alg,
        depth: usize,
        mut priority: impl FnMut(&Alg) -> Vec<usize>,
    ) -> Result<Self> {
        let modulus = modulus_of(q)?;
        let mut levels: Vec<Syzygy> = Vec::with_capacity(depth + 1);
        let mut boundaries = Vec::with_capacity(depth);
        let mut current = q.clone();
        for i in 0..=depth {
            let order = priority(&current);
            let s = syzygy_with(&current, &order)?;
            if i > 0 {
                let w = &levels[i - 1].inclusion;
                boundaries.push(s.cover.then(w)?);
            }
            if s.free().size() > crate::Limits::DEFAULT_MAX_CARRIER * modulus {
                return Err(Error::LimitsExceeded(format!(
                    "free module of rank {} over Z/{modulus}",
                    s.rank()
                )));
            }
            current = s.omega().clone();
            levels.push(s);
        }
        Ok(Resolution { levels, boundaries })
    }

    pub fn modulus(&self) -> usize {
        modulus_of(self.base()).expect("module resolution")
    }

    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn base(&self) -> &Alg {
        self.levels[0].base()
    }

    /// The syzygy covering `Ω^i(Q)`.
    pub fn level(&self, i: usize) -> &Syzygy {
        &self.levels[i]
    }

    pub fn rank(&self, i: usize) -> usize {
        self.levels[i].rank()
    }

    pub fn free(&self, i: usize) -> &Alg {
        self.levels[i].free()
    }

    /// `P_0 → Q`.
    pub fn augmentation(&self) -> &Homomorphism {
        &self.levels[0].cover
    }

    /// `d_i: P_i → P_{i-1}`, `1 ≤ i ≤ depth`.
    pub fn boundary(&self, i: usize) -> &Homomorphism {
        &self.boundaries[i - 1]
    }

    /// The matrix of `d_i`.
    pub fn matrix(&self, i: usize) -> Matrix {
        let m = self.modulus();
        let (rows, cols) = (self.rank(i - 1), self.rank(i));
        let d = self.boundary(i);
        let mut entries = vec![0; rows * cols];
        for j in 0..cols {
            let image = d.apply(m.pow(j as u32));
            for (r, c) in coordinates(m, rows, image).into_iter().enumerate() {
                entries[r * cols + j] = c;
            }
        }
        Matrix {
            modulus: m,
            rows,
            cols,
            entries,
        }
    }
}

/// `Ext^n(Q, K)` computed as `H^n(Hom(P_•, K))`: cochains are tuples in
/// `K^{r_n}` (images of the basis of `P_n`), and each class is named by its
/// least representative.
#[derive(Clone, Debug)]
pub struct ExtGroup {
    degree: usize,
    k: Alg,
    resolution: Resolution,
    coboundaries: BTreeSet<Vec<usize>>,
    classes: Vec<Vec<usize>>,
}

/// A class in `Ext^n(Q, K)`, named by its least cocycle representative.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CohomologyClass {
    pub degree: usize,
    pub representative: Vec<usize>,
}

impl CohomologyClass {
    pub fn is_zero(&self) -> bool {
        self.representative.iter().all(|&x| x == 0)
    }
}

impl ExtGroup {
    pub fn new(q: &Alg, k: &Alg, n: usize) -> Result<Self> {
        Self::from_resolution(Resolution::new(q, n + 1)?, k, n)
    }

    pub fn from_resolution(resolution: Resolution, k: &Alg, n: usize) -> Result<Self> {
        if n == 0 || resolution.depth() < n + 1 {
            return Err(Error::InvalidData(format!(
                "degree {n} needs a resolution of depth at least {}",
                n + 1
            )));
        }
        if modulus_of(k)? != resolution.modulus() {
            return Err(Error::VarietyMismatch);
        }
        for i in [n - 1, n] {
            let r = resolution.rank(i);
            if k.size().checked_pow(r as u32).is_none_or(|t| t > MAX_COCHAINS) {
                return Err(Error::LimitsExceeded(format!(
                    "|K|^{r} cochains in degree {i}"
                )));
            }
        }
        let d_n = resolution.matrix(n);
        let d_next = resolution.matrix(n + 1);
        let mut coboundaries = BTreeSet::new();
        for_each_tuple(k.size(), resolution.rank(n - 1), |phi| {
            coboundaries.insert(pull(k, &d_n, phi));
        });
        let mut classes = BTreeSet::new();
        let mut group = ExtGroup {
            degree: n,
            k: k.clone(),
            resolution,
            coboundaries,
            classes: Vec::new(),
        };
        for_each_tuple(k.size(), group.resolution.rank(n), |z| {
            if pull(k, &d_next, z).iter().all(|&x| x == 0) {
                classes.insert(group.normalize(z));
            }
        });
        group.classes = classes.into_iter().collect();
        Ok(group)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.classes.len()
    }

    pub fn resolution(&self) -> &Resolution {
        &self.resolution
    }

    pub fn coboundaries(&self) -> &BTreeSet<Vec<usize>> {
        &self.coboundaries
    }

    /// All classes, ascending.
    pub fn classes(&self) -> Vec<CohomologyClass> {
        self.classes
            .iter()
            .map(|r| CohomologyClass {
                degree: self.degree,
                representative: r.clone(),
            })
            .collect()
    }

    /// Least element of `z + B^n`.
    pub fn normalize(&self, z: &[usize]) -> Vec<usize> {
        let add = self.k.variety().op("add").expect("modules have `add`");
        self.coboundaries
            .iter()
            .map(|b| {
                z.iter()
                    .zip(b)
                    .map(|(&x, &y)| self.k.apply2(add, x, y))
                    .collect::<Vec<_>>()
            })
            .min()
            .expect("0 is a coboundary")
    }

    /// The class of the cocycle obtained by lifting `1_Q` along the
    /// resolution into `e`: `γ_0: P_0 → X_1` over `Q`, then
    /// `f_{i+1} γ_i = γ_{i-1} d_i`, ending in `γ_n: P_n → K`.
    pub fn yoneda_class(&self, e: &ExactSequence) -> Result<CohomologyClass> {
        let n = self.degree;
        if e.len() != n {
            return Err(Error::ShapeMismatch(format!(
                "sequence of length {} for degree {n}",
                e.len()
            )));
        }
        if !same_algebra(e.base(), self.resolution.base())
            || !same_algebra(e.kernel_object(), &self.k)
        {
            return Err(Error::EndpointMismatch);
        }
        let res = &self.resolution;
        let m = res.modulus();
        let mut targets: Vec<usize> = res.level(0).generators.clone();
        for i in 0..=n {
            // Basis images of P_i must lie over `targets` along f_{i+1}.
            let f = e.f(i + 1);
            let inv = f.preimage_table();
            let images = targets
                .iter()
                .map(|&t| {
                    inv[t].ok_or_else(|| {
                        Error::NoLift(format!("element {t} has no preimage along f_{}", i + 1))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            if i == n {
                return Ok(CohomologyClass {
                    degree: n,
                    representative: self.normalize(&images),
                });
            }
            let gamma = free_map(res.free(i), res.rank(i), f.dom(), &images)?;
            let d = res.boundary(i + 1);
            targets = (0..res.rank(i + 1))
                .map(|j| gamma.apply(d.apply(m.pow(j as u32))))
                .collect();
        }
        unreachable!("the loop returns at i = n")
    }
}

/// `(δφ)_j = Σ_r d[r][j]·φ_r` in `K`.
fn pull(k: &Alg, d: &Matrix, phi: &[usize]) -> Vec<usize> {
    let add = k.variety().op("add").expect("modules have `add`");
    (0..d.cols)
        .map(|j| {
            (0..d.rows).fold(0, |acc, r| k.apply2(add, acc, scalar(k, d.get(r, j), phi[r])))
        })
        .collect()
}

/// `Ext^n(Q, K)` over `ℤ/m` from the greedy resolution of `Q`.
pub fn ext_via_resolution(q: &Alg, k: &Alg, n: usize) -> Result<ExtGroup> {
    ExtGroup::new(q, k, n)
}

/// The class of `e` in `Ext^n(Q, K)`, `n` the length of `e`.
pub fn yoneda_class_of(e: &ExactSequence) -> Result<CohomologyClass> {
    ExtGroup::new(e.base(), e.kernel_object(), e.len())?.yoneda_class(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::builtins::{cyclic, named};
    use crate::algebra::VarietyPresentation;
    use crate::ext1::validate_ses;
    use crate::long_exact::splice;

    fn z(n: usize) -> Alg {
        cyclic(&VarietyPresentation::modules(4), n).unwrap()
    }

    #[test]
    fn periodic_resolution_of_z2() {
        let r = Resolution::new(&z(2), 3).unwrap();
        for i in 1..=3 {
            let m = r.matrix(i);
            assert_eq!((m.rows, m.cols, m.entries.clone()), (1, 1, vec![2]));
        }
        assert!(r.matrix(1).mul(&r.matrix(2)).is_zero());
    }

    #[test]
    fn ext_orders() {
        for n in 1..=3 {
            assert_eq!(ext_via_resolution(&z(2), &z(2), n).unwrap().order(), 2);
            assert_eq!(ext_via_resolution(&z(4), &z(2), n).unwrap().order(), 1);
        }
        // Z4 is self-injective.
        assert_eq!(ext_via_resolution(&z(2), &z(4), 1).unwrap().order(), 1);
        let zero = named(&VarietyPresentation::modules(4), "0").unwrap();
        assert_eq!(ext_via_resolution(&zero, &z(2), 2).unwrap().order(), 1);
    }

    fn nonsplit() -> ExactSequence {
        let k = Homomorphism::new(z(2), z(4), vec![0, 2]).unwrap();
        let q = Homomorphism::new(z(4), z(2), vec![0, 1, 0, 1]).unwrap();
        ExactSequence::from_ses(&validate_ses(&k, &q).unwrap())
    }

    fn split() -> ExactSequence {
        let p = crate::algebra::product(&z(2), &z(2)).unwrap();
        let k = Homomorphism::new(z(2), p.algebra.clone(), vec![0, 1]).unwrap();
        ExactSequence::from_ses(&validate_ses(&k, &p.projections[1]).unwrap())
    }

    #[test]
    fn yoneda_classes_in_degree_one_and_two() {
        assert!(yoneda_class_of(&split()).unwrap().is_zero());
        assert!(!yoneda_class_of(&nonsplit()).unwrap().is_zero());
        let two = splice(&nonsplit(), &nonsplit()).unwrap();
        assert!(!yoneda_class_of(&two).unwrap().is_zero());
        let mixed = splice(&split(), &nonsplit()).unwrap();
        assert!(yoneda_class_of(&mixed).unwrap().is_zero());
    }
}
