use alloc::format;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use super::finite::{for_each_tuple, Alg};
use super::variety::same_variety;
use crate::{Error, Result};

/// A map between the carriers of two finite algebras of the same variety.
///
/// Construction through [`Homomorphism::new`] verifies the homomorphism
/// property; [`Homomorphism::unchecked`] only checks shapes, so candidate
/// maps can be built and then tested with [`Homomorphism::is_homomorphism`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Homomorphism {
    dom: Alg,
    cod: Alg,
    map: Vec<usize>,
}

impl Homomorphism {
    pub fn new(dom: Alg, cod: Alg, map: Vec<usize>) -> Result<Self> {
        let h = Self::unchecked(dom, cod, map)?;
        if let Some(why) = h.homomorphism_defect() {
            return Err(Error::NotHomomorphism(why));
        }
        Ok(h)
    }

    pub fn unchecked(dom: Alg, cod: Alg, map: Vec<usize>) -> Result<Self> {
        if !same_variety(dom.variety(), cod.variety()) {
            return Err(Error::VarietyMismatch);
        }
        if map.len() != dom.size() {
            return Err(Error::ShapeMismatch(format!(
                "map has {} entries, domain has {} elements",
                map.len(),
                dom.size()
            )));
        }
        if let Some(&bad) = map.iter().find(|&&y| y >= cod.size()) {
            return Err(Error::ShapeMismatch(format!(
                "map value {bad} outside the codomain"
            )));
        }
        Ok(Homomorphism { dom, cod, map })
    }

    pub(crate) fn trusted(dom: Alg, cod: Alg, map: Vec<usize>) -> Self {
        debug_assert!(Self::new(dom.clone(), cod.clone(), map.clone()).is_ok());
        Homomorphism { dom, cod, map }
    }

    pub fn identity(a: &Alg) -> Self {
        Homomorphism {
            dom: a.clone(),
            cod: a.clone(),
            map: (0..a.size()).collect(),
        }
    }

    /// The zero morphism `A → 0 → B`.
    pub fn zero(dom: &Alg, cod: &Alg) -> Result<Self> {
        Self::unchecked(dom.clone(), cod.clone(), vec![0; dom.size()])
    }

    pub fn dom(&self) -> &Alg {
        &self.dom
    }

    pub fn cod(&self) -> &Alg {
        &self.cod
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    /// True iff the map commutes with every operation table (which includes
    /// sending 0 to 0).
    pub fn is_homomorphism(&self) -> bool {
        self.homomorphism_defect().is_none()
    }

    fn homomorphism_defect(&self) -> Option<alloc::string::String> {
        let sig = self.dom.variety().signature();
        let mut image = Vec::new();
        for op in 0..sig.len() {
            let r = sig.arity(op);
            let mut bad = None;
            for_each_tuple(self.dom.size(), r, |args| {
                if bad.is_some() {
                    return;
                }
                image.clear();
                image.extend(args.iter().map(|&a| self.map[a]));
                if self.map[self.dom.apply(op, args)] != self.cod.apply(op, &image) {
                    bad = Some(args.to_vec());
                }
            });
            if let Some(args) = bad {
                return Some(format!("`{}` at {args:?}", sig.name(op)));
            }
        }
        None
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &Homomorphism) -> Result<Homomorphism> {
        if !same_algebra(&self.cod, &other.dom) {
            return Err(Error::ShapeMismatch(
                "composition of non-composable maps".into(),
            ));
        }
        Ok(Homomorphism {
            dom: self.dom.clone(),
            cod: other.cod.clone(),
            map: self.map.iter().map(|&x| other.map[x]).collect(),
        })
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.cod.size()];
        self.map.iter().all(|&y| !core::mem::replace(&mut seen[y], true))
    }

    pub fn is_surjective(&self) -> bool {
        let mut seen = vec![false; self.cod.size()];
        for &y in &self.map {
            seen[y] = true;
        }
        seen.into_iter().all(|b| b)
    }

    pub fn is_zero(&self) -> bool {
        self.map.iter().all(|&y| y == 0)
    }

    /// Sorted image.
    pub fn image(&self) -> Vec<usize> {
        let mut seen = vec![false; self.cod.size()];
        for &y in &self.map {
            seen[y] = true;
        }
        (0..self.cod.size()).filter(|&y| seen[y]).collect()
    }

    /// Partial inverse on the image (meaningful for injective maps).
    pub fn preimage_table(&self) -> Vec<Option<usize>> {
        let mut inv = vec![None; self.cod.size()];
        for (x, &y) in self.map.iter().enumerate() {
            inv[y].get_or_insert(x);
        }
        inv
    }

    /// Same map with the domain and codomain swapped for structurally equal
    /// copies.
    pub fn retarget(&self, dom: &Alg, cod: &Alg) -> Result<Homomorphism> {
        if !same_algebra(dom, &self.dom) || !same_algebra(cod, &self.cod) {
            return Err(Error::ShapeMismatch("retarget to different algebras".into()));
        }
        Ok(Homomorphism {
            dom: dom.clone(),
            cod: cod.clone(),
            map: self.map.clone(),
        })
    }
}

/// Whether two algebra handles are structurally identical.
pub fn same_algebra(a: &Alg, b: &Alg) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}
