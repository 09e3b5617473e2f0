use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use super::finite::{for_each_tuple, table_index, Alg, FiniteAlgebra};
use super::hom::Homomorphism;
use crate::{Error, Result};

/// Disjoint-set forest with path halving and union by size.
#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Merges the classes of `a` and `b`; returns whether they were distinct.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            core::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        true
    }
}

/// A partition of an algebra's carrier compatible with every operation.
///
/// Blocks are sorted by their least element, so block `0` always holds the
/// constant and quotient elements are numbered in that order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Congruence {
    algebra: Alg,
    class_of: Vec<usize>,
    blocks: Vec<Vec<usize>>,
}

impl Congruence {
    /// Accepts an arbitrary partition and checks compatibility.
    pub fn from_blocks(algebra: &Alg, blocks: &[Vec<usize>]) -> Result<Self> {
        let n = algebra.size();
        let mut label = vec![usize::MAX; n];
        for (b, block) in blocks.iter().enumerate() {
            for &x in block {
                if x >= n || label[x] != usize::MAX {
                    return Err(Error::InvalidData("blocks do not partition the carrier".into()));
                }
                label[x] = b;
            }
        }
        if label.contains(&usize::MAX) {
            return Err(Error::InvalidData("blocks do not cover the carrier".into()));
        }
        let c = Self::from_labels(algebra, &label);
        if !c.is_compatible() {
            return Err(Error::IncompatiblePartition);
        }
        Ok(c)
    }

    /// The kernel congruence of a homomorphism: `x ~ y` iff `f(x) = f(y)`.
    pub fn of_hom(f: &Homomorphism) -> Self {
        Self::from_labels(f.dom(), f.map())
    }

    /// Builds the partition "same label" without checking compatibility.
    fn from_labels(algebra: &Alg, label: &[usize]) -> Self {
        let n = algebra.size();
        let mut renumber = vec![usize::MAX; label.iter().max().map_or(0, |m| m + 1)];
        let mut class_of = vec![0; n];
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for x in 0..n {
            let l = label[x];
            if renumber[l] == usize::MAX {
                renumber[l] = blocks.len();
                blocks.push(Vec::new());
            }
            class_of[x] = renumber[l];
            blocks[renumber[l]].push(x);
        }
        Congruence {
            algebra: algebra.clone(),
            class_of,
            blocks,
        }
    }

    pub fn algebra(&self) -> &Alg {
        &self.algebra
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn class_of(&self, x: usize) -> usize {
        self.class_of[x]
    }

    pub fn classes(&self) -> &[usize] {
        &self.class_of
    }

    pub fn num_classes(&self) -> usize {
        self.blocks.len()
    }

    pub fn related(&self, x: usize, y: usize) -> bool {
        self.class_of[x] == self.class_of[y]
    }

    pub fn is_discrete(&self) -> bool {
        self.blocks.len() == self.algebra.size()
    }

    pub fn is_full(&self) -> bool {
        self.blocks.len() == 1
    }

    /// Every pair related here is related in `other`.
    pub fn is_finer_than(&self, other: &Congruence) -> bool {
        (0..self.algebra.size()).all(|x| other.related(x, self.blocks[self.class_of[x]][0]))
    }

    /// The block of `0`, which is the kernel of the quotient map.
    pub fn zero_block(&self) -> &[usize] {
        &self.blocks[0]
    }

    fn is_compatible(&self) -> bool {
        let a = &self.algebra;
        let sig = a.variety().signature();
        let mut rep = Vec::new();
        (0..sig.len()).all(|op| {
            let mut ok = true;
            for_each_tuple(a.size(), sig.arity(op), |args| {
                if !ok {
                    return;
                }
                rep.clear();
                rep.extend(args.iter().map(|&x| self.blocks[self.class_of[x]][0]));
                ok = self.related(a.apply(op, args), a.apply(op, &rep));
            });
            ok
        })
    }
}

/// Smallest congruence containing `pairs`.
///
/// Union-find seeded with the pairs, then repeated sweeps over every
/// operation: argument tuples are keyed by their class representatives and
/// outputs of tuples with the same key are merged. A sweep with no merges
/// means the partition is a fixpoint.
pub fn congruence_closure(a: &Alg, pairs: &[(usize, usize)]) -> Result<Congruence> {
    let n = a.size();
    if let Some(&(x, y)) = pairs.iter().find(|&&(x, y)| x >= n || y >= n) {
        return Err(Error::InvalidData(alloc::format!(
            "pair ({x}, {y}) outside the carrier"
        )));
    }
    let mut uf = UnionFind::new(n);
    for &(x, y) in pairs {
        uf.union(x, y);
    }
    let sig = a.variety().signature();
    let mut key_args = Vec::new();
    loop {
        let mut merges = 0usize;
        for op in 0..sig.len() {
            let r = sig.arity(op);
            if r == 0 {
                continue;
            }
            let mut seen = vec![usize::MAX; n.pow(r as u32)];
            let table = a.table(op);
            for_each_tuple(n, r, |args| {
                key_args.clear();
                key_args.extend(args.iter().map(|&x| uf.find(x)));
                let key = table_index(n, &key_args);
                let out = table[table_index(n, args)];
                match seen[key] {
                    usize::MAX => seen[key] = out,
                    prev => {
                        if uf.union(prev, out) {
                            merges += 1;
                        }
                    }
                }
            });
        }
        if merges == 0 {
            break;
        }
    }
    let label: Vec<usize> = (0..n).map(|x| uf.find(x)).collect();
    Ok(Congruence::from_labels(a, &label))
}

/// The quotient algebra (block of `0` is element `0`) and the projection.
pub fn quotient(a: &Alg, c: &Congruence) -> Result<(Alg, Homomorphism)> {
    if !super::hom::same_algebra(a, &c.algebra) {
        return Err(Error::ShapeMismatch("congruence belongs to another algebra".into()));
    }
    if !c.is_compatible() {
        return Err(Error::IncompatiblePartition);
    }
    let mut rep = Vec::new();
    let q = Arc::new(FiniteAlgebra::from_fn_trusted(
        a.variety().clone(),
        c.num_classes(),
        |op, args| {
            rep.clear();
            rep.extend(args.iter().map(|&b| c.blocks[b][0]));
            c.class_of[a.apply(op, &rep)]
        },
    ));
    let proj = Homomorphism::trusted(a.clone(), q.clone(), c.class_of.clone());
    Ok((q, proj))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::builtins::cyclic;
    use crate::algebra::VarietyPresentation;

    fn z4() -> Alg {
        cyclic(&VarietyPresentation::abelian_groups(), 4).unwrap()
    }

    #[test]
    fn empty_pairs_give_discrete() {
        let c = congruence_closure(&z4(), &[]).unwrap();
        assert!(c.is_discrete());
    }

    #[test]
    fn closure_in_z4() {
        let c = congruence_closure(&z4(), &[(2, 0)]).unwrap();
        assert_eq!(c.blocks(), &[vec![0, 2], vec![1, 3]]);
        let c = congruence_closure(&z4(), &[(1, 0)]).unwrap();
        assert!(c.is_full());
    }

    #[test]
    fn quotient_of_z4() {
        let a = z4();
        let c = congruence_closure(&a, &[(2, 0)]).unwrap();
        let (q, p) = quotient(&a, &c).unwrap();
        assert_eq!(q.size(), 2);
        assert_eq!(p.map(), &[0, 1, 0, 1]);
        q.check_equations(64).unwrap();
        assert_eq!(*q, *cyclic(&VarietyPresentation::abelian_groups(), 2).unwrap());

        let (q, p) = quotient(&a, &congruence_closure(&a, &[]).unwrap()).unwrap();
        assert_eq!(*q, *a);
        assert!(p.is_injective());
        let (q, _) = quotient(&a, &congruence_closure(&a, &[(3, 0)]).unwrap()).unwrap();
        assert!(q.is_trivial());
    }

    #[test]
    fn incompatible_blocks_rejected() {
        let a = z4();
        let err = Congruence::from_blocks(&a, &[vec![0, 1], vec![2], vec![3]]).unwrap_err();
        assert_eq!(err, Error::IncompatiblePartition);
        assert!(Congruence::from_blocks(&a, &[vec![0, 2], vec![1, 3]]).is_ok());
    }

    #[test]
    fn union_find_merges() {
        let mut uf = UnionFind::new(4);
        assert!(uf.union(0, 3));
        assert!(!uf.union(3, 0));
        assert_eq!(uf.find(3), uf.find(0));
        assert_ne!(uf.find(1), uf.find(0));
    }
}
