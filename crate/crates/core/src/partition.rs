//! Equivalence relations on `0..n` as canonical block-id arrays.

use petgraph::unionfind::UnionFind;
use serde::Serialize;

use crate::algebra::{Element, FiniteAlgebra};

/// Block ids are first-occurrence ordinals, so equal relations have equal
/// arrays.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Partition {
    blocks: Vec<usize>,
}

impl Partition {
    /// Canonicalises an arbitrary labelling.
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut remap = std::collections::HashMap::new();
        let blocks = labels
            .iter()
            .map(|l| {
                let next = remap.len();
                *remap.entry(*l).or_insert(next)
            })
            .collect();
        Partition { blocks }
    }

    pub(crate) fn from_union_find(uf: UnionFind<usize>) -> Self {
        Partition::from_labels(&uf.into_labeling())
    }

    /// The identity relation Δ.
    pub fn discrete(n: usize) -> Self {
        Partition { blocks: (0..n).collect() }
    }

    /// The all relation ∇.
    pub fn full(n: usize) -> Self {
        Partition { blocks: vec![0; n] }
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn block_ids(&self) -> &[usize] {
        &self.blocks
    }

    pub fn block_of(&self, x: Element) -> usize {
        self.blocks[x]
    }

    pub fn block_count(&self) -> usize {
        self.blocks.iter().max().map_or(0, |m| m + 1)
    }

    pub fn blocks(&self) -> Vec<Vec<Element>> {
        let mut out = vec![Vec::new(); self.block_count()];
        for (x, &b) in self.blocks.iter().enumerate() {
            out[b].push(x);
        }
        out
    }

    pub fn related(&self, x: Element, y: Element) -> bool {
        self.blocks[x] == self.blocks[y]
    }

    pub fn is_discrete(&self) -> bool {
        self.block_count() == self.len()
    }

    pub fn is_full(&self) -> bool {
        self.block_count() <= 1
    }

    /// `self ⊆ other` as relations.
    pub fn refines(&self, other: &Partition) -> bool {
        // Each block of self must land in a single block of other.
        let mut image = vec![usize::MAX; self.block_count()];
        for (x, &b) in self.blocks.iter().enumerate() {
            let o = other.blocks[x];
            if image[b] == usize::MAX {
                image[b] = o;
            } else if image[b] != o {
                return false;
            }
        }
        true
    }

    pub fn meet(&self, other: &Partition) -> Partition {
        let pairs: Vec<usize> = self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(&a, &b)| a * other.len().max(1) + b)
            .collect();
        Partition::from_labels(&pairs)
    }

    pub fn join(&self, other: &Partition) -> Partition {
        let n = self.len();
        let mut uf = UnionFind::new(n);
        for p in [self, other] {
            let mut first = vec![usize::MAX; p.block_count()];
            for (x, &b) in p.blocks.iter().enumerate() {
                if first[b] == usize::MAX {
                    first[b] = x;
                } else {
                    uf.union(first[b], x);
                }
            }
        }
        Partition::from_union_find(uf)
    }

    /// Relational composition `self ∘ other` as a dense matrix:
    /// `(x, z)` iff some `y` has `x self y` and `y other z`.
    pub fn compose(&self, other: &Partition) -> Vec<bool> {
        let n = self.len();
        let mut out = vec![false; n * n];
        let mut reach = vec![false; other.block_count()];
        for x in 0..n {
            reach.iter_mut().for_each(|r| *r = false);
            for y in 0..n {
                if self.related(x, y) {
                    reach[other.blocks[y]] = true;
                }
            }
            for z in 0..n {
                out[x * n + z] = reach[other.blocks[z]];
            }
        }
        out
    }

    pub fn permutes_with(&self, other: &Partition) -> bool {
        self.compose(other) == other.compose(self)
    }

    /// Pullback along a map into this partition's universe:
    /// `x ~ y` iff `map[x]` and `map[y]` are related.
    pub fn pullback(&self, map: &[Element]) -> Partition {
        let labels: Vec<usize> = map.iter().map(|&m| self.blocks[m]).collect();
        Partition::from_labels(&labels)
    }

    /// Whether every basic operation respects the relation.
    pub fn is_compatible(&self, algebra: &FiniteAlgebra) -> bool {
        let n = algebra.size();
        if self.len() != n {
            return false;
        }
        let reps: Vec<Element> = (0..n).map(|x| (0..n).find(|&y| self.related(x, y)).expect("reflexive")).collect();
        for (x, &r) in reps.iter().enumerate() {
            if r == x {
                continue;
            }
            if !self.related(algebra.star(x), algebra.star(r)) || !self.related(algebra.quote(x), algebra.quote(r)) {
                return false;
            }
            for z in 0..n {
                if !self.related(algebra.join(x, z), algebra.join(r, z))
                    || !self.related(algebra.meet(x, z), algebra.meet(r, z))
                    || !self.related(algebra.join(z, x), algebra.join(z, r))
                    || !self.related(algebra.meet(z, x), algebra.meet(z, r))
                {
                    return false;
                }
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_labels() {
        let p = Partition::from_labels(&[7, 3, 7, 9]);
        assert_eq!(p.block_ids(), &[0, 1, 0, 2]);
        assert_eq!(p.block_count(), 3);
    }

    #[test]
    fn lattice_operations() {
        let a = Partition::from_labels(&[0, 0, 1, 1]);
        let b = Partition::from_labels(&[0, 1, 0, 1]);
        assert!(a.meet(&b).is_discrete());
        assert!(a.join(&b).is_full());
        assert!(a.permutes_with(&b));
        assert!(Partition::discrete(4).refines(&a));
        assert!(a.refines(&Partition::full(4)));
        assert!(!a.refines(&b));
    }

    #[test]
    fn non_permuting_pair() {
        // {01}{2} and {0}{12} on three points do not permute.
        let a = Partition::from_labels(&[0, 0, 1]);
        let b = Partition::from_labels(&[0, 1, 1]);
        assert!(!a.permutes_with(&b));
    }

    #[test]
    fn pullback_along_inclusion() {
        let p = Partition::from_labels(&[0, 1, 0, 1]);
        assert_eq!(p.pullback(&[0, 2, 3]).block_ids(), &[0, 0, 1]);
    }
}
