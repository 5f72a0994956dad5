//! Partitions of the atom set. Every conditional expectation operator on a
//! finite space is block averaging over some partition, and inclusion of
//! ranges is reverse refinement of partitions.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::lattice::LatticeVector;

/// A disjoint cover of `0..atom_count` by nonempty blocks.
///
/// Stored canonically: atoms sorted within each block, blocks ordered by
/// their smallest atom. Two partitions are equal iff they have the same
/// blocks.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    blocks: Vec<Vec<usize>>,
    block_of: Vec<usize>,
}

impl Partition {
    pub fn new(atom_count: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut owner = vec![usize::MAX; atom_count];
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::InvalidPartition(format!("block {b} is empty")));
            }
            for &atom in block {
                if atom >= atom_count {
                    return Err(Error::InvalidPartition(format!(
                        "atom index {atom} out of range (space has {atom_count} atoms)"
                    )));
                }
                if owner[atom] != usize::MAX {
                    return Err(Error::InvalidPartition(format!(
                        "atom {atom} appears in more than one block"
                    )));
                }
                owner[atom] = b;
            }
        }
        if let Some(atom) = owner.iter().position(|&o| o == usize::MAX) {
            return Err(Error::InvalidPartition(format!(
                "atom {atom} is not covered"
            )));
        }
        Ok(Self::from_labels(&owner))
    }

    /// Builds the partition whose blocks are the level sets of `labels`.
    fn from_labels<L: Eq + std::hash::Hash + Copy>(labels: &[L]) -> Self {
        let mut index: HashMap<L, usize> = HashMap::new();
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        let mut block_of = Vec::with_capacity(labels.len());
        // Atoms are visited in increasing order, so blocks come out canonical.
        for (atom, label) in labels.iter().enumerate() {
            let b = *index.entry(*label).or_insert_with(|| {
                blocks.push(Vec::new());
                blocks.len() - 1
            });
            blocks[b].push(atom);
            block_of.push(b);
        }
        Self { blocks, block_of }
    }

    /// The one-block partition; its operator is the global weighted mean.
    pub fn trivial(atom_count: usize) -> Self {
        Self::from_labels(&vec![0u8; atom_count])
    }

    /// All singletons; its operator is the identity.
    pub fn discrete(atom_count: usize) -> Self {
        Self::from_labels(&(0..atom_count).collect::<Vec<_>>())
    }

    /// Level sets of `values`: atoms share a block iff their values are equal.
    pub fn level_sets(values: &LatticeVector) -> Self {
        // Normalise -0.0 so that it shares a block with 0.0.
        let bits: Vec<u64> = values.iter().map(|&x| (x + 0.0).to_bits()).collect();
        Self::from_labels(&bits)
    }

    pub fn atom_count(&self) -> usize {
        self.block_of.len()
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block_of(&self, atom: usize) -> usize {
        self.block_of[atom]
    }

    /// True iff every block of `self` lies inside a block of `coarser`.
    pub fn refines(&self, coarser: &Partition) -> bool {
        self.atom_count() == coarser.atom_count()
            && self.blocks.iter().all(|block| {
                let b = coarser.block_of(block[0]);
                block.iter().all(|&a| coarser.block_of(a) == b)
            })
    }

    /// Common refinement: atoms share a block iff they share one in both.
    pub fn join(&self, other: &Partition) -> Partition {
        assert_eq!(self.atom_count(), other.atom_count());
        let labels: Vec<(usize, usize)> = (0..self.atom_count())
            .map(|a| (self.block_of[a], other.block_of[a]))
            .collect();
        Self::from_labels(&labels)
    }

    /// Whether `v` is constant (within `tol`) on every block.
    pub fn is_constant_on_blocks(&self, v: &LatticeVector, tol: f64) -> bool {
        v.len() == self.atom_count()
            && self.blocks.iter().all(|block| {
                let first = v[block[0]];
                block.iter().all(|&a| (v[a] - first).abs() <= tol)
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form() {
        let p = Partition::new(4, vec![vec![3, 2], vec![1, 0]]).unwrap();
        assert_eq!(p.blocks(), &[vec![0, 1], vec![2, 3]]);
        let q = Partition::new(4, vec![vec![0, 1], vec![2, 3]]).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn rejects_overlap_gap_and_range() {
        assert!(Partition::new(3, vec![vec![0, 1], vec![1, 2]]).is_err());
        assert!(Partition::new(3, vec![vec![0, 1]]).is_err());
        assert!(Partition::new(2, vec![vec![0, 1, 2]]).is_err());
        assert!(Partition::new(2, vec![vec![0, 1], vec![]]).is_err());
    }

    #[test]
    fn refinement_is_a_partial_order() {
        let fine = Partition::discrete(4);
        let mid = Partition::new(4, vec![vec![0, 1], vec![2, 3]]).unwrap();
        let cross = Partition::new(4, vec![vec![0, 2], vec![1, 3]]).unwrap();
        let coarse = Partition::trivial(4);
        assert!(fine.refines(&mid) && mid.refines(&coarse) && fine.refines(&coarse));
        assert!(mid.refines(&mid));
        assert!(!coarse.refines(&mid));
        assert!(!mid.refines(&cross) && !cross.refines(&mid));
    }

    #[test]
    fn join_and_level_sets() {
        let a = Partition::level_sets(&LatticeVector::new(vec![1.0, 1.0, -1.0, -1.0]));
        let b = Partition::level_sets(&LatticeVector::new(vec![1.0, -1.0, 1.0, -1.0]));
        assert_eq!(a.blocks(), &[vec![0, 1], vec![2, 3]]);
        assert_eq!(a.join(&b), Partition::discrete(4));
        assert_eq!(
            Partition::level_sets(&LatticeVector::new(vec![0.0, -0.0])),
            Partition::trivial(2)
        );
    }
}
