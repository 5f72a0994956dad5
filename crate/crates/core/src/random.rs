//! Seeded generators for spaces, partitions and vectors.
//!
//! Everything is driven by an explicitly passed [`ChaCha8Rng`], so a seed
//! reproduces the same objects on every platform.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::lattice::{LatticeVector, SampleSpace};
use crate::operator::CondExpOperator;
use crate::partition::Partition;

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Weights uniform in `[0.1, 1.0)`, bounded away from zero.
pub fn space(rng: &mut SeededRng, atoms: usize) -> Arc<SampleSpace> {
    let weights = (0..atoms).map(|_| rng.gen_range(0.1..1.0)).collect();
    Arc::new(SampleSpace::new(atoms, weights).expect("positive weights"))
}

/// A random partition into at most `max_blocks` blocks.
pub fn partition(rng: &mut SeededRng, atoms: usize, max_blocks: usize) -> Partition {
    let k = rng.gen_range(1..=max_blocks.clamp(1, atoms));
    let mut labels: Vec<usize> = (0..atoms).map(|_| rng.gen_range(0..k)).collect();
    // Make sure the requested number of blocks is used when possible.
    let mut order: Vec<usize> = (0..atoms).collect();
    order.shuffle(rng);
    for (label, &atom) in order.iter().take(k).enumerate() {
        labels[atom] = label;
    }
    labels_to_partition(&labels)
}

/// A random refinement of `coarse`: each block is split into at most
/// `max_split` parts.
pub fn refinement(rng: &mut SeededRng, coarse: &Partition, max_split: usize) -> Partition {
    let atoms = coarse.atom_count();
    let mut labels = vec![0usize; atoms];
    let mut next = 0;
    for block in coarse.blocks() {
        let parts = rng.gen_range(1..=max_split.clamp(1, block.len()));
        for &a in block {
            labels[a] = next + rng.gen_range(0..parts);
        }
        next += parts;
    }
    labels_to_partition(&labels)
}

fn labels_to_partition(labels: &[usize]) -> Partition {
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut slot = std::collections::HashMap::new();
    for (a, l) in labels.iter().enumerate() {
        let b = *slot.entry(*l).or_insert_with(|| {
            blocks.push(Vec::new());
            blocks.len() - 1
        });
        blocks[b].push(a);
    }
    Partition::new(labels.len(), blocks).expect("labels induce a partition")
}

/// Entries uniform in `[-scale, scale)`.
pub fn vector(rng: &mut SeededRng, len: usize, scale: f64) -> LatticeVector {
    LatticeVector::new((0..len).map(|_| rng.gen_range(-scale..scale)).collect())
}

/// Entries uniform in `[0, scale)`.
pub fn nonnegative_vector(rng: &mut SeededRng, len: usize, scale: f64) -> LatticeVector {
    LatticeVector::new((0..len).map(|_| rng.gen_range(0.0..scale)).collect())
}

/// A vector constant on the blocks of `op`, entries uniform in `[-scale, scale)`.
pub fn block_constant(rng: &mut SeededRng, op: &CondExpOperator, scale: f64) -> LatticeVector {
    let per_block: Vec<f64> = (0..op.partition().block_count())
        .map(|_| rng.gen_range(-scale..scale))
        .collect();
    op.broadcast(&per_block)
}
