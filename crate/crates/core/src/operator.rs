//! Conditional expectation operators as weighted block averages.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::lattice::{BandProjection, LatticeVector, SampleSpace};
use crate::partition::Partition;
use crate::tolerance;

/// The conditional expectation onto the vectors constant on the blocks of a
/// partition:
///
/// ```text
/// (S f)(ω) = Σ_{ω' ∈ block(ω)} w(ω') f(ω') / Σ_{ω' ∈ block(ω)} w(ω')
/// ```
///
/// Because every weight is strictly positive the operator is strictly
/// positive, fixes `e`, and is an averaging operator: `S(g·f) = g·Sf` for
/// `g` in its range.
#[derive(Debug, Clone)]
pub struct CondExpOperator {
    space: Arc<SampleSpace>,
    partition: Partition,
    block_weights: Vec<f64>,
}

impl CondExpOperator {
    pub fn new(space: Arc<SampleSpace>, partition: Partition) -> Result<Self> {
        if partition.atom_count() != space.atom_count() {
            return Err(Error::InvalidPartition(format!(
                "partition covers {} atoms, space has {}",
                partition.atom_count(),
                space.atom_count()
            )));
        }
        let w = space.weights();
        let block_weights = partition
            .blocks()
            .iter()
            .map(|b| b.iter().map(|&a| w[a]).sum())
            .collect();
        Ok(Self {
            space,
            partition,
            block_weights,
        })
    }

    /// The global mean `f ↦ (Σ w f / Σ w) e`.
    pub fn global(space: Arc<SampleSpace>) -> Self {
        let n = space.atom_count();
        Self::new(space, Partition::trivial(n)).expect("trivial partition is valid")
    }

    /// The identity operator (finest partition).
    pub fn identity(space: Arc<SampleSpace>) -> Self {
        let n = space.atom_count();
        Self::new(space, Partition::discrete(n)).expect("discrete partition is valid")
    }

    /// Same space, different partition.
    pub fn with_partition(&self, partition: Partition) -> Result<Self> {
        Self::new(self.space.clone(), partition)
    }

    pub fn space(&self) -> &Arc<SampleSpace> {
        &self.space
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn atom_count(&self) -> usize {
        self.space.atom_count()
    }

    pub fn block_weights(&self) -> &[f64] {
        &self.block_weights
    }

    pub fn same_space(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.space, &other.space) || *self.space == *other.space
    }

    pub(crate) fn ensure_same_space(&self, other: &Self) -> Result<()> {
        if self.same_space(other) {
            Ok(())
        } else {
            Err(Error::SpaceMismatch)
        }
    }

    /// Per-block weighted means of `f`.
    pub fn block_means(&self, f: &LatticeVector) -> Vec<f64> {
        assert_eq!(f.len(), self.atom_count(), "vector not on this space");
        let w = self.space.weights();
        self.partition
            .blocks()
            .iter()
            .zip(&self.block_weights)
            .map(|(b, total)| b.iter().map(|&a| w[a] * f[a]).sum::<f64>() / total)
            .collect()
    }

    /// Broadcasts one value per block back onto the atoms.
    pub fn broadcast(&self, per_block: &[f64]) -> LatticeVector {
        LatticeVector::new(
            (0..self.atom_count())
                .map(|a| per_block[self.partition.block_of(a)])
                .collect(),
        )
    }

    /// Applies the operator.
    ///
    /// # Panics
    ///
    /// If `f` does not have one entry per atom. Use [`CondExpOperator::try_apply`]
    /// for a checked version.
    pub fn apply(&self, f: &LatticeVector) -> LatticeVector {
        self.broadcast(&self.block_means(f))
    }

    pub fn try_apply(&self, f: &LatticeVector) -> Result<LatticeVector> {
        f.check_len(self.atom_count())?;
        Ok(self.apply(f))
    }

    /// Whether `f` lies in the range (is constant on every block).
    pub fn in_range(&self, f: &LatticeVector) -> bool {
        let tol = tolerance::tol(f.max_abs());
        self.partition.is_constant_on_blocks(f, tol)
    }

    /// Per-block maximum of `|f|`, broadcast: the least element of the range
    /// dominating `|f|`.
    pub fn block_sup_abs(&self, f: &LatticeVector) -> LatticeVector {
        let per_block: Vec<f64> = self
            .partition
            .blocks()
            .iter()
            .map(|b| b.iter().fold(0.0, |m: f64, &a| m.max(f[a].abs())))
            .collect();
        self.broadcast(&per_block)
    }

    /// Membership of a band projection in `B(S)`: `Pe ∈ R(S)`.
    pub fn contains_projection(&self, p: &BandProjection) -> bool {
        self.partition.is_constant_on_blocks(p.indicator(), 0.0)
    }

    /// `(S T) f` for the composition `self ∘ other`.
    pub fn compose_apply(&self, other: &Self, f: &LatticeVector) -> LatticeVector {
        self.apply(&other.apply(f))
    }
}

/// Constructor mirroring the `cond_exp` operation.
pub fn cond_exp(space: Arc<SampleSpace>, partition: Partition) -> Result<CondExpOperator> {
    CondExpOperator::new(space, partition)
}

/// Checks `S T = T S = T` by applying both sides to every atom indicator.
pub fn operator_identity_holds(s: &CondExpOperator, t: &CondExpOperator) -> bool {
    let n = s.atom_count();
    (0..n).all(|atom| {
        let mut basis = LatticeVector::zeros(n).into_values();
        basis[atom] = 1.0;
        let basis = LatticeVector::new(basis);
        let tf = t.apply(&basis);
        let tol = tolerance::tol(1.0);
        s.apply(&tf).approx_eq(&tf, tol) && t.apply(&s.apply(&basis)).approx_eq(&tf, tol)
    })
}

/// `S` is compatible with `T` (`ST = TS = T`) iff `S`'s partition refines
/// `T`'s. Both the combinatorial and the operator form are evaluated and must
/// agree.
pub fn is_compatible(s: &CondExpOperator, t: &CondExpOperator) -> Result<bool> {
    s.ensure_same_space(t)?;
    let refines = s.partition().refines(t.partition());
    let numeric = operator_identity_holds(s, t);
    debug_assert_eq!(refines, numeric, "refinement and ST = TS = T disagree");
    Ok(refines && numeric)
}
