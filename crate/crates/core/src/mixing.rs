//! `T`-conditional strong (`α`) and uniform (`φ`) mixing coefficients.
//!
//! ```text
//! α_T(U,V) = sup { |T(PQe) − TPe·TQe| : P ∈ B(U), Q ∈ B(V) }
//! φ_T(U,V) = sup { ‖UQe − TQe‖_{T,∞} : Q ∈ B(V) }
//! ```
//!
//! Suprema of finitely many elements of `R(T)` are componentwise maxima.
//!
//! # Evaluation
//!
//! `B(U)` consists of unions of `U`-blocks. Since `U` and `V` refine `T`,
//! every quantity above on a `T`-block `B` only depends on which `U`- and
//! `V`-blocks inside `B` are selected, so the supremum splits into one
//! independent problem per `T`-block. Inside a block with weight `W`, `U`-blocks
//! `u_i` and `V`-blocks `v_j`, let `w_ij = w(u_i ∩ v_j)`. For fixed `P` the
//! expression `T(PQe) − TPe·TQe` is a sum over the selected `v_j` of
//!
//! ```text
//! c_j = Σ_{i ∈ P} w_ij / W − (w(P)/W)·(w(v_j)/W)
//! ```
//!
//! so the best `Q` takes all positive or all negative `c_j`. Every `P` is
//! enumerated; the maximisation over `Q` is exact. `φ` is treated the same
//! way with one linear objective per `U`-block. The literal double
//! enumeration over `B(U) × B(V)` is kept in the test suite as an oracle.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::family::FamilyOperators;
use crate::lattice::{BandProjection, LatticeVector};
use crate::norms::{norm_vec, NormKind};
use crate::operator::CondExpOperator;
use crate::partition::Partition;
use crate::report::{Location, Report, SlackTracker};

pub const DEFAULT_CAP: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MixingKind {
    Alpha,
    Phi,
}

impl MixingKind {
    pub fn label(self) -> &'static str {
        match self {
            MixingKind::Alpha => "alpha",
            MixingKind::Phi => "phi",
        }
    }
}

impl fmt::Display for MixingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// A mixing coefficient: an element of `R(T)₊`.
#[derive(Debug, Clone, PartialEq)]
pub struct MixingCoefficient {
    pub kind: MixingKind,
    pub value: LatticeVector,
}

fn check_cap(s: &CondExpOperator, cap: usize) -> Result<()> {
    let blocks = s.partition().block_count();
    if blocks > cap {
        Err(Error::CapExceeded { blocks, cap })
    } else {
        Ok(())
    }
}

/// All `2^b` projections in `B(S)`, one per set of `S`-blocks, ordered by
/// the bitmask over block indices (so `0` first and `I` last).
pub fn enumerate_band_projections(s: &CondExpOperator, cap: usize) -> Result<Vec<BandProjection>> {
    check_cap(s, cap)?;
    let p = s.partition();
    let b = p.block_count();
    Ok((0u64..1 << b)
        .map(|mask| {
            BandProjection::from_mask(
                (0..p.atom_count())
                    .map(|a| mask >> p.block_of(a) & 1 == 1)
                    .collect(),
            )
        })
        .collect())
}

fn check_pair(u: &CondExpOperator, v: &CondExpOperator, t: &CondExpOperator, cap: usize) -> Result<()> {
    u.ensure_same_space(t)?;
    v.ensure_same_space(t)?;
    if !u.partition().refines(t.partition()) || !v.partition().refines(t.partition()) {
        return Err(Error::IncompatibleOperators);
    }
    check_cap(u, cap)?;
    check_cap(v, cap)
}

/// Joint weights of the `U`- and `V`-blocks inside one `T`-block.
struct BlockTable {
    total: f64,
    // u_weights[i] = w(u_i), v_weights[j] = w(v_j), joint[i][j] = w(u_i ∩ v_j)
    u_weights: Vec<f64>,
    v_weights: Vec<f64>,
    joint: Vec<Vec<f64>>,
}

fn block_tables(u: &Partition, v: &Partition, t: &Partition, weights: &[f64]) -> Vec<BlockTable> {
    t.blocks()
        .iter()
        .map(|block| {
            let mut u_index = HashMap::new();
            let mut v_index = HashMap::new();
            for &a in block {
                let next = u_index.len();
                u_index.entry(u.block_of(a)).or_insert(next);
                let next = v_index.len();
                v_index.entry(v.block_of(a)).or_insert(next);
            }
            let mut table = BlockTable {
                total: 0.0,
                u_weights: vec![0.0; u_index.len()],
                v_weights: vec![0.0; v_index.len()],
                joint: vec![vec![0.0; v_index.len()]; u_index.len()],
            };
            for &a in block {
                let (i, j) = (u_index[&u.block_of(a)], v_index[&v.block_of(a)]);
                let w = weights[a];
                table.total += w;
                table.u_weights[i] += w;
                table.v_weights[j] += w;
                table.joint[i][j] += w;
            }
            table
        })
        .collect()
}

// max over sign-homogeneous selections of Σ_{j ∈ R} c_j, in absolute value
fn best_linear(c: impl Iterator<Item = f64>) -> f64 {
    let (pos, neg) = c.fold((0.0, 0.0), |(p, n), x| {
        if x > 0.0 {
            (p + x, n)
        } else {
            (p, n - x)
        }
    });
    f64::max(pos, neg)
}

fn alpha_block(table: &BlockTable) -> f64 {
    let a = table.u_weights.len();
    let c = table.v_weights.len();
    let w = table.total;
    // Row sums over the selected U-blocks, built incrementally from the
    // subset without its lowest element.
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(1 << a);
    let mut masses: Vec<f64> = Vec::with_capacity(1 << a);
    rows.push(vec![0.0; c]);
    masses.push(0.0);
    let mut best: f64 = 0.0;
    for mask in 1usize..1 << a {
        let low = mask.trailing_zeros() as usize;
        let prev = mask & (mask - 1);
        let row: Vec<f64> = rows[prev]
            .iter()
            .zip(&table.joint[low])
            .map(|(x, y)| x + y)
            .collect();
        let mass = masses[prev] + table.u_weights[low];
        let p = mass / w;
        best = best.max(best_linear(
            row.iter()
                .zip(&table.v_weights)
                .map(|(joint, vw)| joint / w - p * (vw / w)),
        ));
        rows.push(row);
        masses.push(mass);
    }
    best
}

fn phi_block(table: &BlockTable) -> f64 {
    let w = table.total;
    table
        .joint
        .iter()
        .zip(&table.u_weights)
        .map(|(row, uw)| {
            best_linear(
                row.iter()
                    .zip(&table.v_weights)
                    .map(|(joint, vw)| joint / uw - vw / w),
            )
        })
        .fold(0.0, f64::max)
}

fn coefficient(
    u: &CondExpOperator,
    v: &CondExpOperator,
    t: &CondExpOperator,
    cap: usize,
    kind: MixingKind,
) -> Result<MixingCoefficient> {
    check_pair(u, v, t, cap)?;
    let tables = block_tables(u.partition(), v.partition(), t.partition(), t.space().weights());
    let per_block: Vec<f64> = tables
        .iter()
        .map(|table| match kind {
            MixingKind::Alpha => alpha_block(table),
            MixingKind::Phi => phi_block(table),
        })
        .collect();
    Ok(MixingCoefficient {
        kind,
        value: t.broadcast(&per_block),
    })
}

/// `α_T(U,V)`.
pub fn alpha(u: &CondExpOperator, v: &CondExpOperator, t: &CondExpOperator, cap: usize) -> Result<MixingCoefficient> {
    coefficient(u, v, t, cap, MixingKind::Alpha)
}

/// `φ_T(U,V)`.
pub fn phi(u: &CondExpOperator, v: &CondExpOperator, t: &CondExpOperator, cap: usize) -> Result<MixingCoefficient> {
    coefficient(u, v, t, cap, MixingKind::Phi)
}

fn check_inequality_inputs(
    u: &CondExpOperator,
    v: &CondExpOperator,
    t: &CondExpOperator,
    f: &LatticeVector,
) -> Result<()> {
    f.check_len(t.atom_count())?;
    u.ensure_same_space(t)?;
    v.ensure_same_space(t)?;
    if !u.partition().refines(t.partition()) || !v.partition().refines(t.partition()) {
        return Err(Error::IncompatibleOperators);
    }
    if !v.in_range(f) {
        return Err(Error::NotInRangeOfV);
    }
    Ok(())
}

/// `‖Uf − Tf‖_{T,1} ≤ 4 α_T(U,V) ‖f‖_{T,∞}` for `f ∈ R(V)`.
pub fn verify_strong_mixing_inequality(
    u: &CondExpOperator,
    v: &CondExpOperator,
    t: &CondExpOperator,
    f: &LatticeVector,
    cap: usize,
) -> Result<Report> {
    check_inequality_inputs(u, v, t, f)?;
    let a = alpha(u, v, t, cap)?.value;
    let diff = u.apply(f) - t.apply(f);
    let lhs = norm_vec(&diff, t, NormKind::One);
    let rhs = (a * norm_vec(f, t, NormKind::Inf)).scale(4.0);
    let mut tracker = SlackTracker::new("strong_mixing_inequality");
    tracker.le(&lhs, &rhs, t.partition(), Location::none());
    Ok(tracker.finish())
}

/// `‖Uf − Tf‖_{T,1} ≤ ‖Uf − Tf‖_{T,∞} ≤ 2 φ_T(U,V) ‖f‖_{T,∞}` for `f ∈ R(V)`.
pub fn verify_uniform_mixing_inequality(
    u: &CondExpOperator,
    v: &CondExpOperator,
    t: &CondExpOperator,
    f: &LatticeVector,
    cap: usize,
) -> Result<Report> {
    check_inequality_inputs(u, v, t, f)?;
    let ph = phi(u, v, t, cap)?.value;
    let diff = u.apply(f) - t.apply(f);
    let one = norm_vec(&diff, t, NormKind::One);
    let sup = norm_vec(&diff, t, NormKind::Inf);
    let rhs = (ph * norm_vec(f, t, NormKind::Inf)).scale(2.0);
    let mut tracker = SlackTracker::new("uniform_mixing_inequality");
    tracker.le(&one, &sup, t.partition(), Location::none());
    tracker.le(&sup, &rhs, t.partition(), Location::none());
    Ok(tracker.finish())
}

fn check_gap(family: &FamilyOperators, m: usize) -> Result<()> {
    if m > family.span() {
        Err(Error::WindowTooSmall {
            gap: m,
            window: family.span(),
        })
    } else {
        Ok(())
    }
}

fn sequence_coefficient(family: &FamilyOperators, m: usize, cap: usize, kind: MixingKind) -> Result<MixingCoefficient> {
    check_gap(family, m)?;
    let t = family.base();
    let mut value = LatticeVector::zeros(t.atom_count());
    for n in family.start()..=family.end() - m as i64 {
        let past = family.lower_tail(n);
        let future = family.upper_tail(n + m as i64);
        value = value.sup(&coefficient(past, future, t, cap, kind)?.value);
    }
    Ok(MixingCoefficient { kind, value })
}

/// `α_{T,m} = max_n α_T(T_{n₀}^n, T_{n+m}^{n₁})` over the family's window.
pub fn sequence_alpha(family: &FamilyOperators, m: usize, cap: usize) -> Result<MixingCoefficient> {
    sequence_coefficient(family, m, cap, MixingKind::Alpha)
}

/// `φ_{T,m} = max_n φ_T(T_{n₀}^n, T_{n+m}^{n₁})` over the family's window.
pub fn sequence_phi(family: &FamilyOperators, m: usize, cap: usize) -> Result<MixingCoefficient> {
    sequence_coefficient(family, m, cap, MixingKind::Phi)
}

/// `α_{T,m}` and `φ_{T,m}` for `m = 0..=max_gap`, with each distinct pair
/// of tail partitions evaluated once.
#[derive(Debug, Clone, PartialEq)]
pub struct MixingSequences {
    pub alpha: Vec<LatticeVector>,
    pub phi: Vec<LatticeVector>,
}

pub fn mixing_sequences(family: &FamilyOperators, max_gap: usize, cap: usize) -> Result<MixingSequences> {
    check_gap(family, max_gap)?;
    let t = family.base();
    let zero = LatticeVector::zeros(t.atom_count());
    let mut cache: HashMap<(Partition, Partition), (LatticeVector, LatticeVector)> = HashMap::new();
    let mut out = MixingSequences {
        alpha: vec![zero.clone(); max_gap + 1],
        phi: vec![zero; max_gap + 1],
    };
    for m in 0..=max_gap {
        for n in family.start()..=family.end() - m as i64 {
            let past = family.lower_tail(n);
            let future = family.upper_tail(n + m as i64);
            let key = (past.partition().clone(), future.partition().clone());
            if !cache.contains_key(&key) {
                let a = alpha(past, future, t, cap)?.value;
                let p = phi(past, future, t, cap)?.value;
                cache.insert(key.clone(), (a, p));
            }
            let (a, p) = &cache[&key];
            out.alpha[m] = out.alpha[m].sup(a);
            out.phi[m] = out.phi[m].sup(p);
        }
    }
    Ok(out)
}

/// `α ≤ φ` componentwise for one operator triple.
pub fn verify_alpha_le_phi(u: &CondExpOperator, v: &CondExpOperator, t: &CondExpOperator, cap: usize) -> Result<Report> {
    let a = alpha(u, v, t, cap)?.value;
    let p = phi(u, v, t, cap)?.value;
    let mut tracker = SlackTracker::new("alpha_le_phi");
    tracker.le(&a, &p, t.partition(), Location::none());
    Ok(tracker.finish())
}
