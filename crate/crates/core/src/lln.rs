//! `T`-uniformity and the weak law of large numbers, as finite checks.
//!
//! Order convergence of `T|f̄_{n,m}|` as `m → ∞` is replaced by three
//! observable properties along an increasing schedule of `m`: strict
//! decrease at each step, a geometric-mean step ratio below a bound, and a
//! final value below a threshold.

use crate::error::{Error, Result};
use crate::lattice::LatticeVector;
use crate::norms::{norm, ConditionalNormValue, NormKind};
use crate::operator::CondExpOperator;
use crate::report::{Location, Report, SlackTracker};
use crate::tolerance;
use crate::window::ProcessWindow;

/// For each `c`, `max_n T(P_{(|f_n| − ce)⁺} |f_n|)`, i.e. the conditional
/// mass of `|f_n|` above level `c`.
pub fn t_uniform_profile(f: &ProcessWindow, t: &CondExpOperator, c_grid: &[f64]) -> Result<Vec<LatticeVector>> {
    if f.atom_count() != t.atom_count() {
        return Err(Error::SpaceMismatch);
    }
    if c_grid.iter().any(|c| !(c.is_finite() && *c > 0.0)) || c_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("c grid must be positive and increasing".into()));
    }
    Ok(c_grid
        .iter()
        .map(|&c| {
            f.vectors()
                .iter()
                .map(|fn_| t.apply(&fn_.map(|x| if x.abs() > c { x.abs() } else { 0.0 })))
                .fold(LatticeVector::zeros(t.atom_count()), |acc, v| acc.sup(&v))
        })
        .collect())
}

/// `T|f̄_{n,m}|` with `f̄_{n,m} = (1/m) Σ_{i=n+1}^{n+m} f_i`.
pub fn cesaro_norm(f: &ProcessWindow, t: &CondExpOperator, n: i64, m: usize) -> Result<ConditionalNormValue> {
    if m == 0 {
        return Err(Error::InvalidArgument("Cesàro mean needs m ≥ 1".into()));
    }
    let (first, last) = (n + 1, n + m as i64);
    if first < f.start() {
        return Err(Error::IndexOutOfWindow(first));
    }
    if last > f.end() {
        return Err(Error::WindowOverflow {
            index: last,
            end: f.end(),
        });
    }
    let mut sum = LatticeVector::zeros(f.atom_count());
    for i in first..=last {
        sum = sum + f.at(i)?;
    }
    norm(&sum.scale(1.0 / m as f64), t, NormKind::One)
}

/// Outcome of [`lln_check`].
#[derive(Debug, Clone)]
pub struct LlnOutcome {
    /// Largest component of `T|f̄_{n,m}|` for each `m` in the schedule.
    pub values: Vec<f64>,
    /// `(v_last / v_first)^{1/(steps−1)}`.
    pub geometric_ratio: f64,
    /// Final value, geometric ratio and step-wise decrease.
    pub reports: Vec<Report>,
}

/// Evaluates `T|f̄_{n,m}|` along `schedule` with `n = start − 1` and checks
/// the decay surrogates.
pub fn lln_check(
    f: &ProcessWindow,
    t: &CondExpOperator,
    schedule: &[usize],
    ratio_bound: f64,
    final_bound: f64,
) -> Result<LlnOutcome> {
    if schedule.is_empty() || schedule[0] == 0 || schedule.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("schedule must be nonempty, positive and increasing".into()));
    }
    let n = f.start() - 1;
    let values = schedule
        .iter()
        .map(|&m| Ok(cesaro_norm(f, t, n, m)?.value.max()))
        .collect::<Result<Vec<f64>>>()?;

    let first = values[0];
    let last = *values.last().expect("nonempty");
    let steps = values.len();
    let geometric_ratio = if steps < 2 || first <= 0.0 {
        0.0
    } else {
        (last / first).powf(1.0 / (steps - 1) as f64)
    };

    let mut final_value = SlackTracker::new("lln_final_value");
    final_value.le_scalar(last, final_bound, Location::nm(n, schedule[steps - 1]));
    let mut ratio = SlackTracker::new("lln_geometric_ratio");
    ratio.le_scalar(geometric_ratio, ratio_bound, Location::nm(n, schedule[steps - 1]));
    let mut decrease = SlackTracker::new("lln_strict_decrease");
    for (i, w) in values.windows(2).enumerate() {
        let at = Location::nm(n, schedule[i + 1]);
        let negligible = w[0].max(w[1]) <= tolerance::tol(0.0);
        if w[1] < w[0] || negligible {
            decrease.le_scalar(w[1], w[0], at);
        } else {
            decrease.fail(at);
        }
    }
    Ok(LlnOutcome {
        values,
        geometric_ratio,
        reports: vec![final_value.finish(), ratio.finish(), decrease.finish()],
    })
}
