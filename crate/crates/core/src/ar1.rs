//! `T`-conditional autoregressive processes of order 1,
//!
//! ```text
//! f_n = θ f_{n−1} + ε_n,   f_0 = 0,   θ ∈ R(T), |θ| < e,   T ε_n = 0,
//! ```
//!
//! their closed-form NED certificate `ξ_m = |θ|^{m+1}/(e − |θ|)`, and the
//! supporting facts used to derive it.

use rand::Rng;

use crate::error::{Error, Result};
use crate::family::FamilyOperators;
use crate::lattice::LatticeVector;
use crate::ned::NedCertificate;
use crate::norms::{norm_vec, NormKind};
use crate::operator::{is_compatible, CondExpOperator};
use crate::random;
use crate::report::{Location, Report, SlackTracker};
use crate::tolerance;
use crate::window::ProcessWindow;

/// Largest admissible `max |θ|`; keeps `e/(e − |θ|)` well conditioned.
pub const THETA_LIMIT: f64 = 1.0 - 1e-6;

/// How raw noise is drawn before centering: `steps` draws per atom, uniform
/// in `[−scale, scale]`, optionally snapped to `levels` equally spaced
/// values. Discrete noise makes the generated family non-trivial: with
/// continuous draws every `ε_n` separates all atoms and each `T_i^j` is the
/// identity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSpec {
    pub steps: usize,
    pub seed: u64,
    pub scale: f64,
    pub levels: Option<u32>,
}

/// `ε_n = raw_n − T raw_n`.
pub fn center_noise(raw: &ProcessWindow, t: &CondExpOperator) -> Result<ProcessWindow> {
    if raw.atom_count() != t.atom_count() {
        return Err(Error::SpaceMismatch);
    }
    Ok(raw.map(|_, v| v - t.apply(v)))
}

/// Seeded raw noise on `1..=steps`, centered against `t`.
pub fn simulate_noise(spec: &NoiseSpec, t: &CondExpOperator) -> Result<ProcessWindow> {
    if spec.steps == 0 {
        return Err(Error::InvalidArgument("noise needs at least one step".into()));
    }
    if !(spec.scale.is_finite() && spec.scale >= 0.0) {
        return Err(Error::InvalidArgument("noise scale must be finite and nonnegative".into()));
    }
    if matches!(spec.levels, Some(l) if l < 2) {
        return Err(Error::InvalidArgument("quantised noise needs at least 2 levels".into()));
    }
    let mut rng = random::rng(spec.seed);
    let atoms = t.atom_count();
    let vectors = (0..spec.steps)
        .map(|_| {
            LatticeVector::new(
                (0..atoms)
                    .map(|_| match spec.levels {
                        None => spec.scale * rng.gen_range(-1.0..=1.0),
                        Some(l) => {
                            let k = rng.gen_range(0..l);
                            spec.scale * (2.0 * k as f64 / (l - 1) as f64 - 1.0)
                        }
                    })
                    .collect(),
            )
        })
        .collect();
    center_noise(&ProcessWindow::new(1, vectors)?, t)
}

#[derive(Debug, Clone)]
pub struct Ar1Instance {
    pub t: CondExpOperator,
    pub theta: LatticeVector,
    /// `ε_n` on `1..=N`.
    pub noise: ProcessWindow,
    /// `f_n` on `1..=N`.
    pub process: ProcessWindow,
    /// `g = max_n ‖ε_n‖_{T,2}`.
    pub g_bound: LatticeVector,
}

/// Runs the recursion from `f_0 = 0` and checks it against
/// `f_n = Σ_{i=0}^{n−1} θ^i ε_{n−i}`.
pub fn generate_ar1(theta: &LatticeVector, noise: &ProcessWindow, t: &CondExpOperator) -> Result<Ar1Instance> {
    theta.check_len(t.atom_count())?;
    if noise.atom_count() != t.atom_count() {
        return Err(Error::SpaceMismatch);
    }
    if theta.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite("theta".into()));
    }
    if !t.in_range(theta) {
        return Err(Error::ThetaNotInRangeOfT);
    }
    if theta.max_abs() > THETA_LIMIT {
        return Err(Error::ThetaNotContractive(theta.max_abs()));
    }
    for (n, e) in noise.iter() {
        if t.apply(e).max_abs() > tolerance::mean_zero_tol(e.max_abs()) {
            return Err(Error::NonZeroConditionalMean(n));
        }
    }

    let mut prev = LatticeVector::zeros(t.atom_count());
    let mut vectors = Vec::with_capacity(noise.len());
    for e in noise.vectors() {
        prev = theta * &prev + e;
        vectors.push(prev.clone());
    }
    let process = ProcessWindow::new(noise.start(), vectors)?;
    check_closed_form(theta, noise, &process)?;

    let g_bound = noise
        .vectors()
        .iter()
        .map(|e| norm_vec(e, t, NormKind::Two))
        .fold(LatticeVector::zeros(t.atom_count()), |acc, v| acc.sup(&v));
    Ok(Ar1Instance {
        t: t.clone(),
        theta: theta.clone(),
        noise: noise.clone(),
        process,
        g_bound,
    })
}

fn check_closed_form(theta: &LatticeVector, noise: &ProcessWindow, process: &ProcessWindow) -> Result<()> {
    let eps = noise.vectors();
    for (k, f) in process.vectors().iter().enumerate() {
        for a in 0..f.len() {
            // Σ_{i=0}^{k} θ^i ε_{k−i}, with |·| accumulated for the tolerance
            let (mut sum, mut mag, mut pow) = (0.0, 0.0, 1.0);
            for i in 0..=k {
                let term = pow * eps[k - i][a];
                sum += term;
                mag += term.abs();
                pow *= theta[a];
                if pow == 0.0 {
                    break;
                }
            }
            if (sum - f[a]).abs() > tolerance::tol(mag) {
                return Err(Error::InvalidArgument(format!(
                    "recursion and closed form disagree at index {}",
                    process.start() + k as i64
                )));
            }
        }
    }
    Ok(())
}

/// `|θ|^{m+1}/(e − |θ|)`.
pub fn ar1_xi(theta: &LatticeVector, m: usize) -> LatticeVector {
    let abs = theta.abs();
    abs.powi(m as i32 + 1).div(&abs.map(|x| 1.0 - x))
}

/// The `L^2` certificate `d_n = g`, `ξ_m = |θ|^{m+1}/(e − |θ|)` for
/// `m = 0..=N`.
pub fn ar1_ned_certificate(inst: &Ar1Instance) -> NedCertificate {
    NedCertificate {
        p: NormKind::Two,
        d: vec![inst.g_bound.clone(); inst.process.len()],
        xi: (0..=inst.process.len()).map(|m| ar1_xi(&inst.theta, m)).collect(),
    }
}

/// The `L^∞` certificate `d_n = 2 max_n ‖ε_n‖_{T,∞}` with the same `ξ`.
///
/// With `r = Σ_{i>m} θ^i ε_{n−i}` and `S = T_{n−m}^{n+m}`, the truncated sum
/// lies in `R(S)`, so `f_n − S f_n = r − S r` and
/// `‖r − Sr‖_{T,∞} ≤ 2‖r‖_{T,∞} ≤ 2 ξ_m max_i ‖ε_i‖_{T,∞}`.
pub fn ar1_sup_certificate(inst: &Ar1Instance) -> NedCertificate {
    let sup = inst
        .noise
        .vectors()
        .iter()
        .map(|e| norm_vec(e, &inst.t, NormKind::Inf))
        .fold(LatticeVector::zeros(inst.t.atom_count()), |acc, v| acc.sup(&v));
    NedCertificate {
        p: NormKind::Inf,
        d: vec![sup.scale(2.0); inst.process.len()],
        xi: (0..=inst.process.len()).map(|m| ar1_xi(&inst.theta, m)).collect(),
    }
}

/// `Σ_{i=0}^{min(m, n−1)} θ^i ε_{n−i}`, an element of `R(T_{n−m}^{n+m})`.
pub fn truncated_sum(inst: &Ar1Instance, n: i64, m: usize) -> Result<LatticeVector> {
    inst.process.at(n)?;
    let mut sum = LatticeVector::zeros(inst.t.atom_count());
    let mut pow = LatticeVector::constant(inst.t.atom_count(), 1.0);
    for i in 0..=m as i64 {
        let Some(e) = inst.noise.get(n - i) else { break };
        sum = sum + &pow * e;
        pow = &pow * &inst.theta;
    }
    Ok(sum)
}

/// The optimality bridge: the NED defect at `p = 2` is at most the error
/// of the truncated sum, `‖f_n − Σ_{i≤m} θ^i ε_{n−i}‖_{T,2}`, for every
/// `(n, m)` with `m ≤ max_gap`.
pub fn verify_truncation_bridge(inst: &Ar1Instance, family: &FamilyOperators, max_gap: usize) -> Result<Report> {
    let t = &inst.t;
    let mut tracker = SlackTracker::new("ar1_truncation_bridge");
    for (n, f) in inst.process.iter() {
        for m in 0..=max_gap {
            let op = family.get(n - m as i64, n + m as i64);
            let defect = norm_vec(&(f - op.apply(f)), t, NormKind::Two);
            let trunc = norm_vec(&(f - truncated_sum(inst, n, m)?), t, NormKind::Two);
            tracker.le(&defect, &trunc, t.partition(), Location::nm(n, m));
        }
    }
    Ok(tracker.finish())
}

fn check_contractive(theta: &LatticeVector) -> Result<()> {
    if theta.iter().all(|&x| (0.0..1.0).contains(&x)) {
        Ok(())
    } else {
        Err(Error::NotContractive)
    }
}

/// `Σ_{i=0}^{terms} θ^i` and its limit `e/(e − θ)`.
pub fn geometric_sum(theta: &LatticeVector, terms: usize) -> Result<(LatticeVector, LatticeVector)> {
    check_contractive(theta)?;
    let len = theta.len();
    let mut partial = LatticeVector::zeros(len);
    let mut pow = LatticeVector::constant(len, 1.0);
    for _ in 0..=terms {
        partial = partial + &pow;
        pow = &pow * theta;
    }
    let closed = theta.map(|x| 1.0 / (1.0 - x));
    Ok((partial, closed))
}

/// Smallest `m` with `max θ^m ≤ tolerance`.
pub fn power_decay_check(theta: &LatticeVector, tolerance: f64) -> Result<usize> {
    check_contractive(theta)?;
    if !(tolerance > 0.0) {
        return Err(Error::InvalidArgument("tolerance must be positive".into()));
    }
    let mut prev = LatticeVector::constant(theta.len(), 1.0);
    let mut m = 0usize;
    loop {
        let pow = theta.powi(m as i32);
        debug_assert!(pow.le_within(&prev, 0.0), "θ^m must not increase");
        if pow.max() <= tolerance {
            return Ok(m);
        }
        prev = pow;
        m += 1;
        if m > i32::MAX as usize {
            return Err(Error::LimitExceeded {
                what: "power decay steps",
                value: m,
                limit: i32::MAX as usize,
            });
        }
    }
}

/// For `S` compatible with `T` and random `g ∈ R(S)` (plus `g = Sf` and
/// `g = 0`): `‖f − Sf‖²_{T,2} ≤ ‖f − g‖²_{T,2}`, the decomposition
/// `T(f − g)² = T(f − Sf)² + T(Sf − g)²`, and `T[(f − Sf)(Sf − g)] = 0`.
pub fn verify_projection_optimality(
    f: &LatticeVector,
    s: &CondExpOperator,
    t: &CondExpOperator,
    trials: usize,
    seed: u64,
) -> Result<Vec<Report>> {
    if !is_compatible(s, t)? {
        return Err(Error::IncompatibleOperators);
    }
    f.check_len(t.atom_count())?;
    let mut rng = random::rng(seed);
    let sf = s.apply(f);
    let scale = 2.0 * f.max_abs().max(1.0);
    let mut candidates = vec![sf.clone(), LatticeVector::zeros(f.len())];
    candidates.extend((0..trials).map(|_| random::block_constant(&mut rng, s, scale)));

    let blocks = t.partition();
    let mut optimal = SlackTracker::new("projection_optimality");
    let mut decomposition = SlackTracker::new("projection_decomposition");
    let mut cross = SlackTracker::new("projection_cross_term");
    let residual = f - &sf;
    let best = t.apply(&residual.square());
    for (i, g) in candidates.iter().enumerate() {
        let at = Location::trial(i);
        let err = t.apply(&(f - g).square());
        optimal.le(&best, &err, blocks, at);
        let gap = &sf - g;
        decomposition.eq(&err, &(&best + &t.apply(&gap.square())), blocks, at);
        let zero = LatticeVector::zeros(f.len());
        cross.eq(&t.apply(&(&residual * &gap)), &zero, blocks, at);
    }
    Ok(vec![optimal.finish(), decomposition.finish(), cross.finish()])
}

/// `U(g · Vh) = Vh · Ug` when `R(V) ⊆ R(U)`.
pub fn verify_averaging_pull(
    u: &CondExpOperator,
    v: &CondExpOperator,
    g: &LatticeVector,
    h: &LatticeVector,
) -> Result<Report> {
    u.ensure_same_space(v)?;
    g.check_len(u.atom_count())?;
    h.check_len(u.atom_count())?;
    if !u.partition().refines(v.partition()) {
        return Err(Error::OperatorsNotNested);
    }
    let vh = v.apply(h);
    let lhs = u.apply(&(g * &vh));
    let rhs = &vh * &u.apply(g);
    let mut tracker = SlackTracker::new("averaging_pull_through");
    tracker.eq(&lhs, &rhs, u.partition(), Location::none());
    Ok(tracker.finish())
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::lattice::SampleSpace;
    use crate::partition::Partition;

    fn v(x: &[f64]) -> LatticeVector {
        LatticeVector::new(x.to_vec())
    }

    #[test]
    fn centering_examples() {
        let t = CondExpOperator::global(Arc::new(SampleSpace::uniform(2).unwrap()));
        let raw = ProcessWindow::new(1, vec![v(&[1.0, 3.0])]).unwrap();
        assert_eq!(center_noise(&raw, &t).unwrap().vectors()[0], v(&[-1.0, 1.0]));

        let w = Arc::new(SampleSpace::new(2, vec![0.25, 0.75]).unwrap());
        let t = CondExpOperator::global(w);
        let e = center_noise(&raw, &t).unwrap();
        assert_eq!(e.vectors()[0], v(&[-1.5, 0.5]));
        assert_eq!(t.apply(&e.vectors()[0]).max_abs(), 0.0);
    }

    #[test]
    fn recursion_by_hand() {
        let t = CondExpOperator::global(Arc::new(SampleSpace::uniform(2).unwrap()));
        let noise = ProcessWindow::new(1, vec![v(&[1.0, -1.0]); 2]).unwrap();
        let inst = generate_ar1(&v(&[0.5, 0.5]), &noise, &t).unwrap();
        assert_eq!(inst.process.at(2).unwrap(), &v(&[1.5, -1.5]));
        assert_eq!(
            generate_ar1(&v(&[1.0, 1.0]), &noise, &t).unwrap_err(),
            Error::ThetaNotContractive(1.0)
        );
        assert_eq!(
            generate_ar1(&v(&[0.5, 0.2]), &noise, &t).unwrap_err(),
            Error::ThetaNotInRangeOfT
        );
    }

    #[test]
    fn xi_formula() {
        let xi = ar1_xi(&v(&[0.5, 0.25]), 3);
        assert_eq!(xi[0], 0.5f64.powi(3));
        assert!((xi[1] - 0.25f64.powi(4) / 0.75).abs() < 1e-16);
    }

    #[test]
    fn geometric_and_power_decay() {
        let (partial, closed) = geometric_sum(&v(&[0.5, 0.25]), 40).unwrap();
        assert!(closed.approx_eq(&v(&[2.0, 4.0 / 3.0]), 1e-15));
        assert!(partial.approx_eq(&closed, 1e-11));
        assert_eq!(geometric_sum(&v(&[1.0]), 3), Err(Error::NotContractive));
        assert_eq!(power_decay_check(&v(&[0.5]), 1e-3).unwrap(), 10);
        assert_eq!(power_decay_check(&v(&[0.0]), 1e-3).unwrap(), 1);
        assert_eq!(power_decay_check(&v(&[0.9, 0.1]), 0.5).unwrap(), 7);
    }

    #[test]
    fn optimality_example() {
        let space = Arc::new(SampleSpace::uniform(4).unwrap());
        let t = CondExpOperator::global(space);
        let s = t.with_partition(Partition::new(4, vec![vec![0, 1], vec![2, 3]]).unwrap()).unwrap();
        let f = v(&[1.0, 2.0, 3.0, 4.0]);
        let reports = verify_projection_optimality(&f, &s, &t, 20, 1).unwrap();
        assert!(reports.iter().all(|r| r.pass));
        let resid = &f - &s.apply(&f);
        assert_eq!(t.apply(&resid.square())[0], 0.25);
        assert_eq!(t.apply(&f.square())[0], 7.5);
    }
}
