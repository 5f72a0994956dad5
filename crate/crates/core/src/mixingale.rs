//! Mixingales, and the construction of a mixingale certificate from a
//! near-epoch-dependence certificate over a mixing family.
//!
//! `(f_n, T_n)` is a mixingale in `L^p(T)` when, for all `n` and `m`,
//!
//! ```text
//! (i)  ‖T_{n−m} f_n‖_{T,p}       ≤ c_n φ_m
//! (ii) ‖f_n − T_{n+m} f_n‖_{T,p} ≤ c_n φ_{m+1}
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::family::{FamilyOperators, Filtration};
use crate::lattice::LatticeVector;
use crate::mixing::{mixing_sequences, MixingSequences};
use crate::ned::{running_min, NedCertificate};
use crate::norms::{norm_vec, NormKind};
use crate::report::{Location, Report, SlackTracker};
use crate::tolerance;
use crate::window::ProcessWindow;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixingaleCertificate {
    pub p: NormKind,
    pub c: Vec<LatticeVector>,
    pub phi: Vec<LatticeVector>,
}

/// Checks both mixingale conditions: (i) for `m = 0..phi.len()` and (ii)
/// for `m = 0..phi.len()−1`, at every index of the window. Returns one
/// report per condition.
pub fn verify_mixingale(
    f: &ProcessWindow,
    filtration: &Filtration,
    cert: &MixingaleCertificate,
) -> Result<Vec<Report>> {
    let t = filtration.base();
    if f.atom_count() != t.atom_count() {
        return Err(Error::SpaceMismatch);
    }
    if cert.c.len() != f.len() || cert.phi.is_empty() {
        return Err(Error::ShapeMismatch(format!(
            "mixingale certificate has {} c-values and {} phi-values for a window of {}",
            cert.c.len(),
            cert.phi.len(),
            f.len()
        )));
    }
    let blocks = t.partition();
    let mut first = SlackTracker::new(format!("mixingale_i[p={}]", cert.p)).with_records();
    let mut second = SlackTracker::new(format!("mixingale_ii[p={}]", cert.p)).with_records();
    for ((n, fn_), c) in f.iter().zip(&cert.c) {
        for (m, phi) in cert.phi.iter().enumerate() {
            let at = Location::nm(n, m);
            let past = filtration.get(n - m as i64).apply(fn_);
            first.le(&norm_vec(&past, t, cert.p), &(c * phi), blocks, at);
            if let Some(next) = cert.phi.get(m + 1) {
                let rest = fn_ - filtration.get(n + m as i64).apply(fn_);
                second.le(&norm_vec(&rest, t, cert.p), &(c * next), blocks, at);
            }
        }
    }
    Ok(vec![first.finish(), second.finish()])
}

/// Everything produced by [`mixingale_from_ned`].
#[derive(Debug, Clone)]
pub struct MixingaleConstruction {
    pub certificate: MixingaleCertificate,
    /// `(T_{n₀}^n)_n`, the filtration the certificate refers to.
    pub filtration: Filtration,
    /// `α_{T,k}` and `φ_{T,k}` for `k = 0..=K`.
    pub sequences: MixingSequences,
    /// Conditions (i) and (ii), followed by the `φ_{m+2}` form of (ii)
    /// (reported for `m ≥ 1`; it does not gate acceptance).
    pub reports: Vec<Report>,
}

/// From a NED certificate `(d, ξ)` for a bounded process with conditional
/// mean zero, builds
///
/// ```text
/// c_n = d_n ∨ ‖f_n‖_{T,∞},   φ_m = 2(ξ_k + min{2α_{T,k}, φ_{T,k}}),  k = ⌊m/2⌋
/// ```
///
/// for `m = 0..=2K+1` with `K = min(len(ξ)−1, n₁−n₀)`, makes `φ`
/// non-increasing by a running minimum, and verifies the result as an
/// `L^1` mixingale for `(T_{n₀}^n)_n` before returning it.
///
/// The process window must coincide with the family window.
pub fn mixingale_from_ned(
    f: &ProcessWindow,
    family: &FamilyOperators,
    cert: &NedCertificate,
    cap: usize,
) -> Result<MixingaleConstruction> {
    cert.validate()?;
    let t = family.base();
    if f.atom_count() != t.atom_count() {
        return Err(Error::SpaceMismatch);
    }
    if f.start() != family.start() || f.end() != family.end() || cert.d.len() != f.len() {
        return Err(Error::ShapeMismatch(
            "process, family and certificate must share one window".into(),
        ));
    }
    for (n, fn_) in f.iter() {
        let tol = tolerance::mean_zero_tol(fn_.max_abs());
        if t.apply(fn_).max_abs() > tol {
            return Err(Error::NonZeroConditionalMean(n));
        }
    }

    let k_max = (cert.xi.len() - 1).min(family.span());
    let sequences = mixing_sequences(family, k_max, cap)?;
    let c: Vec<LatticeVector> = f
        .vectors()
        .iter()
        .zip(&cert.d)
        .map(|(fn_, d)| d.sup(&norm_vec(fn_, t, NormKind::Inf)))
        .collect();
    let raw: Vec<LatticeVector> = (0..=2 * k_max + 1)
        .map(|m| {
            let k = m / 2;
            let mix = sequences.alpha[k].scale(2.0).inf(&sequences.phi[k]);
            (&cert.xi[k] + &mix).scale(2.0)
        })
        .collect();
    let certificate = MixingaleCertificate {
        p: NormKind::One,
        c,
        phi: running_min(&raw),
    };
    let filtration = family.lower_tail_filtration();
    let mut reports = verify_mixingale(f, &filtration, &certificate)?;
    if let Some(bad) = reports.iter().find(|r| !r.pass) {
        return Err(Error::CertificateRejected(format!(
            "{} failed with worst slack {:e}",
            bad.property, bad.worst_slack
        )));
    }

    // The proof bounds (ii) by c_n φ_{m+2} first; that step needs m ≥ 1.
    let mut tracker = SlackTracker::new("mixingale_ii_phi_m_plus_2");
    for ((n, fn_), c) in f.iter().zip(&certificate.c) {
        for m in 1..certificate.phi.len().saturating_sub(2) {
            let rest = fn_ - filtration.get(n + m as i64).apply(fn_);
            tracker.le(
                &norm_vec(&rest, t, NormKind::One),
                &(c * &certificate.phi[m + 2]),
                t.partition(),
                Location::nm(n, m),
            );
        }
    }
    reports.push(tracker.finish());

    Ok(MixingaleConstruction {
        certificate,
        filtration,
        sequences,
        reports,
    })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::family::generated_family;
    use crate::lattice::SampleSpace;
    use crate::operator::CondExpOperator;

    fn v(x: &[f64]) -> LatticeVector {
        LatticeVector::new(x.to_vec())
    }

    #[test]
    fn martingale_difference() {
        // f_1 = ε_1, f_2 = ε_2 with independent signs: T_{n-1} f_n = 0.
        let t = CondExpOperator::global(Arc::new(SampleSpace::uniform(4).unwrap()));
        let noise = ProcessWindow::new(1, vec![v(&[1.0, 1.0, -1.0, -1.0]), v(&[1.0, -1.0, 1.0, -1.0])]).unwrap();
        let fam = generated_family(&noise, &t).unwrap();
        let filt = fam.lower_tail_filtration();
        let cert = MixingaleCertificate {
            p: NormKind::One,
            c: vec![v(&[1.0; 4]); 2],
            phi: vec![v(&[1.0; 4]), v(&[0.0; 4]), v(&[0.0; 4])],
        };
        let reports = verify_mixingale(&noise, &filt, &cert).unwrap();
        assert!(reports.iter().all(|r| r.pass), "{reports:?}");

        let bad = MixingaleCertificate {
            phi: vec![v(&[0.5; 4]), v(&[0.0; 4]), v(&[0.0; 4])],
            ..cert
        };
        let reports = verify_mixingale(&noise, &filt, &bad).unwrap();
        assert!(!reports[0].pass);
        assert_eq!(reports[0].location.unwrap().m, Some(0));
    }

    #[test]
    fn from_ned_on_zero_process_and_guard() {
        let t = CondExpOperator::global(Arc::new(SampleSpace::uniform(4).unwrap()));
        let noise = ProcessWindow::new(1, vec![v(&[1.0, 1.0, -1.0, -1.0]), v(&[1.0, -1.0, 1.0, -1.0])]).unwrap();
        let fam = generated_family(&noise, &t).unwrap();
        let zero = ProcessWindow::zeros(1, 2, 4);
        let d = vec![v(&[0.3; 4]); 2];
        let cert = NedCertificate::new(NormKind::Two, d.clone(), vec![v(&[1.0; 4]), v(&[0.0; 4])]).unwrap();
        let out = mixingale_from_ned(&zero, &fam, &cert, 12).unwrap();
        assert_eq!(out.certificate.c, d);
        assert_eq!(out.certificate.phi.len(), 4);

        let shifted = zero.map(|_, x| x.map(|y| y + 1.0));
        assert_eq!(
            mixingale_from_ned(&shifted, &fam, &cert, 12).unwrap_err(),
            Error::NonZeroConditionalMean(1)
        );
    }
}
