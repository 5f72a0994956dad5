//! Near-epoch dependence: defects, certificates and their closure laws.
//!
//! `(f_n)` is near-epoch dependent in `L^p(T)` on a family `(T_i^j)` when
//!
//! ```text
//! ‖f_n − T_{n−m}^{n+m} f_n‖_{T,p} ≤ d_n ξ_m
//! ```
//!
//! with `d_n ≥ 0` and `ξ_m ∈ R(T)₊` tending to zero. A [`NedCertificate`]
//! carries `(d_n)` aligned with the process window and `(ξ_m)` for
//! `m = 0..xi.len()`; [`verify_ned`] checks every pair `(n, m)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::family::FamilyOperators;
use crate::lattice::LatticeVector;
use crate::norms::{norm, norm_vec, ConditionalNormValue, NormKind};
use crate::operator::CondExpOperator;
use crate::report::{Location, Report, SlackTracker};
use crate::window::ProcessWindow;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NedCertificate {
    pub p: NormKind,
    pub d: Vec<LatticeVector>,
    pub xi: Vec<LatticeVector>,
}

impl NedCertificate {
    pub fn new(p: NormKind, d: Vec<LatticeVector>, xi: Vec<LatticeVector>) -> Result<Self> {
        let cert = Self { p, d, xi };
        cert.validate()?;
        Ok(cert)
    }

    /// Nonempty, one atom count throughout, nonnegative.
    pub fn validate(&self) -> Result<()> {
        let (Some(first), false) = (self.d.first(), self.xi.is_empty()) else {
            return Err(Error::InvalidCertificate("d and xi must be nonempty".into()));
        };
        let atoms = first.len();
        for v in self.d.iter().chain(&self.xi) {
            v.check_len(atoms)?;
            if v.iter().any(|x| !x.is_finite()) {
                return Err(Error::NonFinite("certificate".into()));
            }
            if !v.is_nonnegative() {
                return Err(Error::InvalidCertificate("negative entry".into()));
            }
        }
        Ok(())
    }

    /// The same bounds read in a weaker norm: NED in `L^∞` implies NED in
    /// `L^2`, which implies NED in `L^1`.
    pub fn weaken(&self, p: NormKind) -> Result<Self> {
        if p > self.p {
            return Err(Error::InvalidCertificate(format!(
                "cannot strengthen an L^{} certificate to L^{p}",
                self.p
            )));
        }
        Ok(Self { p, ..self.clone() })
    }

    /// `ξ` made non-increasing by a running minimum.
    pub fn running_min_xi(&self) -> Vec<LatticeVector> {
        running_min(&self.xi)
    }

    /// Numeric stand-in for `ξ_m → 0`: the last `ξ` (after running min) has
    /// every component at most `threshold`.
    pub fn decay_report(&self, threshold: f64) -> Report {
        let mut tracker = SlackTracker::new("ned_xi_decay");
        let last = self.running_min_xi().pop().expect("xi is nonempty");
        tracker.le_scalar(last.max(), threshold, Location::nm(0, self.xi.len() - 1));
        tracker.finish()
    }
}

pub(crate) fn running_min(seq: &[LatticeVector]) -> Vec<LatticeVector> {
    let mut out: Vec<LatticeVector> = Vec::with_capacity(seq.len());
    for v in seq {
        let next = match out.last() {
            Some(prev) => prev.inf(v),
            None => v.clone(),
        };
        out.push(next);
    }
    out
}

/// `‖f_n − T_{n−m}^{n+m} f_n‖_{T,p}`, with the family member clamped to its
/// window.
pub fn ned_defect(
    f: &ProcessWindow,
    family: &FamilyOperators,
    n: i64,
    m: usize,
    p: NormKind,
) -> Result<ConditionalNormValue> {
    let fn_ = f.at(n)?;
    let op = family.get(n - m as i64, n + m as i64);
    let t = family.base();
    norm(&(fn_ - op.apply(fn_)), t, p)
}

fn defect_vec(f: &LatticeVector, family: &FamilyOperators, n: i64, m: usize, p: NormKind) -> LatticeVector {
    let op = family.get(n - m as i64, n + m as i64);
    norm_vec(&(f - op.apply(f)), family.base(), p)
}

fn check_shapes(f: &ProcessWindow, family: &FamilyOperators, cert: &NedCertificate) -> Result<()> {
    cert.validate()?;
    if f.atom_count() != family.base().atom_count() {
        return Err(Error::SpaceMismatch);
    }
    if cert.d.len() != f.len() {
        return Err(Error::ShapeMismatch(format!(
            "certificate has {} d-values for a window of {}",
            cert.d.len(),
            f.len()
        )));
    }
    if cert.d[0].len() != f.atom_count() {
        return Err(Error::SpaceMismatch);
    }
    let t = family.base();
    if let Some(m) = cert.xi.iter().position(|x| !t.in_range(x)) {
        return Err(Error::InvalidCertificate(format!(
            "xi_{m} is not constant on the blocks of T"
        )));
    }
    Ok(())
}

/// Checks `defect(n, m) ≤ d_n ξ_m` for every `n` in the window and every
/// `m` covered by the certificate. Records one row per `(n, m, T-block)`.
pub fn verify_ned(f: &ProcessWindow, family: &FamilyOperators, cert: &NedCertificate) -> Result<Report> {
    check_shapes(f, family, cert)?;
    let blocks = family.base().partition();
    let mut tracker = SlackTracker::new(format!("ned[p={}]", cert.p)).with_records();
    for ((n, fn_), d) in f.iter().zip(&cert.d) {
        for (m, xi) in cert.xi.iter().enumerate() {
            let lhs = defect_vec(fn_, family, n, m, cert.p);
            tracker.le(&lhs, &(d * xi), blocks, Location::nm(n, m));
        }
    }
    Ok(tracker.finish())
}

/// For `p = ∞`: the pointwise form `|f_n − T_{n−m}^{n+m} f_n| ≤ d_n ξ_m`.
pub fn verify_ned_pointwise(f: &ProcessWindow, family: &FamilyOperators, cert: &NedCertificate) -> Result<Report> {
    if cert.p != NormKind::Inf {
        return Err(Error::UnsupportedNorm("pointwise NED needs p = inf"));
    }
    check_shapes(f, family, cert)?;
    let blocks = family.base().partition();
    let mut tracker = SlackTracker::new("ned_pointwise");
    for ((n, fn_), d) in f.iter().zip(&cert.d) {
        for (m, xi) in cert.xi.iter().enumerate() {
            let op = family.get(n - m as i64, n + m as i64);
            let lhs = (fn_ - op.apply(fn_)).abs();
            tracker.le(&lhs, &(d * xi), blocks, Location::nm(n, m));
        }
    }
    Ok(tracker.finish())
}

fn same_window(a: &NedCertificate, b: &NedCertificate) -> Result<usize> {
    if a.d.len() != b.d.len() {
        return Err(Error::ShapeMismatch(format!(
            "certificates cover {} and {} indices",
            a.d.len(),
            b.d.len()
        )));
    }
    if a.d[0].len() != b.d[0].len() {
        return Err(Error::SpaceMismatch);
    }
    Ok(a.xi.len().min(b.xi.len()))
}

/// Certificate for `(f_n + g_n)`: `d = d^f ∨ d^g`, `ξ = ξ^f + ξ^g`, in
/// `L^r` with `r = min(p, q)`.
pub fn ned_sum_certificate(cert_f: &NedCertificate, cert_g: &NedCertificate) -> Result<NedCertificate> {
    cert_f.validate()?;
    cert_g.validate()?;
    let gaps = same_window(cert_f, cert_g)?;
    Ok(NedCertificate {
        p: cert_f.p.min(cert_g.p),
        d: cert_f.d.iter().zip(&cert_g.d).map(|(a, b)| a.sup(b)).collect(),
        xi: (0..gaps).map(|m| &cert_f.xi[m] + &cert_g.xi[m]).collect(),
    })
}

/// Which product theorem to apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProductMode {
    /// `f` NED in `L^p`, `p ∈ {1, ∞}`, and `g` NED in `L^∞` with bounded
    /// values: the product is NED in `L^p`.
    SupBounded,
    /// Both NED in `L^2`: the product is NED in `L^1`.
    TwoTwo,
}

/// Norms and bounds entering the product certificates. Which fields are
/// required depends on the mode:
///
/// * [`ProductMode::SupBounded`]: `f_norm = ‖f_n‖_{T,p}`, `r_g ∈ R(T)₊` with
///   `r_g ≥ d^g_n`, and `h ∈ R(T)₊` with `|g_n| ≤ h_n`;
/// * [`ProductMode::TwoTwo`]: `f_norm = ‖f_n‖_{T,2}` and `g_norm = ‖g_n‖_{T,2}`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ProductInputs {
    pub f_norm: Option<Vec<LatticeVector>>,
    pub g_norm: Option<Vec<LatticeVector>>,
    pub r_g: Option<Vec<LatticeVector>>,
    pub h: Option<Vec<LatticeVector>>,
}

impl ProductInputs {
    /// Computes every bound the mode needs from the processes themselves.
    pub fn from_processes(
        f: &ProcessWindow,
        g: &ProcessWindow,
        cert_f: &NedCertificate,
        cert_g: &NedCertificate,
        t: &CondExpOperator,
        mode: ProductMode,
    ) -> Result<Self> {
        let norms = |w: &ProcessWindow, p| -> Result<Vec<LatticeVector>> {
            w.vectors().iter().map(|v| Ok(norm(v, t, p)?.value)).collect()
        };
        Ok(match mode {
            ProductMode::SupBounded => Self {
                f_norm: Some(norms(f, cert_f.p)?),
                g_norm: None,
                r_g: Some(
                    cert_g
                        .d
                        .iter()
                        .map(|d| Ok(norm(d, t, NormKind::Inf)?.value))
                        .collect::<Result<_>>()?,
                ),
                h: Some(norms(g, NormKind::Inf)?),
            },
            ProductMode::TwoTwo => Self {
                f_norm: Some(norms(f, NormKind::Two)?),
                g_norm: Some(norms(g, NormKind::Two)?),
                r_g: None,
                h: None,
            },
        })
    }
}

fn required<'a>(v: &'a Option<Vec<LatticeVector>>, name: &'static str, len: usize) -> Result<&'a [LatticeVector]> {
    let v = v.as_deref().ok_or(Error::MissingBounds(name))?;
    if v.len() != len {
        return Err(Error::ShapeMismatch(format!("{name} has {} entries, expected {len}", v.len())));
    }
    Ok(v)
}

/// Certificate for `(f_n g_n)`.
///
/// * `SupBounded`: `d_n = r^g_n ‖f_n‖_{T,p} ∨ d^f_n h_n ∨ d^f_n r^g_n` in `L^p`;
/// * `TwoTwo`: `d_n = d^g_n ‖f_n‖_{T,2} ∨ d^f_n ‖g_n‖_{T,2} ∨ d^f_n d^g_n` in `L^1`;
///
/// and in both cases `ξ = ξ^f + ξ^g + ξ^f ξ^g`.
pub fn ned_product_certificate(
    cert_f: &NedCertificate,
    cert_g: &NedCertificate,
    inputs: &ProductInputs,
    mode: ProductMode,
) -> Result<NedCertificate> {
    cert_f.validate()?;
    cert_g.validate()?;
    let gaps = same_window(cert_f, cert_g)?;
    let len = cert_f.d.len();
    let xi = (0..gaps)
        .map(|m| {
            let (a, b) = (&cert_f.xi[m], &cert_g.xi[m]);
            &(a + b) + &(a * b)
        })
        .collect();
    let (p, d) = match mode {
        ProductMode::SupBounded => {
            if !matches!(cert_f.p, NormKind::One | NormKind::Inf) {
                return Err(Error::UnsupportedNorm("the sup-bounded product needs f in L^1 or L^inf"));
            }
            if cert_g.p != NormKind::Inf {
                return Err(Error::UnsupportedNorm("the sup-bounded product needs g in L^inf"));
            }
            let f_norm = required(&inputs.f_norm, "norm of f", len)?;
            let r_g = required(&inputs.r_g, "bound r^g on d^g", len)?;
            let h = required(&inputs.h, "bound h on |g|", len)?;
            for (r, dg) in r_g.iter().zip(&cert_g.d) {
                if !dg.le_within(r, crate::tolerance::tol(r.max_abs())) {
                    return Err(Error::InvalidCertificate("r^g does not dominate d^g".into()));
                }
            }
            let d = (0..len)
                .map(|n| {
                    let df = &cert_f.d[n];
                    (&r_g[n] * &f_norm[n]).sup(&(df * &h[n])).sup(&(df * &r_g[n]))
                })
                .collect();
            (cert_f.p, d)
        }
        ProductMode::TwoTwo => {
            if cert_f.p != NormKind::Two || cert_g.p != NormKind::Two {
                return Err(Error::UnsupportedNorm("the (2,2) product needs both factors in L^2"));
            }
            let f_norm = required(&inputs.f_norm, "L^2 norm of f", len)?;
            let g_norm = required(&inputs.g_norm, "L^2 norm of g", len)?;
            let d = (0..len)
                .map(|n| {
                    let (df, dg) = (&cert_f.d[n], &cert_g.d[n]);
                    (dg * &f_norm[n]).sup(&(df * &g_norm[n])).sup(&(df * dg))
                })
                .collect();
            (NormKind::One, d)
        }
    };
    Ok(NedCertificate { p, d, xi })
}

/// Certificate for the shifted process `(f_{n+s})` on `start..=end−s`.
///
/// For `k ≥ s` the two-sided bound gives
/// `‖f_{n+s} − T_{n−k}^{n+k} f_{n+s}‖ ≤ 2‖f_{n+s} − T_{n+s−(k−s)}^{n+s+(k−s)} f_{n+s}‖ ≤ 2 d_{n+s} ξ_{k−s}`.
/// For `k < s` the window `[n−k, n+k]` need not contain `n+s`, and the only
/// generally valid bound is `‖f − Sf‖ ≤ 2‖f‖`. The certificate therefore is
///
/// ```text
/// d'_n = 2 (d_{n+s} ∨ ‖f_{n+s}‖_{T,p}),   ξ'_k = e for k < s,  ξ_{k−s} for k ≥ s
/// ```
///
/// and for `s = 0` simply `d' = 2d`, `ξ' = ξ`. `f_norms[k]` is
/// `‖f_{start+k}‖_{T,p}`; it is only read when `s > 0`.
pub fn ned_shift_certificate(cert: &NedCertificate, f_norms: &[LatticeVector], shift: usize) -> Result<NedCertificate> {
    cert.validate()?;
    let len = cert.d.len();
    if shift >= len {
        return Err(Error::WindowOverflow {
            index: shift as i64,
            end: len as i64 - 1,
        });
    }
    if shift == 0 {
        return Ok(NedCertificate {
            p: cert.p,
            d: cert.d.iter().map(|d| d.scale(2.0)).collect(),
            xi: cert.xi.clone(),
        });
    }
    if f_norms.len() != len {
        return Err(Error::MissingBounds("norms of the process being shifted"));
    }
    let atoms = cert.d[0].len();
    let d = (0..len - shift)
        .map(|k| cert.d[k + shift].sup(&f_norms[k + shift]).scale(2.0))
        .collect();
    let xi = (0..cert.xi.len())
        .map(|k| {
            if k < shift {
                LatticeVector::constant(atoms, 1.0)
            } else {
                cert.xi[k - shift].clone()
            }
        })
        .collect();
    Ok(NedCertificate { p: cert.p, d, xi })
}

/// `‖f − Vf‖_{T,p} ≤ 2‖f − Uf‖_{T,p}` when `R(U) ⊆ R(V)`.
pub fn verify_two_sided_projection_bound(
    f: &LatticeVector,
    u: &CondExpOperator,
    v: &CondExpOperator,
    t: &CondExpOperator,
    p: NormKind,
) -> Result<Report> {
    f.check_len(t.atom_count())?;
    u.ensure_same_space(t)?;
    v.ensure_same_space(t)?;
    if !u.partition().refines(t.partition()) || !v.partition().refines(t.partition()) {
        return Err(Error::IncompatibleOperators);
    }
    if !v.partition().refines(u.partition()) {
        return Err(Error::RangeNotNested);
    }
    let lhs = norm_vec(&(f - v.apply(f)), t, p);
    let rhs = norm_vec(&(f - u.apply(f)), t, p).scale(2.0);
    let mut tracker = SlackTracker::new(format!("two_sided_projection_bound[p={p}]"));
    tracker.le(&lhs, &rhs, t.partition(), Location::none());
    Ok(tracker.finish())
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::family::generated_family;
    use crate::lattice::SampleSpace;

    fn v(x: &[f64]) -> LatticeVector {
        LatticeVector::new(x.to_vec())
    }

    fn global(n: usize) -> CondExpOperator {
        CondExpOperator::global(Arc::new(SampleSpace::uniform(n).unwrap()))
    }

    #[test]
    fn generator_has_zero_defect() {
        let t = global(4);
        let noise = ProcessWindow::new(1, vec![v(&[1.0, 1.0, -1.0, -1.0]), v(&[1.0, -1.0, 1.0, -1.0])]).unwrap();
        let fam = generated_family(&noise, &t).unwrap();
        for n in 1..=2 {
            for m in 0..3 {
                let d = ned_defect(&noise, &fam, n, m, NormKind::Two).unwrap().value;
                assert_eq!(d.max_abs(), 0.0);
            }
        }
        assert_eq!(ned_defect(&noise, &fam, 3, 0, NormKind::One), Err(Error::IndexOutOfWindow(3)));
    }

    #[test]
    fn sum_of_equal_certificates() {
        let c = NedCertificate::new(NormKind::Two, vec![v(&[1.0, 2.0])], vec![v(&[0.5, 0.5]), v(&[0.25, 0.25])]).unwrap();
        let s = ned_sum_certificate(&c, &c).unwrap();
        assert_eq!(s.d, c.d);
        assert_eq!(s.xi, vec![v(&[1.0, 1.0]), v(&[0.5, 0.5])]);
        let inf = NedCertificate { p: NormKind::Inf, ..c.clone() };
        assert_eq!(ned_sum_certificate(&c, &inf).unwrap().p, NormKind::Two);
    }

    #[test]
    fn product_needs_bounds() {
        let c = NedCertificate::new(NormKind::Two, vec![v(&[1.0])], vec![v(&[0.5])]).unwrap();
        assert_eq!(
            ned_product_certificate(&c, &c, &ProductInputs::default(), ProductMode::TwoTwo),
            Err(Error::MissingBounds("L^2 norm of f"))
        );
        assert!(matches!(
            ned_product_certificate(&c, &c, &ProductInputs::default(), ProductMode::SupBounded),
            Err(Error::UnsupportedNorm(_))
        ));
    }

    #[test]
    fn product_with_unit_reduces_to_f() {
        let cf = NedCertificate::new(NormKind::One, vec![v(&[2.0, 3.0])], vec![v(&[0.5, 0.5]), v(&[0.1, 0.1])]).unwrap();
        let cg = NedCertificate::new(NormKind::Inf, vec![v(&[0.0, 0.0])], vec![v(&[0.0, 0.0]); 2]).unwrap();
        let inputs = ProductInputs {
            f_norm: Some(vec![v(&[2.5, 2.5])]),
            r_g: Some(vec![v(&[0.0, 0.0])]),
            h: Some(vec![v(&[1.0, 1.0])]),
            ..ProductInputs::default()
        };
        let c = ned_product_certificate(&cf, &cg, &inputs, ProductMode::SupBounded).unwrap();
        assert_eq!(c.d, cf.d);
        assert_eq!(c.xi, cf.xi);
        assert_eq!(c.p, NormKind::One);
    }

    #[test]
    fn zero_shift_doubles() {
        let c = NedCertificate::new(NormKind::Two, vec![v(&[1.0]), v(&[2.0])], vec![v(&[0.5])]).unwrap();
        let s = ned_shift_certificate(&c, &[], 0).unwrap();
        assert_eq!(s.d, vec![v(&[2.0]), v(&[4.0])]);
        assert_eq!(s.xi, c.xi);
        assert!(matches!(ned_shift_certificate(&c, &[], 2), Err(Error::WindowOverflow { .. })));
    }

    #[test]
    fn two_sided_example() {
        let t = global(2);
        let id = CondExpOperator::identity(t.space().clone());
        let r = verify_two_sided_projection_bound(&v(&[1.0, -1.0]), &t, &id, &t, NormKind::One).unwrap();
        assert!(r.pass);
        assert_eq!(r.worst_slack, 2.0);
        assert_eq!(
            verify_two_sided_projection_bound(&v(&[1.0, -1.0]), &id, &t, &t, NormKind::One).unwrap_err(),
            Error::RangeNotNested
        );
    }

    #[test]
    fn halved_certificate_fails_with_location() {
        let t = global(4);
        let noise = ProcessWindow::new(1, vec![v(&[1.0, 1.0, -1.0, -1.0]), v(&[1.0, -1.0, 1.0, -1.0])]).unwrap();
        let fam = generated_family(&noise, &t).unwrap();
        // f_n = ε_1 + ε_2 for both n has defect 1 at (n=1, m=0)
        let sum = &noise.vectors()[0] + &noise.vectors()[1];
        let f = ProcessWindow::new(1, vec![sum.clone(), sum]).unwrap();
        let good = NedCertificate::new(NormKind::Inf, vec![v(&[1.0; 4]); 2], vec![v(&[2.0; 4]), v(&[0.0; 4])]).unwrap();
        assert!(verify_ned(&f, &fam, &good).unwrap().pass);
        let bad = NedCertificate { xi: vec![v(&[0.5; 4]), v(&[0.0; 4])], ..good };
        let r = verify_ned(&f, &fam, &bad).unwrap();
        assert!(!r.pass);
        assert_eq!(r.location.unwrap().n, Some(1));
        assert_eq!(r.location.unwrap().m, Some(0));
    }
}
