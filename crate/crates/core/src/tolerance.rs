//! Numeric tolerance policy for identities and inequalities.

/// Relative slack granted to every comparison.
pub const REL_TOL: f64 = 1e-9;

/// Absolute tolerance for quantities whose magnitude is about `scale`:
/// `1e-9 · max(1, scale)`.
pub fn tol(scale: f64) -> f64 {
    REL_TOL * scale.abs().max(1.0)
}

/// Tolerance used for the conditional mean-zero hypothesis:
/// `|T f| ≤ 1e-9 · (1 + max |f|)`.
pub fn mean_zero_tol(max_abs: f64) -> f64 {
    REL_TOL * (1.0 + max_abs)
}
