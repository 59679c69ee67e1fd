//! Centralized numerical tolerances.
//!
//! Double-precision Hermitian eigensolvers achieve roughly 1e-14 relative
//! backward error; every tolerance below leaves a few orders of magnitude of
//! headroom above that so legitimate inputs never trip validation, while
//! genuinely wrong inputs (asymmetric matrices, non-commuting tuples, …)
//! still fail loudly.

/// Hermiticity validation: max allowed entry of |M - M*|, scaled by the
/// largest entry magnitude so large matrices are not penalized.
pub fn hermiticity(max_abs_entry: f64) -> f64 {
    1e-10 * (1.0 + max_abs_entry)
}

/// Commutation validation for tuples, same scaling as [`hermiticity`].
pub fn commutation(max_abs_entry: f64) -> f64 {
    1e-10 * (1.0 + max_abs_entry)
}

/// Eigendecomposition reconstruction error (V diag(l) V* vs the source) and
/// related structural checks (orthonormality, PSD slack, unit defect).
pub fn reconstruction(dim: usize) -> f64 {
    1e-9 * dim as f64
}

/// Slack when testing whether an eigenvalue belongs to a function domain.
pub const DOMAIN_MEMBERSHIP: f64 = 1e-9;

/// Acceptance threshold for randomized matrix-convexity probes: a convex
/// combination defect whose minimum eigenvalue clears this margin counts as
/// satisfied. Large enough to absorb eigensolver noise on well-scaled
/// inputs, small enough that genuine convexity failures (which sit many
/// orders of magnitude below) are never excused.
pub const MATRIX_CONVEXITY: f64 = 1e-8;

/// Default verdict tolerance for order comparisons between `a` and `b`,
/// scale-aware so comparisons of large matrices do not produce false
/// negatives from accumulated rounding.
pub fn default_verdict(a_norm: f64, b_norm: f64) -> f64 {
    1e-8 * (1.0 + a_norm + b_norm)
}
