//! Error type shared by every operation in the crate.

use thiserror::Error;

/// Everything that can go wrong while validating inputs or running a check.
///
/// Semantic hypothesis failures (a non-unital map handed to a theorem that
/// wants a unital one, a function missing a convexity flag, …) are *not*
/// errors: they downgrade the verdict to exploratory inside the report.
/// Errors are reserved for inputs that cannot be processed at all.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian: max |M - M*| entry {deviation:.3e} exceeds tolerance {tol:.3e}")]
    NotHermitian { deviation: f64, tol: f64 },

    #[error("eigensolver failed to converge: {detail}")]
    ConvergenceFailure { detail: String },

    #[error("eigenvalue {eigenvalue} lies outside the function domain ({lo}, {hi})")]
    SpectrumOutsideDomain { eigenvalue: f64, lo: f64, hi: f64 },

    #[error("dimension mismatch: expected {expected}, found {found} ({context})")]
    DimensionMismatch {
        expected: usize,
        found: usize,
        context: String,
    },

    #[error("matrices {i} and {j} do not commute: commutator norm {norm:.3e} exceeds tolerance {tol:.3e}")]
    NotCommuting {
        i: usize,
        j: usize,
        norm: f64,
        tol: f64,
    },

    #[error("could not resolve a degenerate joint eigenspace (block of size {block_size} spanning columns {block_start}..{block_end})")]
    DegeneracyUnresolved {
        block_start: usize,
        block_end: usize,
        block_size: usize,
    },

    #[error("precondition failed: {detail}")]
    PreconditionFailed { detail: String },

    #[error("unknown function name {name:?}")]
    UnknownName { name: String },

    #[error("bad parameter: {detail}")]
    BadParameter { detail: String },

    #[error("function {label:?} does not carry a convexity claim")]
    NotConvexClaim { label: String },

    #[error("cannot sample spectra inside the function domain: {detail}")]
    BadDomain { detail: String },

    #[error("matrix family is not a density: {detail}")]
    NotDensity { detail: String },

    #[error("matrix is numerically singular (min singular value {min_singular:.3e})")]
    Singular { min_singular: f64 },

    #[error("bad exponents: {detail}")]
    BadExponents { detail: String },

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPSD { min_eigenvalue: f64 },

    #[error("hypothesis unmet: {detail}")]
    HypothesisUnmet { detail: String },

    #[error("domain mismatch: {detail}")]
    DomainMismatch { detail: String },

    #[error("map is not unital (unit defect {defect:.3e})")]
    NotUnital { defect: f64 },

    #[error("parse error: {detail}")]
    ParseError { detail: String },

    #[error("unknown theorem id {name:?}")]
    UnknownTheorem { name: String },

    #[error("unknown reproduction name {name:?}")]
    UnknownRepro { name: String },
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::ParseError {
            detail: e.to_string(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
