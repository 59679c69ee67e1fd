//! Verification toolkit for Jensen-type operator inequalities.
//!
//! The crate checks concrete finite-dimensional instances of operator
//! inequalities of the form "phi of f(a) dominates f of phi(a)" — and their
//! trace, spectral, and majorization relatives — by explicit numerical
//! computation. Everything is built from four layers:
//!
//! * validated Hermitian matrices with a deterministic spectral calculus
//!   ([`hermitian`]), plus commuting tuples with a joint calculus ([`tuple`]);
//! * concrete positive-map families ([`maps`]) and scalar function
//!   descriptors with convexity metadata ([`functions`], [`convexity`]);
//! * comparisons under the Loewner, spectral, and weak-majorization
//!   preorders, each reporting margins and counterexample witnesses
//!   ([`preorders`]);
//! * inequality checkers for the individual theorems ([`inequalities`]) and
//!   seeded randomized campaigns over them ([`campaign`]).
//!
//! All randomness flows through explicitly seeded ChaCha streams
//! ([`sample`]), so every verdict in a report can be reproduced from its
//! recorded seed.

pub mod campaign;
pub mod convexity;
pub mod error;
pub mod functions;
pub mod hermitian;
pub mod inequalities;
pub mod json;
pub mod maps;
pub mod preorders;
pub mod repro;
pub mod sample;
pub mod tol;
pub mod tuple;

/// Complex scalar type used throughout.
pub type C64 = num_complex::Complex<f64>;

pub use error::{Error, Result};
pub use functions::{builtin, power, Interval, OperatorConvexMeasure, ScalarFunction};
pub use hermitian::{eigh, func_calc, make_hermitian, HermitianMatrix, SpectralDecomposition};
pub use maps::{apply, classify, compose_with_state, PositiveMapSpec};
pub use preorders::{
    conjugating_unitary, loewner_leq, majorization_leq, spectral_leq, spectral_scale, trace_probe,
    weak_majorization_leq, PreorderVerdict, Witness,
};
pub use tuple::{joint_eig, joint_func_calc, make_commuting_tuple, CommutingTuple};
