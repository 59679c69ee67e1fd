//! Canned reference computations: small, fully pinned instances whose exact
//! matrices and margins are known in closed form, exposed under stable names
//! so the outputs can be compared digit-for-digit across builds.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::functions::builtin_fn;
use crate::hermitian::{eigh, func_calc, HermitianMatrix};
use crate::maps::{apply, PositiveMapSpec};
use crate::preorders::{default_tol, spectral_leq, weak_majorization_leq, PreorderVerdict};
use crate::C64;

/// Eigenvalues at or above this threshold count toward the rank comparison.
pub const RANK_THRESHOLD: f64 = 0.5;

/// The reproductions this build knows by name.
pub const REPRO_NAMES: [&str; 1] = ["aujla-silva"];

/// Outcome of a named reference computation: both sides of the block-average
/// comparison, their spectra, the rank comparison at [`RANK_THRESHOLD`], and
/// the verdicts in the spectral preorder and in weak majorization.
#[derive(Clone, Debug)]
pub struct ReproReport {
    pub name: String,
    /// The 4x4 input matrix `A`.
    pub input: HermitianMatrix,
    /// `|phi(A)|` where `phi` averages the diagonal blocks.
    pub function_of_mapped: HermitianMatrix,
    /// `phi(|A|)`.
    pub mapped_function: HermitianMatrix,
    /// Spectrum of `|phi(A)|`, descending.
    pub function_of_mapped_eigenvalues: Vec<f64>,
    /// Spectrum of `phi(|A|)`, descending.
    pub mapped_function_eigenvalues: Vec<f64>,
    /// Rank of the spectral projection of `|phi(A)|` above the threshold.
    pub rank_function_of_mapped: usize,
    /// Rank of the spectral projection of `phi(|A|)` above the threshold.
    pub rank_mapped_function: usize,
    /// `spectral_leq(|phi(A)|, phi(|A|))` — fails for this instance.
    pub spectral: PreorderVerdict,
    /// `weak_majorization_leq(|phi(A)|, phi(|A|))` — holds.
    pub weak_majorization: PreorderVerdict,
}

/// The 4x4 Hermitian matrix with upper-left block `diag(-2, 0)` and all
/// remaining block entries equal to one. Averaging its diagonal blocks and
/// taking absolute values in either order produces a pair ordered by weak
/// majorization but not by the spectral preorder.
fn block_counterexample() -> HermitianMatrix {
    let mut m = DMatrix::<C64>::zeros(4, 4);
    m[(0, 0)] = C64::new(-2.0, 0.0);
    for i in 2..4 {
        for j in 2..4 {
            m[(i, j)] = C64::new(1.0, 0.0);
        }
    }
    HermitianMatrix::new(&m).expect("the fixed input is Hermitian")
}

fn rank_above(eigenvalues: &[f64], threshold: f64) -> usize {
    eigenvalues.iter().filter(|&&l| l > threshold).count()
}

/// Run the named reference computation.
pub fn run_repro(name: &str) -> Result<ReproReport> {
    if name != "aujla-silva" {
        return Err(Error::UnknownRepro {
            name: name.to_string(),
        });
    }

    let f = builtin_fn("abs", &[])?;
    let phi = PositiveMapSpec::BlockAverage;
    let input = block_counterexample();

    let function_of_mapped = func_calc(&f, &apply(&phi, &input)?)?;
    let mapped_function = apply(&phi, &func_calc(&f, &input)?)?;

    let function_of_mapped_eigenvalues = eigh(&function_of_mapped)?.eigenvalues;
    let mapped_function_eigenvalues = eigh(&mapped_function)?.eigenvalues;

    let tol = default_tol(&function_of_mapped, &mapped_function);
    let spectral = spectral_leq(&function_of_mapped, &mapped_function, tol)?;
    let weak_majorization = weak_majorization_leq(&function_of_mapped, &mapped_function, tol)?;

    Ok(ReproReport {
        name: name.to_string(),
        input,
        rank_function_of_mapped: rank_above(&function_of_mapped_eigenvalues, RANK_THRESHOLD),
        rank_mapped_function: rank_above(&mapped_function_eigenvalues, RANK_THRESHOLD),
        function_of_mapped,
        mapped_function,
        function_of_mapped_eigenvalues,
        mapped_function_eigenvalues,
        spectral,
        weak_majorization,
    })
}
