//! Hermitian matrices, their eigendecompositions, and functional calculus.
//!
//! [`HermitianMatrix`] is the validated, exactly-symmetrized carrier for every
//! self-adjoint value in the crate. [`eigh`] produces a
//! [`SpectralDecomposition`] with eigenvalues sorted non-increasing, and
//! [`func_calc`] applies a scalar function to a matrix through that
//! decomposition.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::functions::ScalarFunction;
use crate::tol;
use crate::C64;

/// A validated Hermitian (self-adjoint) complex matrix.
///
/// The stored entries satisfy `m[i][j] == conj(m[j][i])` exactly: every
/// constructor symmetrizes through `(M + M*)/2`, which is an exact fixed
/// point in IEEE arithmetic.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianMatrix {
    mat: DMatrix<C64>,
}

/// Validate a raw complex matrix as Hermitian and return its exactly
/// symmetrized form `(M + M*)/2`.
///
/// Fails with [`Error::NotSquare`] for rectangular input and
/// [`Error::NotHermitian`] when any entry of `M - M*` exceeds `tau_h` in
/// magnitude (the largest deviation is reported).
pub fn make_hermitian(raw: &DMatrix<C64>, tau_h: f64) -> Result<HermitianMatrix> {
    if raw.nrows() != raw.ncols() {
        return Err(Error::NotSquare {
            rows: raw.nrows(),
            cols: raw.ncols(),
        });
    }
    let mut deviation = 0.0f64;
    for i in 0..raw.nrows() {
        for j in 0..raw.ncols() {
            let d = (raw[(i, j)] - raw[(j, i)].conj()).norm();
            deviation = deviation.max(d);
        }
    }
    if deviation > tau_h {
        return Err(Error::NotHermitian {
            deviation,
            tol: tau_h,
        });
    }
    Ok(HermitianMatrix::symmetrize(raw))
}

impl HermitianMatrix {
    /// Symmetrize without validation; used internally where the input is
    /// Hermitian by construction up to rounding.
    pub(crate) fn symmetrize(raw: &DMatrix<C64>) -> Self {
        let sym = (raw + raw.adjoint()).scale(0.5);
        HermitianMatrix { mat: sym }
    }

    /// Validate with the default, scale-aware hermiticity tolerance.
    pub fn new(raw: &DMatrix<C64>) -> Result<Self> {
        let max_abs = raw.iter().map(|z| z.norm()).fold(0.0, f64::max);
        make_hermitian(raw, tol::hermiticity(max_abs))
    }

    pub fn identity(dim: usize) -> Self {
        HermitianMatrix {
            mat: DMatrix::identity(dim, dim),
        }
    }

    pub fn zeros(dim: usize) -> Self {
        HermitianMatrix {
            mat: DMatrix::zeros(dim, dim),
        }
    }

    /// Diagonal matrix with the given real diagonal.
    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        HermitianMatrix {
            mat: DMatrix::from_fn(n, n, |i, j| {
                if i == j {
                    C64::new(diag[i], 0.0)
                } else {
                    C64::new(0.0, 0.0)
                }
            }),
        }
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.mat
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.mat
    }

    /// Real trace (the imaginary part is exactly zero by symmetrization).
    pub fn trace(&self) -> f64 {
        self.mat.trace().re
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.mat.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Operator (spectral) norm: the largest eigenvalue magnitude.
    pub fn op_norm(&self) -> f64 {
        match eigh(self) {
            Ok(d) => d
                .eigenvalues
                .iter()
                .map(|l| l.abs())
                .fold(0.0, f64::max),
            // Unreachable in practice; fall back to a norm that bounds it.
            Err(_) => self.mat.norm(),
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        HermitianMatrix {
            mat: self.mat.scale(s),
        }
    }

    /// `self + other`; panics on dimension mismatch (internal arithmetic —
    /// public operations validate dimensions before arriving here).
    pub fn add(&self, other: &Self) -> Self {
        HermitianMatrix {
            mat: &self.mat + &other.mat,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        HermitianMatrix {
            mat: &self.mat - &other.mat,
        }
    }

    /// Conjugation `U self U*`, re-symmetrized to absorb rounding.
    pub fn conjugate_by(&self, u: &DMatrix<C64>) -> Self {
        HermitianMatrix::symmetrize(&(u * &self.mat * u.adjoint()))
    }

    /// Smallest eigenvalue.
    pub fn min_eigenvalue(&self) -> Result<f64> {
        let d = eigh(self)?;
        Ok(*d.eigenvalues.last().expect("dim >= 1"))
    }

    pub fn eigh(&self) -> Result<SpectralDecomposition> {
        eigh(self)
    }
}

/// Eigendecomposition of a Hermitian matrix: real eigenvalues in
/// non-increasing order, paired with orthonormal eigenvector columns.
#[derive(Clone, Debug)]
pub struct SpectralDecomposition {
    /// `eigenvalues[0] >= eigenvalues[1] >= ...`
    pub eigenvalues: Vec<f64>,
    /// Column `i` is a unit eigenvector for `eigenvalues[i]`.
    pub eigenvectors: DMatrix<C64>,
}

impl SpectralDecomposition {
    /// Rebuild `V diag(values) V*` for arbitrary replacement values on the
    /// same eigenbasis; the result is exactly symmetrized.
    pub fn rebuild_with(&self, values: &[f64]) -> HermitianMatrix {
        let n = self.eigenvalues.len();
        assert_eq!(values.len(), n);
        let diag = DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                C64::new(values[i], 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        let m = &self.eigenvectors * diag * self.eigenvectors.adjoint();
        HermitianMatrix::symmetrize(&m)
    }

    /// `V diag(l) V*` with the original eigenvalues.
    pub fn reconstruct(&self) -> HermitianMatrix {
        self.rebuild_with(&self.eigenvalues)
    }
}

/// Eigendecompose a Hermitian matrix.
///
/// Deterministic for identical input bits; eigenvalues come back sorted
/// non-increasing with the eigenvector columns permuted to match.
pub fn eigh(a: &HermitianMatrix) -> Result<SpectralDecomposition> {
    let n = a.dim();
    let se = a.matrix().clone().symmetric_eigen();
    let raw: Vec<f64> = se.eigenvalues.iter().copied().collect();
    if raw.iter().any(|l| !l.is_finite()) {
        return Err(Error::ConvergenceFailure {
            detail: format!("non-finite eigenvalue for a {n}x{n} matrix"),
        });
    }
    // Stable sort by descending eigenvalue keeps tied columns in solver
    // order, which keeps the whole decomposition deterministic.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| raw[j].partial_cmp(&raw[i]).expect("finite eigenvalues"));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| raw[i]).collect();
    let mut eigenvectors = DMatrix::<C64>::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        eigenvectors.set_column(dst, &se.eigenvectors.column(src));
    }
    Ok(SpectralDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

/// Apply a scalar function to a Hermitian matrix through its
/// eigendecomposition: `V diag(f(l_1),...,f(l_n)) V*`.
///
/// Every eigenvalue must lie in `f`'s domain interval within
/// [`tol::DOMAIN_MEMBERSHIP`], and `f` must evaluate to a finite value there.
pub fn func_calc(f: &ScalarFunction, a: &HermitianMatrix) -> Result<HermitianMatrix> {
    if f.arity() != 1 {
        return Err(Error::BadParameter {
            detail: format!(
                "func_calc needs an arity-1 function, got arity {} ({})",
                f.arity(),
                f.label()
            ),
        });
    }
    let dec = eigh(a)?;
    let interval = f.interval();
    let mut values = Vec::with_capacity(dec.eigenvalues.len());
    for &l in &dec.eigenvalues {
        if !interval.contains(l, tol::DOMAIN_MEMBERSHIP) {
            return Err(Error::SpectrumOutsideDomain {
                eigenvalue: l,
                lo: interval.lo,
                hi: interval.hi,
            });
        }
        let y = f.eval1(l);
        if !y.is_finite() {
            return Err(Error::SpectrumOutsideDomain {
                eigenvalue: l,
                lo: interval.lo,
                hi: interval.hi,
            });
        }
        values.push(y);
    }
    Ok(dec.rebuild_with(&values))
}

/// Real power of a positive semidefinite matrix.
///
/// Eigenvalues are clamped at zero before the power, absorbing the sign
/// noise that spectra of nominally PSD matrices pick up from rounding; an
/// eigenvalue below `-tau_R * (1 + |l|_max)` is a genuine negativity and
/// fails with [`Error::NotPSD`]. Negative exponents additionally require a
/// strictly positive spectrum ([`Error::Singular`] otherwise).
pub fn psd_power(a: &HermitianMatrix, r: f64) -> Result<HermitianMatrix> {
    if !r.is_finite() {
        return Err(Error::BadParameter {
            detail: format!("psd_power exponent must be finite, got {r}"),
        });
    }
    let dec = eigh(a)?;
    let scale = 1.0 + dec.eigenvalues.first().map(|l| l.abs()).unwrap_or(0.0);
    let floor = -tol::reconstruction(a.dim()) * scale;
    let mut values = Vec::with_capacity(dec.eigenvalues.len());
    for &l in &dec.eigenvalues {
        if l < floor {
            return Err(Error::NotPSD { min_eigenvalue: l });
        }
        let clamped = l.max(0.0);
        if r < 0.0 && clamped == 0.0 {
            return Err(Error::Singular { min_singular: 0.0 });
        }
        values.push(clamped.powf(r));
    }
    Ok(dec.rebuild_with(&values))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn dmatrix_from_rows(n: usize, rows: &[C64]) -> DMatrix<C64> {
        DMatrix::from_row_slice(n, n, rows)
    }

    #[test]
    fn make_hermitian_keeps_a_real_diagonal_matrix() {
        let raw = dmatrix_from_rows(2, &[c(2.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(3.0, 0.0)]);
        let h = make_hermitian(&raw, 1e-12).unwrap();
        assert_eq!(h.matrix(), &raw);
    }

    #[test]
    fn make_hermitian_keeps_a_complex_hermitian_matrix() {
        let raw = dmatrix_from_rows(2, &[c(0.0, 0.0), c(0.0, 1.0), c(0.0, -1.0), c(0.0, 0.0)]);
        let h = make_hermitian(&raw, 1e-12).unwrap();
        assert_eq!(h.matrix(), &raw);
    }

    #[test]
    fn make_hermitian_rejects_strictly_upper_triangular() {
        let raw = dmatrix_from_rows(2, &[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        match make_hermitian(&raw, 1e-12) {
            Err(Error::NotHermitian { deviation, .. }) => {
                assert!((deviation - 1.0).abs() < 1e-15);
            }
            other => panic!("expected NotHermitian, got {other:?}"),
        }
    }

    #[test]
    fn make_hermitian_rejects_rectangular_input() {
        let raw = DMatrix::<C64>::zeros(2, 3);
        assert!(matches!(
            make_hermitian(&raw, 1e-12),
            Err(Error::NotSquare { rows: 2, cols: 3 })
        ));
    }

    #[test]
    fn eigh_sorts_a_diagonal_matrix_non_increasing() {
        let a = HermitianMatrix::from_real_diagonal(&[1.0, 2.0]);
        let d = eigh(&a).unwrap();
        assert_eq!(d.eigenvalues, vec![2.0, 1.0]);
        // Columns are permuted identity columns.
        let recon = d.reconstruct();
        assert!((recon.matrix() - a.matrix()).norm() < 1e-14);
    }

    #[test]
    fn eigh_of_symmetric_off_diagonal_gives_plus_minus_one() {
        let a = HermitianMatrix::new(&dmatrix_from_rows(
            2,
            &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
        ))
        .unwrap();
        let d = eigh(&a).unwrap();
        assert!((d.eigenvalues[0] - 1.0).abs() < 1e-14);
        assert!((d.eigenvalues[1] + 1.0).abs() < 1e-14);
    }

    #[test]
    fn eigh_of_scaled_identity_repeats_the_scale() {
        let s = 1.0 / 2.0_f64.sqrt();
        let a = HermitianMatrix::identity(2).scale(s);
        let d = eigh(&a).unwrap();
        assert!((d.eigenvalues[0] - s).abs() < 1e-15);
        assert!((d.eigenvalues[1] - s).abs() < 1e-15);
    }

    #[test]
    fn eigh_is_deterministic_for_identical_input_bits() {
        let raw = dmatrix_from_rows(
            3,
            &[
                c(1.0, 0.0),
                c(0.5, 0.25),
                c(0.0, -1.0),
                c(0.5, -0.25),
                c(-2.0, 0.0),
                c(0.75, 0.0),
                c(0.0, 1.0),
                c(0.75, 0.0),
                c(0.5, 0.0),
            ],
        );
        let a = HermitianMatrix::new(&raw).unwrap();
        let d1 = eigh(&a).unwrap();
        let d2 = eigh(&a).unwrap();
        assert_eq!(d1.eigenvalues, d2.eigenvalues);
        assert_eq!(d1.eigenvectors, d2.eigenvectors);
    }

    #[test]
    fn func_calc_square_of_diagonal() {
        let f = functions::builtin_fn("shifted_square", &[("c", 0.0)]).unwrap();
        let a = HermitianMatrix::from_real_diagonal(&[1.0, 2.0]);
        let r = func_calc(&f, &a).unwrap();
        let expect = HermitianMatrix::from_real_diagonal(&[1.0, 4.0]);
        assert!((r.matrix() - expect.matrix()).norm() < 1e-13);
    }

    #[test]
    fn func_calc_abs_of_symmetric_flip_is_identity() {
        let f = functions::builtin_fn("abs", &[]).unwrap();
        let a = HermitianMatrix::new(&dmatrix_from_rows(
            2,
            &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
        ))
        .unwrap();
        let r = func_calc(&f, &a).unwrap();
        assert!((r.matrix() - DMatrix::<C64>::identity(2, 2)).norm() < 1e-13);
    }

    #[test]
    fn func_calc_abs_of_block_matrix_takes_blockwise_abs() {
        // diag(-2, 0) + all-ones 2x2 block; |.| maps the first block to
        // diag(2, 0) and fixes the PSD second block.
        let mut raw = DMatrix::<C64>::zeros(4, 4);
        raw[(0, 0)] = c(-2.0, 0.0);
        for i in 2..4 {
            for j in 2..4 {
                raw[(i, j)] = c(1.0, 0.0);
            }
        }
        let a = HermitianMatrix::new(&raw).unwrap();
        let f = functions::builtin_fn("abs", &[]).unwrap();
        let r = func_calc(&f, &a).unwrap();
        let mut expect = DMatrix::<C64>::zeros(4, 4);
        expect[(0, 0)] = c(2.0, 0.0);
        for i in 2..4 {
            for j in 2..4 {
                expect[(i, j)] = c(1.0, 0.0);
            }
        }
        assert!((r.matrix() - expect).norm() < 1e-12);
    }

    #[test]
    fn psd_power_inverse_square_root_whitens() {
        let raw = dmatrix_from_rows(2, &[c(2.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(2.0, 0.0)]);
        let a = HermitianMatrix::new(&raw).unwrap();
        let w = psd_power(&a, -0.5).unwrap();
        let product = w.matrix() * a.matrix() * w.matrix();
        assert!((product - DMatrix::<C64>::identity(2, 2)).norm() < 1e-12);
    }

    #[test]
    fn psd_power_clamps_rounding_level_negativity() {
        let a = HermitianMatrix::from_real_diagonal(&[1.0, -1e-13]);
        let r = psd_power(&a, 0.5).unwrap();
        assert!((r.matrix()[(0, 0)].re - 1.0).abs() < 1e-12);
        assert_eq!(r.matrix()[(1, 1)].re, 0.0);
    }

    #[test]
    fn psd_power_rejects_genuinely_negative_spectrum() {
        let a = HermitianMatrix::from_real_diagonal(&[1.0, -0.5]);
        assert!(matches!(psd_power(&a, 0.5), Err(Error::NotPSD { .. })));
        let singular = HermitianMatrix::from_real_diagonal(&[1.0, 0.0]);
        assert!(matches!(
            psd_power(&singular, -1.0),
            Err(Error::Singular { .. })
        ));
    }

    #[test]
    fn func_calc_rejects_spectrum_outside_domain() {
        let f = functions::builtin_fn("log", &[]).unwrap();
        let a = HermitianMatrix::from_real_diagonal(&[1.0, -1.0]);
        assert!(matches!(
            func_calc(&f, &a),
            Err(Error::SpectrumOutsideDomain { .. })
        ));
    }
}
