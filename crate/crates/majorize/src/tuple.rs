//! Commuting tuples of Hermitian matrices, their joint eigendecomposition,
//! and multivariable functional calculus on the joint spectrum.

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::functions::ScalarFunction;
use crate::hermitian::{eigh, HermitianMatrix};
use crate::tol;
use crate::C64;

/// A validated tuple of mutually commuting Hermitian matrices of equal
/// dimension.
#[derive(Clone, Debug)]
pub struct CommutingTuple {
    matrices: Vec<HermitianMatrix>,
    commutator_norm: f64,
}

impl CommutingTuple {
    pub fn len(&self) -> usize {
        self.matrices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrices.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.matrices[0].dim()
    }

    pub fn matrices(&self) -> &[HermitianMatrix] {
        &self.matrices
    }

    /// Largest pairwise commutator operator norm observed at validation.
    pub fn commutator_norm(&self) -> f64 {
        self.commutator_norm
    }
}

/// Operator norm of the commutator `[a, b] = ab - ba`. The commutator of
/// Hermitian matrices is anti-Hermitian, so `i[a, b]` is Hermitian and its
/// spectral norm is the commutator's operator norm.
pub fn commutator_norm(a: &HermitianMatrix, b: &HermitianMatrix) -> f64 {
    let c = a.matrix() * b.matrix() - b.matrix() * a.matrix();
    let ic = c.map(|z| z * C64::new(0.0, 1.0));
    HermitianMatrix::symmetrize(&ic).op_norm()
}

/// Validate a family of Hermitian matrices as mutually commuting within
/// `tau_c` (operator norm on each pairwise commutator).
pub fn make_commuting_tuple(
    matrices: Vec<HermitianMatrix>,
    tau_c: f64,
) -> Result<CommutingTuple> {
    if matrices.is_empty() {
        return Err(Error::BadParameter {
            detail: "a commuting tuple needs at least one matrix".to_string(),
        });
    }
    let dim = matrices[0].dim();
    for (i, m) in matrices.iter().enumerate() {
        if m.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: m.dim(),
                context: format!("tuple entry {i}"),
            });
        }
    }
    let mut worst = 0.0f64;
    let mut worst_pair = (0usize, 0usize);
    for i in 0..matrices.len() {
        for j in (i + 1)..matrices.len() {
            let norm = commutator_norm(&matrices[i], &matrices[j]);
            if norm > worst {
                worst = norm;
                worst_pair = (i, j);
            }
        }
    }
    if worst > tau_c {
        return Err(Error::NotCommuting {
            i: worst_pair.0,
            j: worst_pair.1,
            norm: worst,
            tol: tau_c,
        });
    }
    Ok(CommutingTuple {
        matrices,
        commutator_norm: worst,
    })
}

/// A common orthonormal eigenbasis for a commuting tuple together with the
/// simultaneous eigenvalue tuples carried by each basis column.
#[derive(Clone, Debug)]
pub struct JointDecomposition {
    /// Orthonormal columns; column `k` is a joint eigenvector.
    pub basis: DMatrix<C64>,
    /// `points[k][i]` is the eigenvalue of matrix `i` on basis column `k`.
    /// Points are sorted in descending lexicographic order, which reduces to
    /// the non-increasing eigenvalue convention when the tuple has length 1.
    pub points: Vec<Vec<f64>>,
}

/// Compute a joint eigendecomposition of a commuting tuple.
///
/// A single matrix is decomposed directly. Longer tuples eigendecompose a
/// random real linear combination (coefficients from a seeded generator, up
/// to 5 attempts on distinct seeds), then refine any degenerate eigenvalue
/// cluster recursively against the tuple members until every matrix is
/// diagonal in the common basis.
pub fn joint_eig(t: &CommutingTuple) -> Result<JointDecomposition> {
    let d = t.dim();
    let mats = t.matrices();
    let scales: Vec<f64> = mats.iter().map(|m| 1.0 + m.max_abs_entry()).collect();
    let off_tols: Vec<f64> = scales.iter().map(|s| tol::reconstruction(d) * s).collect();

    if mats.len() == 1 {
        let dec = eigh(&mats[0])?;
        let points = dec.eigenvalues.iter().map(|&l| vec![l]).collect();
        return Ok(JointDecomposition {
            basis: dec.eigenvectors,
            points,
        });
    }

    let mut last_failure = None;
    for attempt in 0u64..5 {
        let mut rng = ChaCha8Rng::seed_from_u64(attempt);
        let coeffs: Vec<f64> = (0..mats.len())
            .map(|_| StandardNormal.sample(&mut rng))
            .collect();
        let mut combo = mats[0].scale(coeffs[0]);
        for (c, m) in coeffs.iter().zip(mats.iter()).skip(1) {
            combo = combo.add(&m.scale(*c));
        }
        let dec = eigh(&combo)?;
        let mut basis = dec.eigenvectors.clone();
        let gap_tol = 1e-8 * (1.0 + combo.max_abs_entry());

        // Refine every degenerate eigenvalue cluster of the combination
        // against the tuple members.
        let mut start = 0usize;
        for k in 1..=d {
            let split = k == d || (dec.eigenvalues[k - 1] - dec.eigenvalues[k]) > gap_tol;
            if split {
                if k - start > 1 {
                    refine_block(&mut basis, start, k - start, mats, 0, &scales)?;
                }
                start = k;
            }
        }

        match validate_basis(&basis, mats, &off_tols) {
            Ok(()) => return Ok(build_decomposition(basis, mats, &off_tols)?),
            Err(e) => last_failure = Some(e),
        }
    }
    Err(last_failure.unwrap_or(Error::DegeneracyUnresolved {
        block_start: 0,
        block_end: d,
        block_size: d,
    }))
}

/// Rotate the columns `start..start+len` of `basis` so that
/// `mats[mat_idx..]` become diagonal on the spanned subspace, splitting on
/// eigenvalue gaps and recursing into sub-blocks.
fn refine_block(
    basis: &mut DMatrix<C64>,
    start: usize,
    len: usize,
    mats: &[HermitianMatrix],
    mat_idx: usize,
    scales: &[f64],
) -> Result<()> {
    if len <= 1 || mat_idx >= mats.len() {
        return Ok(());
    }
    let w = basis.columns(start, len).into_owned();
    let projected = w.adjoint() * mats[mat_idx].matrix() * &w;
    let dec = eigh(&HermitianMatrix::symmetrize(&projected))?;
    let gap_tol = 1e-8 * scales[mat_idx];
    let spread = dec.eigenvalues[0] - dec.eigenvalues[len - 1];
    if spread > gap_tol {
        let rotated = &w * &dec.eigenvectors;
        for (offset, col) in rotated.column_iter().enumerate() {
            basis.set_column(start + offset, &col);
        }
        let mut sub_start = 0usize;
        for k in 1..=len {
            let split = k == len || (dec.eigenvalues[k - 1] - dec.eigenvalues[k]) > gap_tol;
            if split {
                refine_block(basis, start + sub_start, k - sub_start, mats, mat_idx + 1, scales)?;
                sub_start = k;
            }
        }
        Ok(())
    } else {
        // This matrix is scalar on the block; move on to the next one.
        refine_block(basis, start, len, mats, mat_idx + 1, scales)
    }
}

/// Check that every tuple member is diagonal in the candidate basis.
fn validate_basis(
    basis: &DMatrix<C64>,
    mats: &[HermitianMatrix],
    off_tols: &[f64],
) -> Result<()> {
    for (m, &off_tol) in mats.iter().zip(off_tols.iter()) {
        let p = basis.adjoint() * m.matrix() * basis;
        let mut worst = 0.0f64;
        let mut worst_ij = (0usize, 0usize);
        for i in 0..p.nrows() {
            for j in 0..p.ncols() {
                if i != j {
                    let a = p[(i, j)].norm();
                    if a > worst {
                        worst = a;
                        worst_ij = (i.min(j), i.max(j));
                    }
                }
            }
        }
        if worst > off_tol {
            return Err(Error::DegeneracyUnresolved {
                block_start: worst_ij.0,
                block_end: worst_ij.1 + 1,
                block_size: worst_ij.1 - worst_ij.0 + 1,
            });
        }
    }
    Ok(())
}

/// Extract sorted joint-spectrum points from a validated basis.
fn build_decomposition(
    basis: DMatrix<C64>,
    mats: &[HermitianMatrix],
    off_tols: &[f64],
) -> Result<JointDecomposition> {
    let d = basis.nrows();
    let mut points: Vec<Vec<f64>> = vec![Vec::with_capacity(mats.len()); d];
    for (i, m) in mats.iter().enumerate() {
        let p = basis.adjoint() * m.matrix() * &basis;
        let spectrum = eigh(m)?.eigenvalues;
        for k in 0..d {
            let value = p[(k, k)].re;
            let close = spectrum.iter().any(|&l| (l - value).abs() <= off_tols[i]);
            if !close {
                return Err(Error::DegeneracyUnresolved {
                    block_start: k,
                    block_end: k + 1,
                    block_size: 1,
                });
            }
            points[k].push(value);
        }
    }
    // Sort points descending lexicographically, carrying basis columns along.
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| {
        for (x, y) in points[a].iter().zip(points[b].iter()) {
            match y.partial_cmp(x).expect("finite joint eigenvalues") {
                std::cmp::Ordering::Equal => continue,
                other => return other,
            }
        }
        std::cmp::Ordering::Equal
    });
    let sorted_points: Vec<Vec<f64>> = order.iter().map(|&k| points[k].clone()).collect();
    let mut sorted_basis = DMatrix::<C64>::zeros(d, d);
    for (dst, &src) in order.iter().enumerate() {
        sorted_basis.set_column(dst, &basis.column(src));
    }
    Ok(JointDecomposition {
        basis: sorted_basis,
        points: sorted_points,
    })
}

/// Multivariable functional calculus: evaluate `f` on every joint-spectrum
/// point and rebuild on the common eigenbasis.
pub fn joint_func_calc(f: &ScalarFunction, t: &CommutingTuple) -> Result<HermitianMatrix> {
    if f.arity() != t.len() {
        return Err(Error::BadParameter {
            detail: format!(
                "function arity {} does not match tuple length {}",
                f.arity(),
                t.len()
            ),
        });
    }
    let dec = joint_eig(t)?;
    let domain = f.domain();
    let mut values = Vec::with_capacity(dec.points.len());
    for point in &dec.points {
        for (coord, interval) in point.iter().zip(domain.iter()) {
            if !interval.contains(*coord, tol::DOMAIN_MEMBERSHIP) {
                return Err(Error::SpectrumOutsideDomain {
                    eigenvalue: *coord,
                    lo: interval.lo,
                    hi: interval.hi,
                });
            }
        }
        let y = f.eval(point);
        if !y.is_finite() {
            return Err(Error::SpectrumOutsideDomain {
                eigenvalue: point[0],
                lo: domain[0].lo,
                hi: domain[0].hi,
            });
        }
        values.push(y);
    }
    let d = dec.points.len();
    let diag = DMatrix::from_fn(d, d, |i, j| {
        if i == j {
            C64::new(values[i], 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    let m = &dec.basis * diag * dec.basis.adjoint();
    Ok(HermitianMatrix::symmetrize(&m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::{FunctionFlags, Interval};

    fn diag(values: &[f64]) -> HermitianMatrix {
        HermitianMatrix::from_real_diagonal(values)
    }

    fn flip() -> HermitianMatrix {
        let raw = DMatrix::from_row_slice(
            2,
            2,
            &[
                C64::new(0.0, 0.0),
                C64::new(1.0, 0.0),
                C64::new(1.0, 0.0),
                C64::new(0.0, 0.0),
            ],
        );
        HermitianMatrix::new(&raw).unwrap()
    }

    #[test]
    fn diagonal_matrices_commute() {
        let t = make_commuting_tuple(vec![diag(&[1.0, 2.0]), diag(&[3.0, 4.0])], 1e-10).unwrap();
        assert_eq!(t.len(), 2);
        assert!(t.commutator_norm() < 1e-14);
    }

    #[test]
    fn identity_commutes_with_anything() {
        let t = make_commuting_tuple(vec![HermitianMatrix::identity(2), flip()], 1e-10).unwrap();
        assert!(t.commutator_norm() < 1e-14);
    }

    #[test]
    fn flip_and_nondegenerate_diagonal_do_not_commute() {
        match make_commuting_tuple(vec![flip(), diag(&[1.0, 2.0])], 1e-10) {
            Err(Error::NotCommuting { norm, .. }) => assert!((norm - 1.0).abs() < 1e-12),
            other => panic!("expected NotCommuting, got {other:?}"),
        }
    }

    #[test]
    fn mismatched_dimensions_are_rejected() {
        assert!(matches!(
            make_commuting_tuple(vec![diag(&[1.0, 2.0]), diag(&[1.0, 2.0, 3.0])], 1e-10),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn joint_eig_of_diagonal_pair_gives_paired_points() {
        let t = make_commuting_tuple(vec![diag(&[1.0, 2.0]), diag(&[3.0, 4.0])], 1e-10).unwrap();
        let j = joint_eig(&t).unwrap();
        // Descending lexicographic order puts (2, 4) first.
        assert_eq!(j.points.len(), 2);
        assert!((j.points[0][0] - 2.0).abs() < 1e-12);
        assert!((j.points[0][1] - 4.0).abs() < 1e-12);
        assert!((j.points[1][0] - 1.0).abs() < 1e-12);
        assert!((j.points[1][1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn joint_spectrum_of_matrix_and_its_square_is_the_graph() {
        let a = flip();
        let sq = HermitianMatrix::symmetrize(&(a.matrix() * a.matrix()));
        let t = make_commuting_tuple(vec![a, sq], 1e-10).unwrap();
        let j = joint_eig(&t).unwrap();
        assert!((j.points[0][0] - 1.0).abs() < 1e-12);
        assert!((j.points[0][1] - 1.0).abs() < 1e-12);
        assert!((j.points[1][0] + 1.0).abs() < 1e-12);
        assert!((j.points[1][1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn fully_degenerate_pair_still_decomposes() {
        let t = make_commuting_tuple(
            vec![HermitianMatrix::identity(2), HermitianMatrix::identity(2)],
            1e-10,
        )
        .unwrap();
        let j = joint_eig(&t).unwrap();
        for point in &j.points {
            assert!((point[0] - 1.0).abs() < 1e-12);
            assert!((point[1] - 1.0).abs() < 1e-12);
        }
        // Basis is orthonormal.
        let g = j.basis.adjoint() * &j.basis;
        assert!((g - DMatrix::<C64>::identity(2, 2)).norm() < 1e-12);
    }

    #[test]
    fn joint_func_calc_sum_on_diagonal_pair() {
        let t = make_commuting_tuple(vec![diag(&[1.0, 2.0]), diag(&[3.0, 4.0])], 1e-10).unwrap();
        let f = crate::functions::builtin_fn("sum", &[("n", 2.0)]).unwrap();
        let r = joint_func_calc(&f, &t).unwrap();
        let expect = diag(&[4.0, 6.0]);
        assert!((r.matrix() - expect.matrix()).norm() < 1e-12);
    }

    #[test]
    fn joint_func_calc_product_on_repeated_matrix_is_the_square() {
        let a = flip();
        let t = make_commuting_tuple(vec![a.clone(), a.clone()], 1e-10).unwrap();
        let f = ScalarFunction::new_nd(
            "prod",
            vec![Interval::REAL_LINE, Interval::REAL_LINE],
            FunctionFlags::default(),
            |x: &[f64]| x[0] * x[1],
        );
        let r = joint_func_calc(&f, &t).unwrap();
        let sq = a.matrix() * a.matrix();
        assert!((r.matrix() - sq).norm() < 1e-12);
    }

    #[test]
    fn joint_func_calc_max_on_crossing_diagonals() {
        let t = make_commuting_tuple(vec![diag(&[1.0, 5.0]), diag(&[2.0, 3.0])], 1e-10).unwrap();
        let f = crate::functions::builtin_fn("max", &[("n", 2.0)]).unwrap();
        let r = joint_func_calc(&f, &t).unwrap();
        let expect = diag(&[2.0, 5.0]);
        assert!((r.matrix() - expect.matrix()).norm() < 1e-12);
    }
}
