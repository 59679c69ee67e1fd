//! Seeded random constructions: Haar unitaries, Hermitian matrices with
//! prescribed spectra, unital/contractive map families, states, partitions,
//! and density families.
//!
//! All randomness is drawn from ChaCha8 streams addressed as
//! `(master seed, stream)`, so any sampled object can be reproduced from the
//! pair that produced it. Campaign code uses the trial index as the stream;
//! per-campaign pools use [`POOL_STREAM`].

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::hermitian::HermitianMatrix;
use crate::maps::PositiveMapSpec;
use crate::C64;

/// Stream index reserved for sampling per-campaign function pools, distinct
/// from every trial index.
pub const POOL_STREAM: u64 = u64::MAX;

/// The generator for `(seed, stream)`. Streams are independent: advancing
/// one never affects another.
pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Matrix with independent complex Gaussian entries (real and imaginary
/// parts standard normal).
pub fn complex_gaussian(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> DMatrix<C64> {
    DMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        C64::new(re, im)
    })
}

/// Haar-distributed unitary via QR of a complex Gaussian matrix with the
/// standard phase fix on the R diagonal.
pub fn haar_unitary(rng: &mut ChaCha8Rng, n: usize) -> DMatrix<C64> {
    let g = complex_gaussian(rng, n, n);
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() == 0.0 {
            C64::new(1.0, 0.0)
        } else {
            d / d.norm()
        };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// `n` values uniform in the closed window, unsorted.
pub fn uniform_spectrum(rng: &mut ChaCha8Rng, window: (f64, f64), n: usize) -> Vec<f64> {
    (0..n)
        .map(|_| window.0 + rng.gen::<f64>() * (window.1 - window.0))
        .collect()
}

/// Random Hermitian matrix with eigenvalues drawn uniformly from the window,
/// conjugated by a Haar unitary.
pub fn hermitian_with_spectrum_in(
    rng: &mut ChaCha8Rng,
    window: (f64, f64),
    n: usize,
) -> HermitianMatrix {
    let spectrum = uniform_spectrum(rng, window, n);
    let u = haar_unitary(rng, n);
    HermitianMatrix::from_real_diagonal(&spectrum).conjugate_by(&u)
}

/// Random Hermitian matrix `(G + G*)/2` with Gaussian `G`; spectrum roughly
/// semicircular with radius about `2 sqrt(n)`.
pub fn hermitian_gaussian(rng: &mut ChaCha8Rng, n: usize) -> HermitianMatrix {
    HermitianMatrix::symmetrize(&complex_gaussian(rng, n, n))
}

/// Random density matrix: eigenvalues bounded away from zero, normalized to
/// unit trace, Haar conjugated.
pub fn random_state(rng: &mut ChaCha8Rng, n: usize) -> HermitianMatrix {
    let raw = uniform_spectrum(rng, (0.1, 1.0), n);
    let total: f64 = raw.iter().sum();
    let spectrum: Vec<f64> = raw.iter().map(|x| x / total).collect();
    let u = haar_unitary(rng, n);
    HermitianMatrix::from_real_diagonal(&spectrum).conjugate_by(&u)
}

/// Unital Kraus family on `n x n` matrices: Gaussian operators renormalized
/// through the inverse square root of their Gram sum, so `sum W* W = I` up
/// to rounding.
pub fn unital_kraus(rng: &mut ChaCha8Rng, n: usize, count: usize) -> PositiveMapSpec {
    let gs: Vec<DMatrix<C64>> = (0..count).map(|_| complex_gaussian(rng, n, n)).collect();
    let mut gram = DMatrix::<C64>::zeros(n, n);
    for g in &gs {
        gram += g.adjoint() * g;
    }
    let gram = HermitianMatrix::symmetrize(&gram);
    let inv_sqrt = crate::hermitian::psd_power(&gram, -0.5)
        .expect("Gaussian Gram sums are positive definite");
    let kraus = gs.iter().map(|g| g * inv_sqrt.matrix()).collect();
    PositiveMapSpec::choi_kraus(kraus).expect("constructed Kraus family is well-formed")
}

/// Strictly contractive, non-unital Kraus family: the unit image is a random
/// positive matrix with spectrum inside `[0.2, 0.9]`.
pub fn contractive_kraus(rng: &mut ChaCha8Rng, n: usize, count: usize) -> PositiveMapSpec {
    let gs: Vec<DMatrix<C64>> = (0..count).map(|_| complex_gaussian(rng, n, n)).collect();
    let mut gram = DMatrix::<C64>::zeros(n, n);
    for g in &gs {
        gram += g.adjoint() * g;
    }
    let gram = HermitianMatrix::symmetrize(&gram);
    let inv_sqrt = crate::hermitian::psd_power(&gram, -0.5)
        .expect("Gaussian Gram sums are positive definite");
    let cap = hermitian_with_spectrum_in(rng, (0.2, 0.9), n);
    let cap_sqrt = crate::hermitian::psd_power(&cap, 0.5).expect("cap spectrum is positive");
    let factor = inv_sqrt.matrix() * cap_sqrt.matrix();
    let kraus = gs.iter().map(|g| g * &factor).collect();
    PositiveMapSpec::choi_kraus(kraus).expect("constructed Kraus family is well-formed")
}

/// Unital Schur multiplier: a random correlation matrix (PSD with unit
/// diagonal) built by normalizing a Gaussian Gram matrix.
pub fn schur_unital(rng: &mut ChaCha8Rng, n: usize) -> PositiveMapSpec {
    let g = complex_gaussian(rng, n, n);
    let gram = &g * g.adjoint();
    let mut b = DMatrix::<C64>::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let scale = (gram[(i, i)].re * gram[(j, j)].re).sqrt();
            b[(i, j)] = if i == j {
                C64::new(1.0, 0.0)
            } else {
                gram[(i, j)] / scale
            };
        }
    }
    let b = HermitianMatrix::symmetrize(&b);
    PositiveMapSpec::schur(b).expect("normalized Gram matrices are positive semidefinite")
}

/// Random contiguous partition of `0..n`: each interior boundary becomes a
/// cut with probability 0.45.
pub fn random_partition(rng: &mut ChaCha8Rng, n: usize) -> Vec<Vec<usize>> {
    let mut blocks = Vec::new();
    let mut current = vec![0usize];
    for i in 1..n {
        if rng.gen_bool(0.45) {
            blocks.push(std::mem::take(&mut current));
        }
        current.push(i);
    }
    blocks.push(current);
    blocks
}

/// The partition into singletons (pinching onto the diagonal).
pub fn singleton_partition(n: usize) -> Vec<Vec<usize>> {
    (0..n).map(|i| vec![i]).collect()
}

/// Random Hermitian pair `(A, B)` whose sorted eigenvalues dominate index by
/// index: `B`'s are `A`'s plus non-negative gaps (zero gaps occur with
/// probability 0.3), each matrix conjugated by an independent Haar unitary.
pub fn spectral_ordered_pair(
    rng: &mut ChaCha8Rng,
    n: usize,
) -> (HermitianMatrix, HermitianMatrix) {
    let mut la = uniform_spectrum(rng, (-2.0, 2.0), n);
    la.sort_by(|a, b| b.partial_cmp(a).expect("finite samples"));
    let mut lb: Vec<f64> = la
        .iter()
        .map(|&l| {
            let gap = if rng.gen_bool(0.3) {
                0.0
            } else {
                rng.gen::<f64>() * 1.5
            };
            l + gap
        })
        .collect();
    lb.sort_by(|a, b| b.partial_cmp(a).expect("finite samples"));
    let ua = haar_unitary(rng, n);
    let ub = haar_unitary(rng, n);
    let a = HermitianMatrix::from_real_diagonal(&la).conjugate_by(&ua);
    let b = HermitianMatrix::from_real_diagonal(&lb).conjugate_by(&ub);
    (a, b)
}

/// Atom family for the information inequality: weights `w_k`, invertible
/// `a_k` with `sum w_k a_k* a_k = I`, and `b_k` with `sum w_k b_k* b_k = K`
/// for a random cap `K <= I` (the identity itself half of the time).
pub fn information_atoms(
    rng: &mut ChaCha8Rng,
    n: usize,
    count: usize,
) -> Vec<(DMatrix<C64>, DMatrix<C64>, f64)> {
    for _ in 0..64 {
        let weights: Vec<f64> = (0..count).map(|_| 0.2 + 0.8 * rng.gen::<f64>()).collect();
        let gs: Vec<DMatrix<C64>> = (0..count).map(|_| complex_gaussian(rng, n, n)).collect();
        let hs: Vec<DMatrix<C64>> = (0..count).map(|_| complex_gaussian(rng, n, n)).collect();
        let gram_of = |ms: &[DMatrix<C64>]| {
            let mut gram = DMatrix::<C64>::zeros(n, n);
            for (m, w) in ms.iter().zip(weights.iter()) {
                gram += (m.adjoint() * m) * C64::new(*w, 0.0);
            }
            HermitianMatrix::symmetrize(&gram)
        };
        let s_inv_sqrt = crate::hermitian::psd_power(&gram_of(&gs), -0.5)
            .expect("Gaussian Gram sums are positive definite");
        let cap_factor = if rng.gen_bool(0.5) {
            DMatrix::<C64>::identity(n, n)
        } else {
            let cap = hermitian_with_spectrum_in(rng, (0.3, 0.95), n);
            crate::hermitian::psd_power(&cap, 0.5)
                .expect("cap spectrum is positive")
                .into_matrix()
        };
        let t_inv_sqrt = crate::hermitian::psd_power(&gram_of(&hs), -0.5)
            .expect("Gaussian Gram sums are positive definite");
        let b_factor = t_inv_sqrt.matrix() * cap_factor;
        let atoms: Vec<(DMatrix<C64>, DMatrix<C64>, f64)> = gs
            .iter()
            .zip(hs.iter())
            .zip(weights.iter())
            .map(|((g, h), &w)| (g * s_inv_sqrt.matrix(), h * &b_factor, w))
            .collect();
        // The factors are invertible almost surely; re-draw in the
        // astronomically unlikely degenerate case.
        let min_gram_eig = |m: &DMatrix<C64>| {
            HermitianMatrix::symmetrize(&(m.adjoint() * m))
                .min_eigenvalue()
                .unwrap_or(0.0)
        };
        if atoms
            .iter()
            .all(|(a, b, _)| min_gram_eig(a) > 1e-14 && min_gram_eig(b) > 1e-14)
        {
            return atoms;
        }
    }
    unreachable!("no invertible Gaussian atom family found in 64 attempts");
}

/// Commuting pair `(c, d)` of PSD matrices with `c^q + d^q = I`: both are
/// functions of a common Haar-rotated diagonal `x`, with `c = x^(1/q)` and
/// `d = (1-x)^(1/q)`.
pub fn holder_weight_pair(
    rng: &mut ChaCha8Rng,
    n: usize,
    q: f64,
) -> (HermitianMatrix, HermitianMatrix) {
    let x = uniform_spectrum(rng, (0.05, 0.95), n);
    let u = haar_unitary(rng, n);
    let c: Vec<f64> = x.iter().map(|&t| t.powf(1.0 / q)).collect();
    let d: Vec<f64> = x.iter().map(|&t| (1.0 - t).powf(1.0 / q)).collect();
    (
        HermitianMatrix::from_real_diagonal(&c).conjugate_by(&u),
        HermitianMatrix::from_real_diagonal(&d).conjugate_by(&u),
    )
}
