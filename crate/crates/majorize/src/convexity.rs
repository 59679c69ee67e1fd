//! Affine-minorant envelopes of convex functions and randomized
//! matrix-convexity probes.
//!
//! A convex function is the supremum of its affine minorants; this module
//! builds finite families of support lines (or planes, for several
//! variables) on a compact box and measures how well their upper envelope
//! approximates the function. The matrix-convexity test probes the operator
//! analogue of convexity on random Hermitian pairs and reports violations
//! with a re-checkable witness.

use rand::Rng;

use crate::error::{Error, Result};
use crate::functions::ScalarFunction;
use crate::hermitian::func_calc;
use crate::preorders::{PreorderVerdict, Witness};
use crate::sample::{hermitian_with_spectrum_in, rng_for};
use crate::tol;

/// Relative step for difference-quotient slopes, as a fraction of the box
/// width in each coordinate.
const QUOTIENT_STEP: f64 = 1e-6;

/// A closed product of bounded intervals, one per function argument.
#[derive(Clone, Debug, PartialEq)]
pub struct CompactBox {
    bounds: Vec<(f64, f64)>,
}

impl CompactBox {
    pub fn new(bounds: Vec<(f64, f64)>) -> Result<Self> {
        if bounds.is_empty() {
            return Err(Error::BadDomain {
                detail: "compact box needs at least one coordinate".to_string(),
            });
        }
        for &(lo, hi) in &bounds {
            if !lo.is_finite() || !hi.is_finite() || lo >= hi {
                return Err(Error::BadDomain {
                    detail: format!("degenerate box side [{lo}, {hi}]"),
                });
            }
        }
        Ok(CompactBox { bounds })
    }

    /// One-dimensional box (a compact interval).
    pub fn interval(lo: f64, hi: f64) -> Result<Self> {
        CompactBox::new(vec![(lo, hi)])
    }

    pub fn dims(&self) -> usize {
        self.bounds.len()
    }

    pub fn bounds(&self) -> &[(f64, f64)] {
        &self.bounds
    }
}

/// A single affine function `x -> intercept + gradient . x`.
#[derive(Clone, Debug)]
pub struct AffineMinorant {
    pub gradient: Vec<f64>,
    pub intercept: f64,
}

impl AffineMinorant {
    pub fn eval(&self, x: &[f64]) -> f64 {
        self.gradient
            .iter()
            .zip(x.iter())
            .map(|(g, t)| g * t)
            .sum::<f64>()
            + self.intercept
    }
}

/// A family of affine minorants of a convex function on a compact box; the
/// pointwise maximum approximates the function from below.
#[derive(Clone, Debug)]
pub struct AffineMinorantSet {
    pub minorants: Vec<AffineMinorant>,
    pub domain: CompactBox,
}

impl AffineMinorantSet {
    /// Upper envelope: the pointwise maximum of the family.
    pub fn envelope(&self, x: &[f64]) -> f64 {
        self.minorants
            .iter()
            .map(|m| m.eval(x))
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Evaluation-grid resolution per coordinate: about a thousand points in
/// total, however many arguments the function takes.
pub fn default_grid_per_dim(arity: usize) -> usize {
    if arity <= 1 {
        return 1001;
    }
    let mut k = 2usize;
    while (k as f64).powi(arity as i32) < 1001.0 {
        k += 1;
    }
    k
}

/// `j`-th of `count` uniformly spaced points on `[lo, hi]` including both
/// endpoints, with the last point pinned to `hi` exactly.
fn uniform_point(lo: f64, hi: f64, j: usize, count: usize) -> f64 {
    if j + 1 == count {
        hi
    } else {
        lo + j as f64 * ((hi - lo) / (count - 1) as f64)
    }
}

/// Visit every point of the uniform grid with `per_dim` points per
/// coordinate (endpoints included).
fn for_each_grid_point(domain: &CompactBox, per_dim: usize, mut visit: impl FnMut(&[f64])) {
    let dims = domain.dims();
    let mut index = vec![0usize; dims];
    let mut point = vec![0.0f64; dims];
    loop {
        for (d, &(lo, hi)) in domain.bounds().iter().enumerate() {
            point[d] = uniform_point(lo, hi, index[d], per_dim);
        }
        visit(&point);
        let mut d = 0;
        loop {
            if d == dims {
                return;
            }
            index[d] += 1;
            if index[d] < per_dim {
                break;
            }
            index[d] = 0;
            d += 1;
        }
    }
}

/// Difference-quotient slope of `f` in coordinate `coord` at `anchor`.
///
/// The quotient is symmetric with step `h`; a side that would leave the open
/// domain collapses onto the anchor, giving a one-sided quotient there. The
/// denominator is the exactly computed difference of the two evaluation
/// points, so when `f` is linear between them the slope is reproduced to the
/// last bit.
fn quotient_slope(f: &ScalarFunction, anchor: &[f64], coord: usize, h: f64) -> f64 {
    let dom = f.domain()[coord];
    let a = anchor[coord];
    let mut x1 = a + h;
    if !(x1 < dom.hi) {
        x1 = a;
    }
    let mut x0 = a - h;
    if !(x0 > dom.lo) {
        x0 = a;
    }
    if x1 <= x0 {
        return 0.0;
    }
    let mut hi_pt = anchor.to_vec();
    hi_pt[coord] = x1;
    let mut lo_pt = anchor.to_vec();
    lo_pt[coord] = x0;
    (f.eval(&hi_pt) - f.eval(&lo_pt)) / (x1 - x0)
}

/// Support lines (planes) of a convex function at `m` uniformly spaced
/// anchors per coordinate of the box `k`.
///
/// Slopes come from symmetric difference quotients with step
/// [`QUOTIENT_STEP`] times the box width (one-sided where the open domain
/// ends); each line is anchored at its tangency point and then lowered by
/// its largest excess over `f` on the default evaluation grid, so the
/// minorant property holds on that grid to within an ulp despite the
/// quotient's rounding.
pub fn affine_minorants(
    f: &ScalarFunction,
    k: &CompactBox,
    m: usize,
) -> Result<AffineMinorantSet> {
    if !f.flags().convex {
        return Err(Error::NotConvexClaim {
            label: f.label().to_string(),
        });
    }
    if m < 2 {
        return Err(Error::BadParameter {
            detail: format!("need at least 2 anchors per coordinate, got {m}"),
        });
    }
    if k.dims() != f.arity() {
        return Err(Error::DimensionMismatch {
            expected: f.arity(),
            found: k.dims(),
            context: "anchor box vs function arity".to_string(),
        });
    }
    for (d, &(lo, hi)) in k.bounds().iter().enumerate() {
        let dom = f.domain()[d];
        if !dom.contains(lo, tol::DOMAIN_MEMBERSHIP) || !dom.contains(hi, tol::DOMAIN_MEMBERSHIP) {
            return Err(Error::BadDomain {
                detail: format!(
                    "box side [{lo}, {hi}] leaves the domain ({}, {}) of {:?}",
                    dom.lo,
                    dom.hi,
                    f.label()
                ),
            });
        }
    }

    let dims = k.dims();
    let steps: Vec<f64> = k
        .bounds()
        .iter()
        .map(|&(lo, hi)| QUOTIENT_STEP * (hi - lo))
        .collect();

    let mut minorants = Vec::new();
    let anchor_box = k.clone();
    for_each_grid_point(&anchor_box, m, |anchor| {
        let gradient: Vec<f64> = (0..dims)
            .map(|d| quotient_slope(f, anchor, d, steps[d]))
            .collect();
        let dot: f64 = gradient
            .iter()
            .zip(anchor.iter())
            .map(|(g, t)| g * t)
            .sum();
        minorants.push(AffineMinorant {
            gradient,
            intercept: f.eval(anchor) - dot,
        });
    });

    // Correction pass: measure each line's worst excess over f on the
    // evaluation grid and lower it by that amount. Exact slopes leave the
    // excess at zero; rounded slopes get pulled back below f.
    let per_dim = default_grid_per_dim(dims);
    let mut excess = vec![0.0f64; minorants.len()];
    for_each_grid_point(k, per_dim, |x| {
        let fx = f.eval(x);
        for (e, line) in excess.iter_mut().zip(minorants.iter()) {
            *e = e.max(line.eval(x) - fx);
        }
    });
    for (line, e) in minorants.iter_mut().zip(excess.iter()) {
        if *e > 0.0 {
            line.intercept -= *e;
        }
    }

    Ok(AffineMinorantSet {
        minorants,
        domain: k.clone(),
    })
}

/// Worst gap between `f` and the envelope of `s` on a uniform grid with
/// `grid` points per coordinate of the covered box.
pub fn minorant_sup_error(f: &ScalarFunction, s: &AffineMinorantSet, grid: usize) -> f64 {
    assert_eq!(
        s.domain.dims(),
        f.arity(),
        "minorant set covers a box of the wrong dimension"
    );
    let per_dim = grid.max(2);
    let mut worst = f64::NEG_INFINITY;
    for_each_grid_point(&s.domain, per_dim, |x| {
        worst = worst.max(f.eval(x) - s.envelope(x));
    });
    worst
}

/// Randomized matrix-convexity probe at a fixed dimension.
///
/// Samples `trials` triples `(a, b, w)` — Hermitian pairs with spectra drawn
/// from the sampling window of `f`'s domain then conjugated by independent
/// Haar unitaries, and a uniform weight — and checks that
/// `w f(a) + (1-w) f(b) - f(w a + (1-w) b)` has no eigenvalue below the
/// fixed threshold. The single margin is the worst such eigenvalue over all
/// trials; a failing verdict carries the worst triple as a witness, which
/// re-verifies by direct eigenvalue computation.
pub fn matrix_convexity_test(
    f: &ScalarFunction,
    n: usize,
    trials: u64,
    seed: u64,
) -> Result<PreorderVerdict> {
    if f.arity() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: f.arity(),
            context: "matrix convexity probes single-argument functions".to_string(),
        });
    }
    if n == 0 {
        return Err(Error::BadParameter {
            detail: "matrix dimension must be at least 1".to_string(),
        });
    }
    let window = f.interval().sampling_window();
    if !(window.0 < window.1) {
        return Err(Error::BadDomain {
            detail: format!(
                "empty sampling window for domain ({}, {})",
                f.interval().lo,
                f.interval().hi
            ),
        });
    }

    let tol = tol::MATRIX_CONVEXITY;
    let mut worst = f64::INFINITY;
    let mut worst_case = None;
    for trial in 0..trials {
        let mut rng = rng_for(seed, trial);
        let a = hermitian_with_spectrum_in(&mut rng, window, n);
        let b = hermitian_with_spectrum_in(&mut rng, window, n);
        let w: f64 = rng.gen();
        let mid = a.scale(w).add(&b.scale(1.0 - w));
        let fa = func_calc(f, &a)?;
        let fb = func_calc(f, &b)?;
        let fm = func_calc(f, &mid)?;
        let defect = fa.scale(w).add(&fb.scale(1.0 - w)).sub(&fm);
        let mu = defect.min_eigenvalue()?;
        if mu < worst {
            worst = mu;
            worst_case = Some((a, b, w, mu));
        }
    }

    let holds = worst >= -tol;
    let witness = if holds {
        None
    } else {
        worst_case.map(|(a, b, weight, min_eigenvalue)| Witness::ConvexCombination {
            a,
            b,
            weight,
            min_eigenvalue,
        })
    };
    Ok(PreorderVerdict {
        holds,
        margins: vec![worst],
        witness,
        tol,
    })
}

/// Scalar analogue of [`matrix_convexity_test`]: worst three-point convexity
/// margin `w f(x) + (1-w) f(y) - f(w x + (1-w) y)` over seeded samples from
/// the sampling window.
pub fn scalar_convexity_margin(f: &ScalarFunction, trials: u64, seed: u64) -> Result<f64> {
    if f.arity() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: f.arity(),
            context: "scalar convexity probes single-argument functions".to_string(),
        });
    }
    let window = f.interval().sampling_window();
    if !(window.0 < window.1) {
        return Err(Error::BadDomain {
            detail: format!(
                "empty sampling window for domain ({}, {})",
                f.interval().lo,
                f.interval().hi
            ),
        });
    }
    let width = window.1 - window.0;
    let mut worst = f64::INFINITY;
    for trial in 0..trials {
        let mut rng = rng_for(seed, trial);
        let x = window.0 + rng.gen::<f64>() * width;
        let y = window.0 + rng.gen::<f64>() * width;
        let w: f64 = rng.gen();
        let margin = w * f.eval1(x) + (1.0 - w) * f.eval1(y) - f.eval1(w * x + (1.0 - w) * y);
        worst = worst.min(margin);
    }
    Ok(worst)
}
