//! The Jensen suite: one checkable operation per operator Jensen inequality,
//! plus the information, Liapunov, and Hölder trace inequalities.
//!
//! Every operation returns an [`InequalityReport`]: the two sides of the
//! inequality, a [`PreorderVerdict`] in the appropriate order relation, and
//! an itemized list of hypothesis checks. A failed hypothesis does not abort
//! the computation — the verdict is still produced, but it is *exploratory*:
//! an observation about what happens outside the theorem's assumptions
//! rather than an asserted result. Hard errors are reserved for inputs the
//! operation cannot process at all (spectra outside a function's domain,
//! dimension mismatches, non-invertible atoms, and the like).

use nalgebra::DMatrix;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::functions::ScalarFunction;
use crate::hermitian::{eigh, func_calc, psd_power, HermitianMatrix};
use crate::maps::{apply, classify, PositiveMapSpec};
use crate::preorders::{
    default_tol, loewner_leq, spectral_leq, weak_majorization_leq, PreorderVerdict,
};
use crate::tol;
use crate::tuple::{commutator_norm, joint_func_calc, make_commuting_tuple, CommutingTuple};
use crate::C64;

/// One named hypothesis of a theorem, with the measured evidence.
#[derive(Clone, Debug)]
pub struct HypothesisCheck {
    pub label: String,
    pub satisfied: bool,
    pub detail: String,
}

fn check(label: &str, satisfied: bool, detail: String) -> HypothesisCheck {
    HypothesisCheck {
        label: label.to_string(),
        satisfied,
        detail,
    }
}

/// Structured outcome of one inequality check.
#[derive(Clone, Debug)]
pub struct InequalityReport {
    pub theorem_id: String,
    pub hypotheses: Vec<HypothesisCheck>,
    /// All hypotheses satisfied; only then is the verdict asserted.
    pub hypotheses_ok: bool,
    pub verdict: PreorderVerdict,
    pub lhs: HermitianMatrix,
    pub rhs: HermitianMatrix,
    pub tol: f64,
    /// Hex digest of every input (exact bit patterns), for reproducibility.
    pub inputs_digest: String,
}

impl InequalityReport {
    /// The check ran outside the theorem's hypotheses: the verdict is an
    /// observation, not an asserted result.
    pub fn exploratory(&self) -> bool {
        !self.hypotheses_ok
    }

    /// Hypotheses hold and the inequality was confirmed.
    pub fn asserted_holds(&self) -> bool {
        self.hypotheses_ok && self.verdict.holds
    }
}

fn build_report(
    theorem_id: &str,
    hypotheses: Vec<HypothesisCheck>,
    verdict: PreorderVerdict,
    lhs: HermitianMatrix,
    rhs: HermitianMatrix,
    inputs_digest: String,
) -> InequalityReport {
    let hypotheses_ok = hypotheses.iter().all(|h| h.satisfied);
    let tol = verdict.tol;
    InequalityReport {
        theorem_id: theorem_id.to_string(),
        hypotheses,
        hypotheses_ok,
        verdict,
        lhs,
        rhs,
        tol,
        inputs_digest,
    }
}

// ---------------------------------------------------------------------------
// Input digests

/// Canonical accumulator for input digests: every float enters as the hex of
/// its bit pattern, so the digest pins inputs exactly.
pub(crate) struct InputsDigest {
    buf: String,
}

impl InputsDigest {
    pub(crate) fn new(theorem_id: &str) -> Self {
        let mut d = InputsDigest { buf: String::new() };
        d.push_str("theorem", theorem_id);
        d
    }

    fn push_raw(&mut self, s: &str) {
        self.buf.push_str(s);
        self.buf.push('\n');
    }

    pub(crate) fn push_str(&mut self, label: &str, s: &str) {
        self.push_raw(&format!("{label}:{s}"));
    }

    pub(crate) fn push_f64(&mut self, label: &str, x: f64) {
        self.push_raw(&format!("{label}:{:016x}", x.to_bits()));
    }

    pub(crate) fn push_matrix(&mut self, label: &str, m: &DMatrix<C64>) {
        let mut s = format!("{label}:{}x{}:", m.nrows(), m.ncols());
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                let z = m[(i, j)];
                s.push_str(&format!("{:016x}{:016x}", z.re.to_bits(), z.im.to_bits()));
            }
        }
        self.push_raw(&s);
    }

    pub(crate) fn push_hermitian(&mut self, label: &str, h: &HermitianMatrix) {
        self.push_matrix(label, h.matrix());
    }

    pub(crate) fn push_function(&mut self, label: &str, f: &ScalarFunction) {
        self.push_str(label, f.descriptor());
    }

    pub(crate) fn push_map(&mut self, label: &str, phi: &PositiveMapSpec) {
        self.push_str(label, phi.kind());
        match phi {
            PositiveMapSpec::ChoiKraus { kraus } => {
                for (k, w) in kraus.iter().enumerate() {
                    self.push_matrix(&format!("{label}.kraus{k}"), w);
                }
            }
            PositiveMapSpec::SchurMultiplier { b } => self.push_hermitian(&format!("{label}.b"), b),
            PositiveMapSpec::BlockPinch { alpha } => self.push_f64(&format!("{label}.alpha"), *alpha),
            PositiveMapSpec::BlockAverage => {}
            PositiveMapSpec::State { rho } => self.push_hermitian(&format!("{label}.rho"), rho),
            PositiveMapSpec::BlockDiagonalExpectation { partition } => {
                let blocks: Vec<String> = partition
                    .iter()
                    .map(|b| {
                        b.iter()
                            .map(|i| i.to_string())
                            .collect::<Vec<_>>()
                            .join(",")
                    })
                    .collect();
                self.push_str(&format!("{label}.partition"), &blocks.join(";"));
            }
            PositiveMapSpec::DiscreteDensity { atoms } => {
                for (k, (m, w)) in atoms.iter().enumerate() {
                    self.push_matrix(&format!("{label}.atom{k}"), m);
                    self.push_f64(&format!("{label}.weight{k}"), *w);
                }
            }
        }
    }

    pub(crate) fn finish(mut self, tol: f64) -> String {
        self.push_f64("tol", tol);
        let mut hasher = Sha256::new();
        hasher.update(self.buf.as_bytes());
        let out = hasher.finalize();
        out.iter().map(|b| format!("{b:02x}")).collect()
    }
}

// ---------------------------------------------------------------------------
// Hypothesis helpers

fn convexity_hypothesis(f: &ScalarFunction) -> HypothesisCheck {
    check(
        "function claims convexity",
        f.flags().convex,
        format!("convex flag on {:?}: {}", f.label(), f.flags().convex),
    )
}

fn operator_convexity_hypothesis(f: &ScalarFunction) -> HypothesisCheck {
    check(
        "function claims operator convexity",
        f.flags().operator_convex_claimed,
        format!(
            "operator-convex flag on {:?}: {}",
            f.label(),
            f.flags().operator_convex_claimed
        ),
    )
}

/// Monotone convexity for the spectral inequality. Increasing and decreasing
/// convex functions are both accepted, but under distinct labels so campaign
/// summaries can separate the two populations.
fn monotone_convexity_hypothesis(f: &ScalarFunction) -> HypothesisCheck {
    let flags = f.flags();
    if flags.monotone_increasing {
        check(
            "function claims monotone convexity (increasing)",
            flags.convex,
            format!("increasing: true, convex: {}", flags.convex),
        )
    } else if flags.monotone_decreasing {
        check(
            "function claims monotone convexity (decreasing)",
            flags.convex,
            format!("decreasing: true, convex: {}", flags.convex),
        )
    } else {
        check(
            "function claims monotone convexity",
            false,
            format!("{:?} carries neither monotonicity flag", f.label()),
        )
    }
}

fn unital_hypothesis(phi: &PositiveMapSpec) -> HypothesisCheck {
    let c = classify(phi);
    check(
        "map is unital",
        c.unital,
        format!("unit defect {:.3e}", c.unit_defect),
    )
}

/// Unital maps qualify outright; contractive maps qualify when `0` belongs
/// to the function's domain and `f(0) <= 0`, which is what lets the
/// inequality survive the lost unit.
fn unital_or_contractive_hypothesis(f: &ScalarFunction, phi: &PositiveMapSpec) -> HypothesisCheck {
    let c = classify(phi);
    if c.unital {
        return check(
            "map is unital, or contractive with f(0) <= 0",
            true,
            format!("unital (unit defect {:.3e})", c.unit_defect),
        );
    }
    let zero_in_domain = f.interval().contains(0.0, tol::DOMAIN_MEMBERSHIP);
    let f0 = if zero_in_domain {
        f.eval1(0.0)
    } else {
        f64::INFINITY
    };
    let ok = c.contractive && zero_in_domain && f0 <= 0.0;
    check(
        "map is unital, or contractive with f(0) <= 0",
        ok,
        format!(
            "unit defect {:.3e}, contraction margin {:.3e}, f(0) = {f0:.3e}",
            c.unit_defect, c.contraction_margin
        ),
    )
}

/// Commutation hypothesis shared by the commuting-image theorems: measured
/// commutator operator norm against the scaled commutation tolerance.
fn commutation_hypothesis(
    label: &str,
    x: &HermitianMatrix,
    y: &HermitianMatrix,
) -> HypothesisCheck {
    let norm = commutator_norm(x, y);
    let bound = tol::commutation(x.max_abs_entry().max(y.max_abs_entry()));
    check(
        label,
        norm <= bound,
        format!("commutator norm {norm:.3e} (tolerance {bound:.3e})"),
    )
}

/// Membership of `phi_a` in the centralizer of the conditional expectation:
/// for a block expectation, it must commute with every matrix unit supported
/// inside a block (equivalently, be scalar on each block); for a state, it
/// must commute with the density matrix (so the normalized trace accepts
/// everything).
fn centralizer_hypothesis(phi_a: &HermitianMatrix, e: &PositiveMapSpec) -> HypothesisCheck {
    let label = "map image lies in the centralizer of the expectation";
    match e {
        PositiveMapSpec::State { rho } => {
            let norm = commutator_norm(phi_a, rho);
            let bound = tol::commutation(phi_a.max_abs_entry().max(rho.max_abs_entry()));
            check(
                label,
                norm <= bound,
                format!("commutator with the state {norm:.3e} (tolerance {bound:.3e})"),
            )
        }
        PositiveMapSpec::BlockDiagonalExpectation { partition } => {
            let n = phi_a.dim();
            let m = phi_a.matrix();
            let mut worst = 0.0f64;
            for block in partition {
                for &i in block {
                    for &j in block {
                        if i >= n || j >= n {
                            return check(
                                label,
                                false,
                                format!("partition index {} outside dimension {n}", i.max(j)),
                            );
                        }
                        // [m, E_ij] has column j equal to m's column i and
                        // row i equal to minus m's row j.
                        let mut unit = DMatrix::<C64>::zeros(n, n);
                        unit[(i, j)] = C64::new(1.0, 0.0);
                        let comm = m * &unit - unit * m;
                        worst = worst.max(comm.norm());
                    }
                }
            }
            let bound = tol::commutation(phi_a.max_abs_entry());
            check(
                label,
                worst <= bound,
                format!("worst in-block unit commutator {worst:.3e} (tolerance {bound:.3e})"),
            )
        }
        _ => check(
            label,
            false,
            format!("{} is not a conditional expectation", e.kind()),
        ),
    }
}

// ---------------------------------------------------------------------------
// Shared computation helpers

fn require_arity_1(f: &ScalarFunction, what: &str) -> Result<()> {
    if f.arity() != 1 {
        return Err(Error::BadParameter {
            detail: format!("{what} must take one argument, got arity {}", f.arity()),
        });
    }
    Ok(())
}

/// Hard precondition: every eigenvalue of `a` lies in the domain of `f`.
fn require_spectrum_in(f: &ScalarFunction, a: &HermitianMatrix) -> Result<()> {
    let interval = f.interval();
    for &l in &eigh(a)?.eigenvalues {
        if !interval.contains(l, tol::DOMAIN_MEMBERSHIP) {
            return Err(Error::SpectrumOutsideDomain {
                eigenvalue: l,
                lo: interval.lo,
                hi: interval.hi,
            });
        }
    }
    Ok(())
}

/// Both sides of a Jensen comparison: `(f(phi(a)), phi(f(a)))`.
fn jensen_sides(
    f: &ScalarFunction,
    phi: &PositiveMapSpec,
    a: &HermitianMatrix,
) -> Result<(HermitianMatrix, HermitianMatrix)> {
    let u = apply(phi, a)?;
    let lhs = func_calc(f, &u)?;
    let rhs = apply(phi, &func_calc(f, a)?)?;
    Ok((lhs, rhs))
}

fn scalar_matrix(x: f64) -> HermitianMatrix {
    HermitianMatrix::from_real_diagonal(&[x])
}

// ---------------------------------------------------------------------------
// The Jensen suite

/// Scalar Jensen inequality through a state: `f(tr(rho a)) <= tr(rho f(a))`.
pub fn jensen_state(
    f: &ScalarFunction,
    rho: &HermitianMatrix,
    a: &HermitianMatrix,
) -> Result<InequalityReport> {
    require_arity_1(f, "jensen_state function")?;
    let state = PositiveMapSpec::state(rho.clone())?;
    require_spectrum_in(f, a)?;

    let mean = apply(&state, a)?;
    let lhs = scalar_matrix(f.eval1(mean.matrix()[(0, 0)].re));
    let rhs = apply(&state, &func_calc(f, a)?)?;
    let tol = default_tol(&lhs, &rhs);
    let verdict = loewner_leq(&lhs, &rhs, tol)?;

    let hypotheses = vec![convexity_hypothesis(f)];
    let mut digest = InputsDigest::new("jensen_state");
    digest.push_function("f", f);
    digest.push_hermitian("rho", rho);
    digest.push_hermitian("a", a);
    Ok(build_report(
        "jensen_state",
        hypotheses,
        verdict,
        lhs,
        rhs,
        digest.finish(tol),
    ))
}

/// Operator Jensen inequality in the Loewner order:
/// `f(phi(a)) <= phi(f(a))` for operator convex `f` and unital positive
/// `phi`.
pub fn jensen_loewner(
    f: &ScalarFunction,
    phi: &PositiveMapSpec,
    a: &HermitianMatrix,
) -> Result<InequalityReport> {
    require_arity_1(f, "jensen_loewner function")?;
    require_spectrum_in(f, a)?;
    let (lhs, rhs) = jensen_sides(f, phi, a)?;
    let tol = default_tol(&lhs, &rhs);
    let verdict = loewner_leq(&lhs, &rhs, tol)?;

    let hypotheses = vec![operator_convexity_hypothesis(f), unital_hypothesis(phi)];
    let mut digest = InputsDigest::new("jensen_loewner");
    digest.push_function("f", f);
    digest.push_map("phi", phi);
    digest.push_hermitian("a", a);
    Ok(build_report(
        "jensen_loewner",
        hypotheses,
        verdict,
        lhs,
        rhs,
        digest.finish(tol),
    ))
}

/// Operator Jensen inequality in the spectral preorder:
/// `lambda_i(f(phi(a))) <= lambda_i(phi(f(a)))` for monotone convex `f` and
/// unital (or contractive, when `f(0) <= 0`) positive `phi`.
pub fn jensen_spectral(
    f: &ScalarFunction,
    phi: &PositiveMapSpec,
    a: &HermitianMatrix,
) -> Result<InequalityReport> {
    require_arity_1(f, "jensen_spectral function")?;
    require_spectrum_in(f, a)?;
    let (lhs, rhs) = jensen_sides(f, phi, a)?;
    let tol = default_tol(&lhs, &rhs);
    let verdict = spectral_leq(&lhs, &rhs, tol)?;

    let hypotheses = vec![
        monotone_convexity_hypothesis(f),
        unital_or_contractive_hypothesis(f, phi),
    ];
    let mut digest = InputsDigest::new("jensen_spectral");
    digest.push_function("f", f);
    digest.push_map("phi", phi);
    digest.push_hermitian("a", a);
    Ok(build_report(
        "jensen_spectral",
        hypotheses,
        verdict,
        lhs,
        rhs,
        digest.finish(tol),
    ))
}

/// Jensen inequality in the Loewner order under the commuting-image
/// hypothesis: `f(phi(a)) <= phi(f(a))` when `phi(a)` and `phi(f(a))`
/// commute.
pub fn jensen_commuting(
    f: &ScalarFunction,
    phi: &PositiveMapSpec,
    a: &HermitianMatrix,
) -> Result<InequalityReport> {
    require_arity_1(f, "jensen_commuting function")?;
    require_spectrum_in(f, a)?;
    let (lhs, rhs) = jensen_sides(f, phi, a)?;
    let u = apply(phi, a)?;
    let tol = default_tol(&lhs, &rhs);
    let verdict = loewner_leq(&lhs, &rhs, tol)?;

    let hypotheses = vec![
        convexity_hypothesis(f),
        unital_or_contractive_hypothesis(f, phi),
        commutation_hypothesis("map images commute", &u, &rhs),
    ];
    let mut digest = InputsDigest::new("jensen_commuting");
    digest.push_function("f", f);
    digest.push_map("phi", phi);
    digest.push_hermitian("a", a);
    Ok(build_report(
        "jensen_commuting",
        hypotheses,
        verdict,
        lhs,
        rhs,
        digest.finish(tol),
    ))
}

/// Conditional-expectation Jensen inequality:
/// `E(g(f(phi(a)))) <= E(g(phi(f(a))))` for convex `f`, increasing convex
/// `g`, unital `phi`, and `phi(a)` in the centralizer of `E`.
pub fn jensen_conditional(
    f: &ScalarFunction,
    g: &ScalarFunction,
    phi: &PositiveMapSpec,
    e: &PositiveMapSpec,
    a: &HermitianMatrix,
) -> Result<InequalityReport> {
    require_arity_1(f, "jensen_conditional inner function")?;
    require_arity_1(g, "jensen_conditional outer function")?;
    if !matches!(
        e,
        PositiveMapSpec::State { .. } | PositiveMapSpec::BlockDiagonalExpectation { .. }
    ) {
        return Err(Error::BadParameter {
            detail: format!(
                "conditional expectation must be a state or a block expectation, got {}",
                e.kind()
            ),
        });
    }
    require_spectrum_in(f, a)?;

    let u = apply(phi, a)?;
    let fu = func_calc(f, &u)?;
    let pfa = apply(phi, &func_calc(f, a)?)?;
    let g_dom = g.interval();
    for (side, m) in [("f(phi(a))", &fu), ("phi(f(a))", &pfa)] {
        for &l in &eigh(m)?.eigenvalues {
            if !g_dom.contains(l, tol::DOMAIN_MEMBERSHIP) {
                return Err(Error::DomainMismatch {
                    detail: format!(
                        "eigenvalue {l} of {side} lies outside the domain ({}, {}) of {:?}",
                        g_dom.lo,
                        g_dom.hi,
                        g.label()
                    ),
                });
            }
        }
    }
    let lhs = apply(e, &func_calc(g, &fu)?)?;
    let rhs = apply(e, &func_calc(g, &pfa)?)?;
    let tol = default_tol(&lhs, &rhs);
    let verdict = loewner_leq(&lhs, &rhs, tol)?;

    let hypotheses = vec![
        convexity_hypothesis(f),
        check(
            "outer function claims increasing convexity",
            g.flags().convex && g.flags().monotone_increasing,
            format!(
                "convex: {}, increasing: {} on {:?}",
                g.flags().convex,
                g.flags().monotone_increasing,
                g.label()
            ),
        ),
        unital_hypothesis(phi),
        centralizer_hypothesis(&u, e),
    ];
    let mut digest = InputsDigest::new("jensen_conditional");
    digest.push_function("f", f);
    digest.push_function("g", g);
    digest.push_map("phi", phi);
    digest.push_map("e", e);
    digest.push_hermitian("a", a);
    Ok(build_report(
        "jensen_conditional",
        hypotheses,
        verdict,
        lhs,
        rhs,
        digest.finish(tol),
    ))
}

/// Jensen inequality in weak majorization (the finite-factor form):
/// `f(phi(a))` is submajorized by `phi(f(a))` for convex `f` and unital
/// `phi` — no monotonicity needed.
pub fn jensen_majorization(
    f: &ScalarFunction,
    phi: &PositiveMapSpec,
    a: &HermitianMatrix,
) -> Result<InequalityReport> {
    require_arity_1(f, "jensen_majorization function")?;
    require_spectrum_in(f, a)?;
    let (lhs, rhs) = jensen_sides(f, phi, a)?;
    let tol = default_tol(&lhs, &rhs);
    let verdict = weak_majorization_leq(&lhs, &rhs, tol)?;

    let hypotheses = vec![convexity_hypothesis(f), unital_hypothesis(phi)];
    let mut digest = InputsDigest::new("jensen_majorization");
    digest.push_function("f", f);
    digest.push_map("phi", phi);
    digest.push_hermitian("a", a);
    Ok(build_report(
        "jensen_majorization",
        hypotheses,
        verdict,
        lhs,
        rhs,
        digest.finish(tol),
    ))
}

/// Which order relation the multivariable Jensen check asserts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MultivarVariant {
    /// Loewner order; needs the mapped function value to commute with the
    /// images as well.
    Loewner,
    /// Weak majorization; needs only commuting images.
    Majorization,
}

/// Multivariable Jensen inequality for a commuting tuple:
/// `f(phi(a_1), ..., phi(a_n))` against `phi(f(a_1, ..., a_n))` in the
/// chosen order.
///
/// The images `phi(a_i)` must commute — without that the left-hand side has
/// no joint functional calculus, so a failed image commutator is a hard
/// error naming the offending pair, not an exploratory downgrade.
pub fn jensen_multivar(
    f: &ScalarFunction,
    phi: &PositiveMapSpec,
    t: &CommutingTuple,
    variant: MultivarVariant,
) -> Result<InequalityReport> {
    if f.arity() != t.len() {
        return Err(Error::DimensionMismatch {
            expected: t.len(),
            found: f.arity(),
            context: "function arity vs tuple length".to_string(),
        });
    }
    for (i, a_i) in t.matrices().iter().enumerate() {
        let interval = f.domain()[i];
        for &l in &eigh(a_i)?.eigenvalues {
            if !interval.contains(l, tol::DOMAIN_MEMBERSHIP) {
                return Err(Error::SpectrumOutsideDomain {
                    eigenvalue: l,
                    lo: interval.lo,
                    hi: interval.hi,
                });
            }
        }
    }

    let images: Vec<HermitianMatrix> = t
        .matrices()
        .iter()
        .map(|a_i| apply(phi, a_i))
        .collect::<Result<_>>()?;
    let mut scale = 0.0f64;
    for im in &images {
        scale = scale.max(im.max_abs_entry());
    }
    let tau_c = tol::commutation(scale);
    let image_tuple = make_commuting_tuple(images.clone(), tau_c).map_err(|e| match e {
        Error::NotCommuting { i, j, norm, tol } => Error::HypothesisUnmet {
            detail: format!(
                "map images {i} and {j} do not commute: commutator norm {norm:.3e} exceeds {tol:.3e}"
            ),
        },
        other => other,
    })?;

    let lhs = joint_func_calc(f, &image_tuple)?;
    let rhs = apply(phi, &joint_func_calc(f, t)?)?;
    let tol = default_tol(&lhs, &rhs);

    let mut hypotheses = vec![convexity_hypothesis(f), unital_hypothesis(phi)];
    let (theorem_id, verdict) = match variant {
        MultivarVariant::Loewner => {
            let mut worst_norm = 0.0f64;
            let mut worst_bound = f64::INFINITY;
            let mut worst_index = 0usize;
            for (i, im) in images.iter().enumerate() {
                let norm = commutator_norm(im, &rhs);
                let bound = tol::commutation(im.max_abs_entry().max(rhs.max_abs_entry()));
                if norm - bound > worst_norm - worst_bound {
                    worst_norm = norm;
                    worst_bound = bound;
                    worst_index = i;
                }
            }
            hypotheses.push(check(
                "mapped function value commutes with the images",
                worst_norm <= worst_bound,
                format!(
                    "worst commutator at image {worst_index}: {worst_norm:.3e} (tolerance {worst_bound:.3e})"
                ),
            ));
            ("jensen_multivar_loewner", loewner_leq(&lhs, &rhs, tol)?)
        }
        MultivarVariant::Majorization => (
            "jensen_multivar_majorization",
            weak_majorization_leq(&lhs, &rhs, tol)?,
        ),
    };

    let mut digest = InputsDigest::new(theorem_id);
    digest.push_function("f", f);
    digest.push_map("phi", phi);
    for (i, a_i) in t.matrices().iter().enumerate() {
        digest.push_hermitian(&format!("a{i}"), a_i);
    }
    Ok(build_report(
        theorem_id,
        hypotheses,
        verdict,
        lhs,
        rhs,
        digest.finish(tol),
    ))
}

// ---------------------------------------------------------------------------
// Named trace inequalities

/// Smallest singular value accepted for the first family of atoms.
const MIN_ATOM_SINGULAR: f64 = 1e-8;

fn min_singular_value(m: &DMatrix<C64>) -> Result<f64> {
    let gram = HermitianMatrix::symmetrize(&(m.adjoint() * m));
    Ok(gram.min_eigenvalue()?.max(0.0).sqrt())
}

/// Weighted-sum helper: `sum_k w_k m_k* m_k` as a Hermitian matrix.
fn weighted_gram(atoms: &[(DMatrix<C64>, DMatrix<C64>, f64)], second: bool) -> HermitianMatrix {
    let n = atoms[0].0.nrows();
    let mut sum = DMatrix::<C64>::zeros(n, n);
    for (a, b, w) in atoms {
        let m = if second { b } else { a };
        sum += (m.adjoint() * m).scale(*w);
    }
    HermitianMatrix::symmetrize(&sum)
}

/// Information inequality for a discrete density pair:
/// `sum_k w_k a_k* log(a_k*^-1 b_k* b_k a_k^-1) a_k <= 0` when
/// `sum w a*a = I` and `sum w b*b <= I`, with every `a_k` invertible.
pub fn information_inequality(
    atoms: &[(DMatrix<C64>, DMatrix<C64>, f64)],
) -> Result<InequalityReport> {
    if atoms.is_empty() {
        return Err(Error::BadParameter {
            detail: "need at least one atom".to_string(),
        });
    }
    let n = atoms[0].0.nrows();
    for (k, (a, b, w)) in atoms.iter().enumerate() {
        for (name, m) in [("a", a), ("b", b)] {
            if m.nrows() != m.ncols() {
                return Err(Error::NotSquare {
                    rows: m.nrows(),
                    cols: m.ncols(),
                });
            }
            if m.nrows() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: m.nrows(),
                    context: format!("atom {k} matrix {name}"),
                });
            }
        }
        if !w.is_finite() || *w <= 0.0 {
            return Err(Error::NotDensity {
                detail: format!("atom {k} has non-positive weight {w}"),
            });
        }
    }

    let bound = tol::reconstruction(n);
    let identity = HermitianMatrix::identity(n);
    let gram_a = weighted_gram(atoms, false);
    let defect_a = gram_a.sub(&identity).op_norm();
    if defect_a > bound {
        return Err(Error::NotDensity {
            detail: format!("first family sums to I only up to {defect_a:.3e}"),
        });
    }
    let gram_b = weighted_gram(atoms, true);
    let defect_b = gram_b.sub(&identity).op_norm();
    let excess_b = eigh(&gram_b)?.eigenvalues[0] - 1.0;
    if excess_b > bound {
        return Err(Error::NotDensity {
            detail: format!("second family exceeds the identity by {excess_b:.3e}"),
        });
    }
    let relaxed = defect_b > bound;

    let log = crate::functions::builtin_fn("log", &[])?;
    let mut total = HermitianMatrix::zeros(n);
    for (k, (a, b, w)) in atoms.iter().enumerate() {
        let sigma = min_singular_value(a)?;
        if sigma <= MIN_ATOM_SINGULAR {
            return Err(Error::Singular {
                min_singular: sigma,
            });
        }
        let inv_a = a.clone().try_inverse().ok_or(Error::Singular {
            min_singular: sigma,
        })?;
        let m = b * &inv_a;
        let s = HermitianMatrix::symmetrize(&(m.adjoint() * &m));
        let l = func_calc(&log, &s).map_err(|e| match e {
            Error::SpectrumOutsideDomain { eigenvalue, .. } => Error::Singular {
                min_singular: eigenvalue.max(0.0).sqrt(),
            },
            other => other,
        })?;
        let term = HermitianMatrix::symmetrize(&(a.adjoint() * l.matrix() * a));
        total = total.add(&term.scale(*w));
        let _ = k;
    }

    let zero = HermitianMatrix::zeros(n);
    let tol = default_tol(&total, &zero);
    let verdict = loewner_leq(&total, &zero, tol)?;

    let hypotheses = vec![
        check(
            "first family integrates to the identity",
            true,
            format!("defect {defect_a:.3e}"),
        ),
        check(
            "second family integrates to at most the identity",
            true,
            if relaxed {
                format!("sub-density accepted (relaxed hypothesis): defect from I {defect_b:.3e}")
            } else {
                format!("density: defect from I {defect_b:.3e}")
            },
        ),
    ];
    let mut digest = InputsDigest::new("information_inequality");
    for (k, (a, b, w)) in atoms.iter().enumerate() {
        digest.push_matrix(&format!("a{k}"), a);
        digest.push_matrix(&format!("b{k}"), b);
        digest.push_f64(&format!("w{k}"), *w);
    }
    Ok(build_report(
        "information_inequality",
        hypotheses,
        verdict,
        total,
        zero,
        digest.finish(tol),
    ))
}

/// Liapunov-type power inequality: `phi(a^r)^(1/r) <= phi(a^s)^(1/s)` for
/// positive semidefinite `a`, exponents `1 <= r <= s`, and a contractive
/// (in particular unital) positive map.
pub fn liapunov(
    phi: &PositiveMapSpec,
    a: &HermitianMatrix,
    r: f64,
    s: f64,
) -> Result<InequalityReport> {
    if !(r.is_finite() && s.is_finite() && 1.0 <= r && r <= s) {
        return Err(Error::BadExponents {
            detail: format!("need 1 <= r <= s, got r = {r}, s = {s}"),
        });
    }
    let lhs = psd_power(&apply(phi, &psd_power(a, r)?)?, 1.0 / r)?;
    let rhs = psd_power(&apply(phi, &psd_power(a, s)?)?, 1.0 / s)?;
    let tol = default_tol(&lhs, &rhs);
    let verdict = loewner_leq(&lhs, &rhs, tol)?;

    let c = classify(phi);
    let hypotheses = vec![check(
        "map is contractive",
        c.contractive,
        format!("contraction margin {:.3e}", c.contraction_margin),
    )];
    let mut digest = InputsDigest::new("liapunov");
    digest.push_map("phi", phi);
    digest.push_hermitian("a", a);
    digest.push_f64("r", r);
    digest.push_f64("s", s);
    Ok(build_report(
        "liapunov",
        hypotheses,
        verdict,
        lhs,
        rhs,
        digest.finish(tol),
    ))
}

fn real_trace_product(x: &HermitianMatrix, y: &HermitianMatrix) -> f64 {
    let (xm, ym) = (x.matrix(), y.matrix());
    let n = x.dim();
    let mut total = 0.0;
    for i in 0..n {
        for j in 0..n {
            total += (xm[(i, j)] * ym[(j, i)]).re;
        }
    }
    total
}

/// Hölder-type trace inequality in the normalized trace:
/// `tr(ca + db)/n <= (tr(a^p + b^p)/n)^(1/p)` for PSD inputs, conjugate
/// exponents, and weights with `c^q + d^q <= I`.
pub fn holder(
    c: &HermitianMatrix,
    d: &HermitianMatrix,
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    p: f64,
    q: f64,
) -> Result<InequalityReport> {
    if !(p.is_finite() && q.is_finite() && p > 1.0 && q > 1.0) {
        return Err(Error::BadExponents {
            detail: format!("need p, q > 1, got p = {p}, q = {q}"),
        });
    }
    if (1.0 / p + 1.0 / q - 1.0).abs() > 1e-12 {
        return Err(Error::BadExponents {
            detail: format!("exponents are not conjugate: 1/{p} + 1/{q} != 1"),
        });
    }
    let n = c.dim();
    for (name, m) in [("d", d), ("a", a), ("b", b)] {
        if m.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: m.dim(),
                context: format!("matrix {name}"),
            });
        }
    }

    let cq = psd_power(c, q)?;
    let dq = psd_power(d, q)?;
    let identity = HermitianMatrix::identity(n);
    // Compared at the standard scale-aware tolerance: the powers come out of
    // an eigendecomposition, whose noise under near-degenerate spectra
    // exceeds the plain reconstruction band.
    let cap_sum = cq.add(&dq);
    let weight_cap = loewner_leq(&cap_sum, &identity, default_tol(&cap_sum, &identity))?;

    let n_f = n as f64;
    let lhs_val = (real_trace_product(c, a) + real_trace_product(d, b)) / n_f;
    let ap = psd_power(a, p)?;
    let bp = psd_power(b, p)?;
    let rhs_val = ((ap.trace() + bp.trace()) / n_f).max(0.0).powf(1.0 / p);
    let lhs = scalar_matrix(lhs_val);
    let rhs = scalar_matrix(rhs_val);
    let tol = default_tol(&lhs, &rhs);
    let verdict = loewner_leq(&lhs, &rhs, tol)?;

    let hypotheses = vec![check(
        "powers of the weights are dominated by the identity",
        weight_cap.holds,
        format!("worst margin of I - c^q - d^q: {:.3e}", weight_cap.min_margin()),
    )];
    let mut digest = InputsDigest::new("holder");
    digest.push_hermitian("c", c);
    digest.push_hermitian("d", d);
    digest.push_hermitian("a", a);
    digest.push_hermitian("b", b);
    digest.push_f64("p", p);
    digest.push_f64("q", q);
    Ok(build_report(
        "holder",
        hypotheses,
        verdict,
        lhs,
        rhs,
        digest.finish(tol),
    ))
}
