//! Seeded falsification campaigns: run one inequality checker many times
//! against randomized inputs drawn from theorem-appropriate pools, and
//! aggregate the outcomes.
//!
//! Determinism contract: trial `k` of a campaign with seed `s` draws all of
//! its randomness from [`rng_for`]`(s, k)`, so campaigns reproduce exactly
//! for a given `(seed, trials, dims)` and trials are independent of each
//! other and of evaluation order. Per-campaign shared pools (the
//! operator-convex function pool) draw from the reserved stream
//! [`POOL_STREAM`].

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::functions::{builtin_fn, operator_convex_from_measure, OperatorConvexMeasure, ScalarFunction};
use crate::hermitian::HermitianMatrix;
use crate::inequalities::{
    holder, information_inequality, jensen_commuting, jensen_conditional, jensen_loewner,
    jensen_majorization, jensen_multivar, jensen_spectral, jensen_state, liapunov,
    InequalityReport, MultivarVariant,
};
use crate::maps::PositiveMapSpec;
use crate::sample::{
    contractive_kraus, haar_unitary, hermitian_with_spectrum_in, holder_weight_pair,
    information_atoms, random_partition, random_state, rng_for, schur_unital,
    singleton_partition, unital_kraus, uniform_spectrum, POOL_STREAM,
};
use crate::tol;
use crate::tuple::make_commuting_tuple;

/// The inequality checkers a campaign can target.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TheoremId {
    JensenState,
    JensenLoewner,
    JensenSpectral,
    JensenCommuting,
    JensenConditional,
    JensenMajorization,
    JensenMultivarLoewner,
    JensenMultivarMajorization,
    InformationInequality,
    Liapunov,
    Holder,
}

impl TheoremId {
    pub const ALL: [TheoremId; 11] = [
        TheoremId::JensenState,
        TheoremId::JensenLoewner,
        TheoremId::JensenSpectral,
        TheoremId::JensenCommuting,
        TheoremId::JensenConditional,
        TheoremId::JensenMajorization,
        TheoremId::JensenMultivarLoewner,
        TheoremId::JensenMultivarMajorization,
        TheoremId::InformationInequality,
        TheoremId::Liapunov,
        TheoremId::Holder,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            TheoremId::JensenState => "jensen_state",
            TheoremId::JensenLoewner => "jensen_loewner",
            TheoremId::JensenSpectral => "jensen_spectral",
            TheoremId::JensenCommuting => "jensen_commuting",
            TheoremId::JensenConditional => "jensen_conditional",
            TheoremId::JensenMajorization => "jensen_majorization",
            TheoremId::JensenMultivarLoewner => "jensen_multivar_loewner",
            TheoremId::JensenMultivarMajorization => "jensen_multivar_majorization",
            TheoremId::InformationInequality => "information_inequality",
            TheoremId::Liapunov => "liapunov",
            TheoremId::Holder => "holder",
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TheoremId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TheoremId::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| Error::UnknownTheorem {
                name: s.to_string(),
            })
    }
}

/// Parameters of one campaign.
#[derive(Clone)]
pub struct CampaignConfig {
    pub theorem: TheoremId,
    pub seed: u64,
    pub trials: u64,
    /// Matrix dimensions are drawn uniformly from `dim_min..=dim_max`.
    pub dim_min: usize,
    pub dim_max: usize,
    /// Replaces the drawn scalar function in every trial; the usual way to
    /// hunt for violations outside a theorem's hypotheses.
    pub function_override: Option<ScalarFunction>,
}

impl CampaignConfig {
    pub fn new(theorem: TheoremId, seed: u64, trials: u64, dim_min: usize, dim_max: usize) -> Self {
        CampaignConfig {
            theorem,
            seed,
            trials,
            dim_min,
            dim_max,
            function_override: None,
        }
    }
}

/// One row of a campaign table.
#[derive(Clone, Debug)]
pub struct TrialRecord {
    pub trial: u64,
    pub dim: usize,
    pub holds: bool,
    pub hypotheses_ok: bool,
    pub min_margin: f64,
    pub function_label: String,
    pub map_kind: String,
}

/// Aggregated campaign outcome.
#[derive(Clone)]
pub struct CampaignSummary {
    pub theorem_id: String,
    pub seed: u64,
    pub trials: u64,
    pub dim_min: usize,
    pub dim_max: usize,
    /// Trials whose hypotheses all held.
    pub asserted_trials: u64,
    /// Asserted trials whose verdict failed — each one falsifies a theorem.
    pub asserted_failures: u64,
    /// Trials run outside the hypotheses (observations only).
    pub exploratory_trials: u64,
    /// Exploratory trials whose verdict failed.
    pub exploratory_violations: u64,
    pub min_margin: f64,
    pub min_margin_trial: u64,
    pub min_asserted_margin: Option<f64>,
    pub min_asserted_margin_trial: Option<u64>,
    pub records: Vec<TrialRecord>,
    /// The failing trial with the most negative margin, kept in full for
    /// re-verification.
    pub worst_violation: Option<(u64, InequalityReport)>,
}

// ---------------------------------------------------------------------------
// Drawing helpers

fn window_of(f: &ScalarFunction) -> (f64, f64) {
    f.interval().sampling_window()
}

/// Draw one of the four unital map kinds. Block pinches need an even input
/// dimension, so that arm rounds the requested dimension down (never below
/// two); the adjusted dimension is returned alongside the map.
fn draw_unital_map(rng: &mut ChaCha8Rng, dim: usize) -> (PositiveMapSpec, usize) {
    match rng.gen_range(0..4u8) {
        0 => {
            let dim = if dim % 2 == 1 { (dim - 1).max(2) } else { dim };
            let alpha = 0.05 + 0.9 * rng.gen::<f64>();
            (
                PositiveMapSpec::block_pinch(alpha).expect("alpha lies in (0, 1)"),
                dim,
            )
        }
        1 => (schur_unital(rng, dim), dim),
        2 => {
            let count = rng.gen_range(2..=4usize);
            (unital_kraus(rng, dim, count), dim)
        }
        _ => (
            PositiveMapSpec::block_expectation(random_partition(rng, dim))
                .expect("random partitions are valid"),
            dim,
        ),
    }
}

fn draw_shift(rng: &mut ChaCha8Rng) -> f64 {
    2.0 * rng.gen::<f64>()
}

fn state_pool_function(rng: &mut ChaCha8Rng) -> ScalarFunction {
    match rng.gen_range(0..4u8) {
        0 => builtin_fn("abs", &[]).expect("builtin"),
        1 => builtin_fn("exp", &[]).expect("builtin"),
        2 => builtin_fn("shifted_square", &[("c", draw_shift(rng))]).expect("builtin"),
        _ => builtin_fn("power", &[("r", 2.0)]).expect("builtin"),
    }
}

fn spectral_pool_function(rng: &mut ChaCha8Rng) -> ScalarFunction {
    match rng.gen_range(0..4u8) {
        0 => builtin_fn("exp", &[]).expect("builtin"),
        1 => builtin_fn("relu", &[]).expect("builtin"),
        2 => builtin_fn("power", &[("r", 2.0)]).expect("builtin"),
        _ => builtin_fn("shifted_abs", &[("c", draw_shift(rng))]).expect("builtin"),
    }
}

fn majorization_pool_function(rng: &mut ChaCha8Rng) -> ScalarFunction {
    match rng.gen_range(0..3u8) {
        0 => builtin_fn("abs", &[]).expect("builtin"),
        1 => builtin_fn("shifted_square", &[("c", 1.0)]).expect("builtin"),
        _ => builtin_fn("shifted_square", &[("c", draw_shift(rng))]).expect("builtin"),
    }
}

fn commuting_pool_function(rng: &mut ChaCha8Rng) -> ScalarFunction {
    match rng.gen_range(0..3u8) {
        0 => builtin_fn("abs", &[]).expect("builtin"),
        1 => builtin_fn("exp", &[]).expect("builtin"),
        _ => builtin_fn("shifted_square", &[("c", draw_shift(rng))]).expect("builtin"),
    }
}

fn outer_pool_function(rng: &mut ChaCha8Rng) -> ScalarFunction {
    match rng.gen_range(0..3u8) {
        0 => builtin_fn("relu", &[]).expect("builtin"),
        1 => builtin_fn("exp", &[]).expect("builtin"),
        _ => builtin_fn("identity", &[]).expect("builtin"),
    }
}

fn multivar_pool_function(rng: &mut ChaCha8Rng, arity: usize) -> ScalarFunction {
    let n = ("n", arity as f64);
    match rng.gen_range(0..3u8) {
        0 => builtin_fn("sum", &[n]).expect("builtin"),
        1 => builtin_fn("max", &[n]).expect("builtin"),
        _ => builtin_fn("sumsq", &[n]).expect("builtin"),
    }
}

/// Pre-drawn pool of operator-convex functions in transform form:
/// `alpha + beta t + gamma t^2` plus up to three positive atoms.
fn loewner_function_pool(seed: u64, size: usize) -> Vec<ScalarFunction> {
    let mut rng = rng_for(seed, POOL_STREAM);
    (0..size)
        .map(|_| {
            let alpha = 2.0 * rng.gen::<f64>();
            let beta = 2.0 * rng.gen::<f64>();
            let gamma = 2.0 * rng.gen::<f64>();
            let atom_count = rng.gen_range(0..=3usize);
            let atoms: Vec<(f64, f64)> = (0..atom_count)
                .map(|_| (3.0 * rng.gen::<f64>(), 0.1 + 0.9 * rng.gen::<f64>()))
                .collect();
            let m = OperatorConvexMeasure::new(alpha, beta, gamma, atoms)
                .expect("drawn coefficients are admissible");
            operator_convex_from_measure(&m)
        })
        .collect()
}

const LIAPUNOV_EXPONENTS: [f64; 4] = [1.0, 1.5, 2.0, 3.0];
const HOLDER_EXPONENTS: [f64; 3] = [1.5, 2.0, 3.0];

// ---------------------------------------------------------------------------
// Campaign runner

struct TrialOutcome {
    report: InequalityReport,
    dim: usize,
    function_label: String,
    map_kind: String,
}

fn run_trial(
    cfg: &CampaignConfig,
    pool: &[ScalarFunction],
    trial: u64,
) -> Result<TrialOutcome> {
    let mut rng = rng_for(cfg.seed, trial);
    let dim = rng.gen_range(cfg.dim_min..=cfg.dim_max);
    let override_f = cfg.function_override.as_ref();

    match cfg.theorem {
        TheoremId::JensenState => {
            let f = override_f.cloned().unwrap_or_else(|| state_pool_function(&mut rng));
            let rho = random_state(&mut rng, dim);
            let a = hermitian_with_spectrum_in(&mut rng, window_of(&f), dim);
            let report = jensen_state(&f, &rho, &a)?;
            Ok(TrialOutcome {
                report,
                dim,
                function_label: f.label().to_string(),
                map_kind: "state".to_string(),
            })
        }
        TheoremId::JensenLoewner => {
            let f = match override_f {
                Some(f) => f.clone(),
                None => pool[rng.gen_range(0..pool.len())].clone(),
            };
            let (phi, dim) = draw_unital_map(&mut rng, dim);
            let a = hermitian_with_spectrum_in(&mut rng, window_of(&f), dim);
            let report = jensen_loewner(&f, &phi, &a)?;
            let map_kind = phi.kind().to_string();
            Ok(TrialOutcome {
                report,
                dim,
                function_label: f.label().to_string(),
                map_kind,
            })
        }
        TheoremId::JensenSpectral => {
            let f = override_f.cloned().unwrap_or_else(|| spectral_pool_function(&mut rng));
            let (phi, dim) = draw_unital_map(&mut rng, dim);
            let a = hermitian_with_spectrum_in(&mut rng, window_of(&f), dim);
            let report = jensen_spectral(&f, &phi, &a)?;
            let map_kind = phi.kind().to_string();
            Ok(TrialOutcome {
                report,
                dim,
                function_label: f.label().to_string(),
                map_kind,
            })
        }
        TheoremId::JensenCommuting => {
            let f = override_f.cloned().unwrap_or_else(|| commuting_pool_function(&mut rng));
            let phi = if rng.gen_bool(0.5) {
                PositiveMapSpec::state(random_state(&mut rng, dim)).expect("states are valid")
            } else {
                PositiveMapSpec::block_expectation(singleton_partition(dim))
                    .expect("singleton partitions are valid")
            };
            let a = hermitian_with_spectrum_in(&mut rng, window_of(&f), dim);
            let report = jensen_commuting(&f, &phi, &a)?;
            let map_kind = phi.kind().to_string();
            Ok(TrialOutcome {
                report,
                dim,
                function_label: f.label().to_string(),
                map_kind,
            })
        }
        TheoremId::JensenConditional => {
            let f = override_f.cloned().unwrap_or_else(|| commuting_pool_function(&mut rng));
            let g = outer_pool_function(&mut rng);
            // Two centralizer scenarios: the normalized trace accepts any
            // unital map; a diagonal expectation needs diagonal images.
            let (phi, e, dim) = if rng.gen_bool(0.5) {
                let (phi, dim) = draw_unital_map(&mut rng, dim);
                // The expectation acts on the map's output side, which a
                // block pinch halves.
                let out = phi.output_dim(dim)?;
                let e = PositiveMapSpec::state(
                    HermitianMatrix::identity(out).scale(1.0 / out as f64),
                )
                .expect("the uniform state is valid");
                (phi, e, dim)
            } else {
                let pinch = PositiveMapSpec::block_expectation(singleton_partition(dim))
                    .expect("singleton partitions are valid");
                (pinch.clone(), pinch, dim)
            };
            let a = hermitian_with_spectrum_in(&mut rng, window_of(&f), dim);
            let report = jensen_conditional(&f, &g, &phi, &e, &a)?;
            let map_kind = phi.kind().to_string();
            Ok(TrialOutcome {
                report,
                dim,
                function_label: format!("{} . {}", g.label(), f.label()),
                map_kind,
            })
        }
        TheoremId::JensenMajorization => {
            let f = override_f.cloned().unwrap_or_else(|| majorization_pool_function(&mut rng));
            let (phi, dim) = draw_unital_map(&mut rng, dim);
            let a = hermitian_with_spectrum_in(&mut rng, window_of(&f), dim);
            let report = jensen_majorization(&f, &phi, &a)?;
            let map_kind = phi.kind().to_string();
            Ok(TrialOutcome {
                report,
                dim,
                function_label: f.label().to_string(),
                map_kind,
            })
        }
        TheoremId::JensenMultivarLoewner | TheoremId::JensenMultivarMajorization => {
            let arity = rng.gen_range(1..=3usize);
            let f = match override_f {
                Some(f) => f.clone(),
                None => multivar_pool_function(&mut rng, arity),
            };
            if f.arity() != arity {
                return Err(Error::BadParameter {
                    detail: format!(
                        "function override has arity {}, trial drew arity {arity}",
                        f.arity()
                    ),
                });
            }
            // A common eigenbasis keeps the tuple and its images commuting.
            let u = haar_unitary(&mut rng, dim);
            let mut matrices = Vec::with_capacity(arity);
            let mut scale = 0.0f64;
            for i in 0..arity {
                let window = f.domain()[i].sampling_window();
                let spectrum = uniform_spectrum(&mut rng, window, dim);
                let m = HermitianMatrix::from_real_diagonal(&spectrum).conjugate_by(&u);
                scale = scale.max(m.max_abs_entry());
                matrices.push(m);
            }
            let t = make_commuting_tuple(matrices, tol::commutation(scale))?;
            let phi = if rng.gen_bool(0.5) {
                PositiveMapSpec::block_expectation(singleton_partition(dim))
                    .expect("singleton partitions are valid")
            } else {
                PositiveMapSpec::state(random_state(&mut rng, dim)).expect("states are valid")
            };
            let variant = if cfg.theorem == TheoremId::JensenMultivarLoewner {
                MultivarVariant::Loewner
            } else {
                MultivarVariant::Majorization
            };
            let report = jensen_multivar(&f, &phi, &t, variant)?;
            let map_kind = phi.kind().to_string();
            Ok(TrialOutcome {
                report,
                dim,
                function_label: f.label().to_string(),
                map_kind,
            })
        }
        TheoremId::InformationInequality => {
            let count = rng.gen_range(2..=3usize);
            let atoms = information_atoms(&mut rng, dim, count);
            let report = information_inequality(&atoms)?;
            Ok(TrialOutcome {
                report,
                dim,
                function_label: format!("atoms={count}"),
                map_kind: "discrete_density".to_string(),
            })
        }
        TheoremId::Liapunov => {
            let mut r = LIAPUNOV_EXPONENTS[rng.gen_range(0..LIAPUNOV_EXPONENTS.len())];
            let mut s = LIAPUNOV_EXPONENTS[rng.gen_range(0..LIAPUNOV_EXPONENTS.len())];
            if r > s {
                std::mem::swap(&mut r, &mut s);
            }
            let (phi, dim) = if rng.gen_bool(0.25) {
                let count = rng.gen_range(2..=4usize);
                (contractive_kraus(&mut rng, dim, count), dim)
            } else {
                draw_unital_map(&mut rng, dim)
            };
            let a = hermitian_with_spectrum_in(&mut rng, (0.2, 3.8), dim);
            let report = liapunov(&phi, &a, r, s)?;
            let map_kind = phi.kind().to_string();
            Ok(TrialOutcome {
                report,
                dim,
                function_label: format!("r={r}, s={s}"),
                map_kind,
            })
        }
        TheoremId::Holder => {
            let p = HOLDER_EXPONENTS[rng.gen_range(0..HOLDER_EXPONENTS.len())];
            let q = p / (p - 1.0);
            let (c, d) = holder_weight_pair(&mut rng, dim, q);
            let a = hermitian_with_spectrum_in(&mut rng, (0.05, 2.0), dim);
            let b = hermitian_with_spectrum_in(&mut rng, (0.05, 2.0), dim);
            let report = holder(&c, &d, &a, &b, p, q)?;
            Ok(TrialOutcome {
                report,
                dim,
                function_label: format!("p={p}"),
                map_kind: "trace".to_string(),
            })
        }
    }
}

/// Run a seeded campaign and aggregate its outcomes.
pub fn run_campaign(cfg: &CampaignConfig) -> Result<CampaignSummary> {
    if cfg.trials < 1 {
        return Err(Error::BadParameter {
            detail: "campaign needs at least one trial".to_string(),
        });
    }
    if cfg.dim_min < 1 || cfg.dim_min > cfg.dim_max {
        return Err(Error::BadParameter {
            detail: format!(
                "invalid dimension range {}..={}",
                cfg.dim_min, cfg.dim_max
            ),
        });
    }

    let pool = if cfg.theorem == TheoremId::JensenLoewner && cfg.function_override.is_none() {
        loewner_function_pool(cfg.seed, 20)
    } else {
        Vec::new()
    };

    let mut records = Vec::with_capacity(cfg.trials as usize);
    let mut asserted_trials = 0u64;
    let mut asserted_failures = 0u64;
    let mut exploratory_trials = 0u64;
    let mut exploratory_violations = 0u64;
    let mut min_margin = f64::INFINITY;
    let mut min_margin_trial = 0u64;
    let mut min_asserted: Option<(f64, u64)> = None;
    let mut worst_violation: Option<(u64, InequalityReport)> = None;

    for trial in 0..cfg.trials {
        let outcome = run_trial(cfg, &pool, trial)?;
        let report = outcome.report;
        let margin = report.verdict.min_margin();
        let holds = report.verdict.holds;

        if report.hypotheses_ok {
            asserted_trials += 1;
            if !holds {
                asserted_failures += 1;
            }
            match min_asserted {
                Some((m, _)) if m <= margin => {}
                _ => min_asserted = Some((margin, trial)),
            }
        } else {
            exploratory_trials += 1;
            if !holds {
                exploratory_violations += 1;
            }
        }
        if margin < min_margin {
            min_margin = margin;
            min_margin_trial = trial;
        }
        if !holds {
            let is_worse = match &worst_violation {
                Some((_, prev)) => margin < prev.verdict.min_margin(),
                None => true,
            };
            if is_worse {
                worst_violation = Some((trial, report.clone()));
            }
        }
        records.push(TrialRecord {
            trial,
            dim: outcome.dim,
            holds,
            hypotheses_ok: report.hypotheses_ok,
            min_margin: margin,
            function_label: outcome.function_label,
            map_kind: outcome.map_kind,
        });
    }

    Ok(CampaignSummary {
        theorem_id: cfg.theorem.name().to_string(),
        seed: cfg.seed,
        trials: cfg.trials,
        dim_min: cfg.dim_min,
        dim_max: cfg.dim_max,
        asserted_trials,
        asserted_failures,
        exploratory_trials,
        exploratory_violations,
        min_margin,
        min_margin_trial,
        min_asserted_margin: min_asserted.map(|(m, _)| m),
        min_asserted_margin_trial: min_asserted.map(|(_, t)| t),
        records,
        worst_violation,
    })
}
