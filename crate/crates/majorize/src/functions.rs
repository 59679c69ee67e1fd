//! Scalar function descriptors: evaluators over an open interval (or box)
//! plus convexity/monotonicity metadata, the named builtin registry, and
//! synthesis of operator-convex functions from a quadratic-plus-atoms
//! measure representation.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Open interval `(lo, hi)`; either end may be infinite. Membership checks
/// carry explicit slack so eigenvalues a rounding error outside still pass.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub const REAL_LINE: Interval = Interval {
        lo: f64::NEG_INFINITY,
        hi: f64::INFINITY,
    };

    pub const POSITIVE: Interval = Interval {
        lo: 0.0,
        hi: f64::INFINITY,
    };

    pub fn new(lo: f64, hi: f64) -> Self {
        Interval { lo, hi }
    }

    pub fn contains(&self, t: f64, slack: f64) -> bool {
        t >= self.lo - slack && t <= self.hi + slack
    }

    /// Closed sub-interval suitable for sampling spectra: infinite ends are
    /// clamped to +-4 and the result is shrunk by 5% from each end, so
    /// sampled eigenvalues stay robustly inside the open domain.
    pub fn sampling_window(&self) -> (f64, f64) {
        let lo = self.lo.max(-4.0);
        let hi = self.hi.min(4.0);
        let width = hi - lo;
        (lo + 0.05 * width, hi - 0.05 * width)
    }
}

/// Claims about a scalar function. These are *claims*: property tests probe
/// them numerically, and the inequality checkers treat them as hypotheses.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct FunctionFlags {
    pub convex: bool,
    pub concave: bool,
    pub monotone_increasing: bool,
    pub monotone_decreasing: bool,
    pub operator_convex_claimed: bool,
    pub operator_concave_claimed: bool,
}

/// A scalar function of one or several real variables with an open domain
/// and convexity/monotonicity metadata.
#[derive(Clone)]
pub struct ScalarFunction {
    arity: usize,
    domain: Vec<Interval>,
    eval: Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>,
    flags: FunctionFlags,
    label: String,
    /// Canonical constructor description for digests (name + params).
    descriptor: String,
}

impl std::fmt::Debug for ScalarFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ScalarFunction")
            .field("arity", &self.arity)
            .field("domain", &self.domain)
            .field("flags", &self.flags)
            .field("label", &self.label)
            .finish()
    }
}

impl ScalarFunction {
    pub fn new_1d(
        label: impl Into<String>,
        domain: Interval,
        flags: FunctionFlags,
        eval: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        let label = label.into();
        ScalarFunction {
            arity: 1,
            domain: vec![domain],
            eval: Arc::new(move |x: &[f64]| eval(x[0])),
            flags,
            descriptor: label.clone(),
            label,
        }
    }

    pub fn new_nd(
        label: impl Into<String>,
        domain: Vec<Interval>,
        flags: FunctionFlags,
        eval: impl Fn(&[f64]) -> f64 + Send + Sync + 'static,
    ) -> Self {
        assert!(!domain.is_empty());
        let label = label.into();
        ScalarFunction {
            arity: domain.len(),
            domain,
            eval: Arc::new(eval),
            flags,
            descriptor: label.clone(),
            label,
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn flags(&self) -> FunctionFlags {
        self.flags
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn descriptor(&self) -> &str {
        &self.descriptor
    }

    /// Domain of an arity-1 function.
    pub fn interval(&self) -> Interval {
        assert_eq!(self.arity, 1, "interval() requires an arity-1 function");
        self.domain[0]
    }

    /// Per-coordinate domain box.
    pub fn domain(&self) -> &[Interval] {
        &self.domain
    }

    pub fn eval1(&self, t: f64) -> f64 {
        assert_eq!(self.arity, 1, "eval1() requires an arity-1 function");
        (self.eval)(&[t])
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        assert_eq!(x.len(), self.arity, "arity mismatch in eval");
        (self.eval)(x)
    }

    /// Lift an arity-1 function to an arity-1 "multivariable" view; useful
    /// when feeding single-variable functions to the joint calculus.
    pub fn as_multivar(&self) -> ScalarFunction {
        self.clone()
    }
}

fn flags(
    convex: bool,
    concave: bool,
    inc: bool,
    dec: bool,
    op_convex: bool,
    op_concave: bool,
) -> FunctionFlags {
    FunctionFlags {
        convex,
        concave,
        monotone_increasing: inc,
        monotone_decreasing: dec,
        operator_convex_claimed: op_convex,
        operator_concave_claimed: op_concave,
    }
}

/// Look up a named builtin function.
///
/// Single-variable names: `power` (param `r`), `log`, `neg_xlogx`, `abs`,
/// `exp`, `relu`, `identity`, `constant` (param `c`), `shifted_abs`
/// (param `c`, the function `|t| - c` on `[0, inf)`), `shifted_square`
/// (param `c`, the function `(t - c)^2` on the whole line).
/// Multivariable names (param `n` = arity): `sum`, `max`, `sumsq`.
pub fn builtin(name: &str, params: &BTreeMap<String, f64>) -> Result<ScalarFunction> {
    let get = |key: &str| -> Result<f64> {
        params.get(key).copied().ok_or_else(|| Error::BadParameter {
            detail: format!("builtin {name:?} needs parameter {key:?}"),
        })
    };
    match name {
        "power" => power(get("r")?),
        "log" => Ok(ScalarFunction::new_1d(
            "log",
            Interval::POSITIVE,
            flags(false, true, true, false, false, true),
            f64::ln,
        )),
        "neg_xlogx" => Ok(ScalarFunction::new_1d(
            "neg_xlogx",
            Interval::POSITIVE,
            flags(false, true, false, false, false, true),
            |t| if t == 0.0 { 0.0 } else { -t * t.ln() },
        )),
        "abs" => Ok(ScalarFunction::new_1d(
            "abs",
            Interval::REAL_LINE,
            flags(true, false, false, false, false, false),
            f64::abs,
        )),
        "exp" => Ok(ScalarFunction::new_1d(
            "exp",
            Interval::REAL_LINE,
            flags(true, false, true, false, false, false),
            f64::exp,
        )),
        "relu" => Ok(ScalarFunction::new_1d(
            "relu",
            Interval::REAL_LINE,
            flags(true, false, true, false, false, false),
            |t| t.max(0.0),
        )),
        "identity" => Ok(ScalarFunction::new_1d(
            "identity",
            Interval::REAL_LINE,
            flags(true, true, true, false, true, true),
            |t| t,
        )),
        "constant" => {
            let c = get("c")?;
            Ok(ScalarFunction::new_1d(
                format!("constant({c})"),
                Interval::REAL_LINE,
                flags(true, true, true, true, true, true),
                move |_| c,
            ))
        }
        "shifted_abs" => {
            // |t| - c restricted to the non-negative half line, where it is
            // affine and increasing; c >= 0 gives f(0) <= 0.
            let c = get("c")?;
            Ok(ScalarFunction::new_1d(
                format!("shifted_abs({c})"),
                Interval::POSITIVE,
                flags(true, true, true, false, true, true),
                move |t| t.abs() - c,
            ))
        }
        "shifted_square" => {
            let c = get("c")?;
            Ok(ScalarFunction::new_1d(
                format!("shifted_square({c})"),
                Interval::REAL_LINE,
                flags(true, false, false, false, true, false),
                move |t| (t - c) * (t - c),
            ))
        }
        "sum" | "max" | "sumsq" => {
            let n = get("n")? as usize;
            if n < 1 {
                return Err(Error::BadParameter {
                    detail: format!("builtin {name:?} needs arity n >= 1"),
                });
            }
            let domain = vec![Interval::REAL_LINE; n];
            Ok(match name {
                "sum" => ScalarFunction::new_nd(
                    format!("sum(n={n})"),
                    domain,
                    flags(true, true, true, false, true, true),
                    |x: &[f64]| x.iter().sum(),
                ),
                "max" => ScalarFunction::new_nd(
                    format!("max(n={n})"),
                    domain,
                    flags(true, false, true, false, false, false),
                    |x: &[f64]| x.iter().copied().fold(f64::NEG_INFINITY, f64::max),
                ),
                _ => ScalarFunction::new_nd(
                    format!("sumsq(n={n})"),
                    domain,
                    flags(true, false, false, false, false, false),
                    |x: &[f64]| x.iter().map(|t| t * t).sum(),
                ),
            })
        }
        _ => Err(Error::UnknownName {
            name: name.to_string(),
        }),
    }
}

/// Convenience wrapper over [`builtin`] taking params as a slice.
pub fn builtin_fn(name: &str, params: &[(&str, f64)]) -> Result<ScalarFunction> {
    let map: BTreeMap<String, f64> = params
        .iter()
        .map(|(k, v)| (k.to_string(), *v))
        .collect();
    builtin(name, &map)
}

/// `t^r` on `(0, inf)`.
///
/// Flags follow the classical facts on the positive half line: convex for
/// `r <= 0` or `r >= 1`, concave for `0 <= r <= 1`, and operator
/// convex/concave exactly for `r` in `[-1, 0] u [1, 2]` / `[0, 1]`.
pub fn power(r: f64) -> Result<ScalarFunction> {
    if !r.is_finite() {
        return Err(Error::BadParameter {
            detail: format!("power exponent must be finite, got {r}"),
        });
    }
    let convex = r <= 0.0 || r >= 1.0;
    let concave = (0.0..=1.0).contains(&r);
    let op_convex = (-1.0..=0.0).contains(&r) || (1.0..=2.0).contains(&r);
    let op_concave = (0.0..=1.0).contains(&r);
    Ok(ScalarFunction::new_1d(
        format!("power({r})"),
        Interval::POSITIVE,
        flags(convex, concave, r > 0.0, r < 0.0, op_convex, op_concave),
        move |t| t.powf(r),
    ))
}

/// An operator-convex function on `(0, inf)` given by
/// `f(t) = alpha + beta t + gamma t^2 + sum_k mass_k * lambda_k t^2 / (1 + lambda_k t)`
/// with `gamma >= 0`, atom positions `lambda_k >= 0`, and masses `> 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorConvexMeasure {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    /// `(lambda_k, mass_k)` pairs.
    pub atoms: Vec<(f64, f64)>,
}

impl OperatorConvexMeasure {
    pub fn new(alpha: f64, beta: f64, gamma: f64, atoms: Vec<(f64, f64)>) -> Result<Self> {
        if gamma < 0.0 || !gamma.is_finite() {
            return Err(Error::BadParameter {
                detail: format!("gamma must be finite and >= 0, got {gamma}"),
            });
        }
        if !alpha.is_finite() || !beta.is_finite() {
            return Err(Error::BadParameter {
                detail: "alpha and beta must be finite".to_string(),
            });
        }
        for &(lambda, mass) in &atoms {
            if lambda < 0.0 || !lambda.is_finite() {
                return Err(Error::BadParameter {
                    detail: format!("atom position must be finite and >= 0, got {lambda}"),
                });
            }
            if mass <= 0.0 || !mass.is_finite() {
                return Err(Error::BadParameter {
                    detail: format!("atom mass must be finite and > 0, got {mass}"),
                });
            }
        }
        Ok(OperatorConvexMeasure {
            alpha,
            beta,
            gamma,
            atoms,
        })
    }
}

/// Build the evaluator for an [`OperatorConvexMeasure`]. The result is
/// flagged convex and operator-convex; it is increasing whenever `beta >= 0`.
pub fn operator_convex_from_measure(m: &OperatorConvexMeasure) -> ScalarFunction {
    let mut label = format!("measure(a={:.4}, b={:.4}, g={:.4}", m.alpha, m.beta, m.gamma);
    for (lambda, mass) in &m.atoms {
        let _ = write!(label, ", atom({lambda:.4}, {mass:.4})");
    }
    label.push(')');
    let (alpha, beta, gamma) = (m.alpha, m.beta, m.gamma);
    let atoms = m.atoms.clone();
    ScalarFunction::new_1d(
        label,
        Interval::POSITIVE,
        flags(true, false, beta >= 0.0, false, true, false),
        move |t| {
            let mut y = alpha + beta * t + gamma * t * t;
            for &(lambda, mass) in &atoms {
                y += mass * lambda * t * t / (1.0 + lambda * t);
            }
            y
        },
    )
}
