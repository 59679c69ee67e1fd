//! Command-line front end: verify single inequality instances from JSON
//! inputs, run seeded falsification campaigns, and emit the canned reference
//! computations.
//!
//! Exit codes for `verify`: 0 — hypotheses hold and the inequality holds;
//! 1 — hypotheses hold but the inequality fails (an asserted violation);
//! 2 — a hypothesis failed, so the written report is exploratory;
//! 3 — the inputs could not be processed at all. `fuzz` exits 1 when a
//! campaign records an asserted failure, and `repro` exits 0 once the
//! reference values are written. Reports are written atomically (to a
//! temporary file in the target directory, then renamed into place).

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use majorize::campaign::{run_campaign, CampaignConfig, TheoremId};
use majorize::error::{Error, Result};
use majorize::hermitian::HermitianMatrix;
use majorize::inequalities::{
    holder, information_inequality, jensen_commuting, jensen_conditional, jensen_loewner,
    jensen_majorization, jensen_multivar, jensen_spectral, jensen_state, liapunov,
    InequalityReport, MultivarVariant,
};
use majorize::json::{
    atoms_from_json, function_from_json, map_from_json, matrix_from_json, report_to_json,
    repro_to_json, summary_to_csv, summary_to_json,
};
use majorize::maps::PositiveMapSpec;
use majorize::preorders::{loewner_leq, spectral_leq, weak_majorization_leq};
use majorize::repro::run_repro;
use majorize::{tol, ScalarFunction};

#[derive(Parser)]
#[command(
    name = "majorize",
    version,
    about = "Check Jensen-type operator inequalities on concrete matrices"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check one inequality instance loaded from JSON files.
    Verify(VerifyArgs),
    /// Run a seeded randomized campaign against one inequality.
    Fuzz(FuzzArgs),
    /// Emit a named reference computation with pinned values.
    Repro(ReproArgs),
}

#[derive(Args)]
struct VerifyArgs {
    /// Inequality to check (e.g. jensen_loewner, liapunov, holder).
    #[arg(long)]
    theorem: String,
    /// Scalar function file; pass twice for jensen_conditional (inner, then
    /// outer).
    #[arg(long = "function")]
    functions: Vec<PathBuf>,
    /// Positive map file; pass twice for jensen_conditional (map, then
    /// conditional expectation).
    #[arg(long = "map")]
    maps: Vec<PathBuf>,
    /// Hermitian matrix file; repeat for multivariable tuples and for
    /// holder's (c, d, a, b).
    #[arg(long = "input")]
    inputs: Vec<PathBuf>,
    /// Atom family file for information_inequality.
    #[arg(long)]
    atoms: Option<PathBuf>,
    /// Lower exponent for liapunov.
    #[arg(long)]
    r: Option<f64>,
    /// Upper exponent for liapunov.
    #[arg(long)]
    s: Option<f64>,
    /// First Hölder exponent.
    #[arg(long)]
    p: Option<f64>,
    /// Second Hölder exponent (conjugate to --p).
    #[arg(long)]
    q: Option<f64>,
    /// Override the verdict tolerance.
    #[arg(long)]
    tol: Option<f64>,
    /// Report destination; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Report format; verify reports are always JSON.
    #[arg(long, default_value = "json")]
    format: String,
}

#[derive(Args)]
struct FuzzArgs {
    /// Inequality to fuzz.
    #[arg(long)]
    theorem: String,
    /// Campaign seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of independent trials.
    #[arg(long, default_value_t = 100)]
    trials: u64,
    /// Largest matrix dimension; trials draw dimensions from 2 up to this.
    #[arg(long, default_value_t = 6)]
    dim: usize,
    /// Replace the drawn scalar function in every trial (violation hunting).
    #[arg(long = "function")]
    function: Option<PathBuf>,
    /// Summary destination; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Summary format: json or csv.
    #[arg(long, default_value = "json")]
    format: String,
}

#[derive(Args)]
struct ReproArgs {
    /// Name of the reference computation (aujla-silva).
    name: String,
    /// Report destination; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 3,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    let code = match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            3
        }
    };
    std::process::exit(code);
}

fn dispatch(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Verify(args) => cmd_verify(args),
        Command::Fuzz(args) => cmd_fuzz(args),
        Command::Repro(args) => cmd_repro(args),
    }
}

fn log(msg: &str) {
    if std::env::var_os("MAJORIZE_LOG").is_some() {
        eprintln!("[majorize] {msg}");
    }
}

fn now_unix_ms() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_millis() as u64)
        .unwrap_or(0)
}

fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::ParseError {
        detail: format!("{}: {e}", path.display()),
    })
}

/// Write via a temporary file in the same directory, then rename into
/// place, so readers never observe a half-written report.
fn write_atomic(path: &Path, content: &str) -> Result<()> {
    let io_err = |e: std::io::Error| Error::ParseError {
        detail: format!("{}: {e}", path.display()),
    };
    let file_name = path
        .file_name()
        .ok_or_else(|| Error::ParseError {
            detail: format!("{}: not a file path", path.display()),
        })?
        .to_string_lossy()
        .into_owned();
    let tmp = path.with_file_name(format!("{file_name}.{}.tmp", std::process::id()));
    fs::write(&tmp, content).map_err(io_err)?;
    fs::rename(&tmp, path).map_err(io_err)?;
    Ok(())
}

fn emit(out: Option<&Path>, content: &str) -> Result<()> {
    match out {
        Some(path) => {
            write_atomic(path, content)?;
            log(&format!("wrote {}", path.display()));
        }
        None => println!("{content}"),
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// verify

fn load_functions(paths: &[PathBuf], want: usize, theorem: &str) -> Result<Vec<ScalarFunction>> {
    if paths.len() != want {
        return Err(Error::BadParameter {
            detail: format!(
                "{theorem} needs {want} --function file(s), got {}",
                paths.len()
            ),
        });
    }
    paths.iter().map(|p| function_from_json(&read_file(p)?)).collect()
}

fn load_maps(paths: &[PathBuf], want: usize, theorem: &str) -> Result<Vec<PositiveMapSpec>> {
    if paths.len() != want {
        return Err(Error::BadParameter {
            detail: format!("{theorem} needs {want} --map file(s), got {}", paths.len()),
        });
    }
    paths.iter().map(|p| map_from_json(&read_file(p)?)).collect()
}

fn load_inputs(paths: &[PathBuf], want: usize, theorem: &str) -> Result<Vec<HermitianMatrix>> {
    if paths.len() != want {
        return Err(Error::BadParameter {
            detail: format!(
                "{theorem} needs {want} --input file(s), got {}",
                paths.len()
            ),
        });
    }
    paths.iter().map(|p| matrix_from_json(&read_file(p)?)).collect()
}

fn required<T: Copy>(value: Option<T>, flag: &str, theorem: &str) -> Result<T> {
    value.ok_or_else(|| Error::BadParameter {
        detail: format!("{theorem} needs --{flag}"),
    })
}

fn build_report(theorem: TheoremId, args: &VerifyArgs) -> Result<InequalityReport> {
    let name = theorem.name();
    match theorem {
        TheoremId::JensenState => {
            let f = &load_functions(&args.functions, 1, name)?[0];
            let map = &load_maps(&args.maps, 1, name)?[0];
            let rho = match map {
                PositiveMapSpec::State { rho } => rho.clone(),
                other => {
                    return Err(Error::BadParameter {
                        detail: format!("{name} needs a state map, got {}", other.kind()),
                    })
                }
            };
            let a = &load_inputs(&args.inputs, 1, name)?[0];
            jensen_state(f, &rho, a)
        }
        TheoremId::JensenLoewner => {
            let f = &load_functions(&args.functions, 1, name)?[0];
            let phi = &load_maps(&args.maps, 1, name)?[0];
            let a = &load_inputs(&args.inputs, 1, name)?[0];
            jensen_loewner(f, phi, a)
        }
        TheoremId::JensenSpectral => {
            let f = &load_functions(&args.functions, 1, name)?[0];
            let phi = &load_maps(&args.maps, 1, name)?[0];
            let a = &load_inputs(&args.inputs, 1, name)?[0];
            jensen_spectral(f, phi, a)
        }
        TheoremId::JensenCommuting => {
            let f = &load_functions(&args.functions, 1, name)?[0];
            let phi = &load_maps(&args.maps, 1, name)?[0];
            let a = &load_inputs(&args.inputs, 1, name)?[0];
            jensen_commuting(f, phi, a)
        }
        TheoremId::JensenConditional => {
            let fs = load_functions(&args.functions, 2, name)?;
            let maps = load_maps(&args.maps, 2, name)?;
            let a = &load_inputs(&args.inputs, 1, name)?[0];
            jensen_conditional(&fs[0], &fs[1], &maps[0], &maps[1], a)
        }
        TheoremId::JensenMajorization => {
            let f = &load_functions(&args.functions, 1, name)?[0];
            let phi = &load_maps(&args.maps, 1, name)?[0];
            let a = &load_inputs(&args.inputs, 1, name)?[0];
            jensen_majorization(f, phi, a)
        }
        TheoremId::JensenMultivarLoewner | TheoremId::JensenMultivarMajorization => {
            let f = &load_functions(&args.functions, 1, name)?[0];
            let phi = &load_maps(&args.maps, 1, name)?[0];
            if args.inputs.is_empty() {
                return Err(Error::BadParameter {
                    detail: format!("{name} needs at least one --input file"),
                });
            }
            let matrices = load_inputs(&args.inputs, args.inputs.len(), name)?;
            let scale = matrices
                .iter()
                .map(HermitianMatrix::max_abs_entry)
                .fold(0.0, f64::max);
            let t = majorize::make_commuting_tuple(matrices, tol::commutation(scale))?;
            let variant = if theorem == TheoremId::JensenMultivarLoewner {
                MultivarVariant::Loewner
            } else {
                MultivarVariant::Majorization
            };
            jensen_multivar(f, phi, &t, variant)
        }
        TheoremId::InformationInequality => {
            let path = args.atoms.as_ref().ok_or_else(|| Error::BadParameter {
                detail: format!("{name} needs --atoms"),
            })?;
            let atoms = atoms_from_json(&read_file(path)?)?;
            information_inequality(&atoms)
        }
        TheoremId::Liapunov => {
            let phi = &load_maps(&args.maps, 1, name)?[0];
            let a = &load_inputs(&args.inputs, 1, name)?[0];
            let r = required(args.r, "r", name)?;
            let s = required(args.s, "s", name)?;
            liapunov(phi, a, r, s)
        }
        TheoremId::Holder => {
            let m = load_inputs(&args.inputs, 4, name)?;
            let p = required(args.p, "p", name)?;
            let q = required(args.q, "q", name)?;
            holder(&m[0], &m[1], &m[2], &m[3], p, q)
        }
    }
}

/// Re-decide the stored comparison with a caller-supplied tolerance, using
/// the same order relation the theorem asserts.
fn apply_tol_override(
    mut report: InequalityReport,
    theorem: TheoremId,
    tol: f64,
) -> Result<InequalityReport> {
    if !(tol.is_finite() && tol >= 0.0) {
        return Err(Error::BadParameter {
            detail: format!("tolerance override must be a non-negative real, got {tol}"),
        });
    }
    report.verdict = match theorem {
        TheoremId::JensenSpectral => spectral_leq(&report.lhs, &report.rhs, tol)?,
        TheoremId::JensenMajorization | TheoremId::JensenMultivarMajorization => {
            weak_majorization_leq(&report.lhs, &report.rhs, tol)?
        }
        _ => loewner_leq(&report.lhs, &report.rhs, tol)?,
    };
    report.tol = tol;
    Ok(report)
}

fn cmd_verify(args: VerifyArgs) -> Result<i32> {
    if args.format != "json" {
        return Err(Error::BadParameter {
            detail: format!("verify reports are JSON only, got format {:?}", args.format),
        });
    }
    let theorem: TheoremId = args.theorem.parse()?;
    let mut report = build_report(theorem, &args)?;
    if let Some(tol) = args.tol {
        report = apply_tol_override(report, theorem, tol)?;
    }
    log(&format!(
        "{}: hypotheses_ok={} holds={} min_margin={:.3e}",
        theorem,
        report.hypotheses_ok,
        report.verdict.holds,
        report.verdict.min_margin()
    ));
    let text = report_to_json(&report, Some(now_unix_ms()));
    emit(args.out.as_deref(), &text)?;
    Ok(if !report.hypotheses_ok {
        2
    } else if report.verdict.holds {
        0
    } else {
        1
    })
}

// ---------------------------------------------------------------------------
// fuzz

fn cmd_fuzz(args: FuzzArgs) -> Result<i32> {
    let theorem: TheoremId = args.theorem.parse()?;
    if args.dim < 2 {
        return Err(Error::BadParameter {
            detail: format!("--dim must be at least 2, got {}", args.dim),
        });
    }
    let mut cfg = CampaignConfig::new(theorem, args.seed, args.trials, 2, args.dim);
    if let Some(path) = &args.function {
        cfg.function_override = Some(function_from_json(&read_file(path)?)?);
    }
    let summary = run_campaign(&cfg)?;
    log(&format!(
        "{}: {} trials, {} asserted failures, {} exploratory violations, min margin {:.3e} at trial {}",
        theorem,
        summary.trials,
        summary.asserted_failures,
        summary.exploratory_violations,
        summary.min_margin,
        summary.min_margin_trial
    ));
    let text = match args.format.as_str() {
        "json" => summary_to_json(&summary, None),
        "csv" => summary_to_csv(&summary),
        other => {
            return Err(Error::BadParameter {
                detail: format!("unknown fuzz format {other:?} (expected json or csv)"),
            })
        }
    };
    emit(args.out.as_deref(), &text)?;
    Ok(if summary.asserted_failures > 0 { 1 } else { 0 })
}

// ---------------------------------------------------------------------------
// repro

fn cmd_repro(args: ReproArgs) -> Result<i32> {
    let report = run_repro(&args.name)?;
    let text = repro_to_json(&report, Some(now_unix_ms()));
    emit(args.out.as_deref(), &text)?;
    Ok(0)
}
