//! JSON interchange: versioned, language-neutral encodings for matrices,
//! maps, functions, reports, and campaign summaries.
//!
//! Every file format carries a `"schema": 1` field, and complex numbers are
//! encoded as `[re, im]` pairs. Parsers reject unknown schema versions so a
//! future format bump cannot be silently misread.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::campaign::{CampaignSummary, TrialRecord};
use crate::error::{Error, Result};
use crate::functions::{builtin, operator_convex_from_measure, OperatorConvexMeasure, ScalarFunction};
use crate::hermitian::HermitianMatrix;
use crate::inequalities::{HypothesisCheck, InequalityReport};
use crate::maps::PositiveMapSpec;
use crate::preorders::{PreorderVerdict, Witness};
use crate::C64;

/// The one schema version this build reads and writes.
pub const SCHEMA_VERSION: u32 = 1;

fn check_schema(schema: u32, what: &str) -> Result<()> {
    if schema != SCHEMA_VERSION {
        return Err(Error::ParseError {
            detail: format!("{what}: unsupported schema version {schema} (expected {SCHEMA_VERSION})"),
        });
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Complex matrices

/// Row-major complex entries, each as a `[re, im]` pair.
pub type Entries = Vec<Vec<[f64; 2]>>;

pub fn entries_of(m: &DMatrix<C64>) -> Entries {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

pub fn matrix_from_entries(entries: &Entries) -> Result<DMatrix<C64>> {
    let rows = entries.len();
    if rows == 0 {
        return Err(Error::ParseError {
            detail: "matrix entries are empty".to_string(),
        });
    }
    let cols = entries[0].len();
    for (i, row) in entries.iter().enumerate() {
        if row.len() != cols {
            return Err(Error::ParseError {
                detail: format!("row {i} has {} entries, expected {cols}", row.len()),
            });
        }
    }
    Ok(DMatrix::from_fn(rows, cols, |i, j| {
        C64::new(entries[i][j][0], entries[i][j][1])
    }))
}

fn hermitian_from_entries(entries: &Entries) -> Result<HermitianMatrix> {
    HermitianMatrix::new(&matrix_from_entries(entries)?)
}

/// `{ "schema": 1, "entries": [[[re, im], ...], ...] }`
#[derive(Serialize, Deserialize)]
pub struct MatrixFile {
    pub schema: u32,
    pub entries: Entries,
}

pub fn matrix_to_json(m: &HermitianMatrix) -> String {
    let file = MatrixFile {
        schema: SCHEMA_VERSION,
        entries: entries_of(m.matrix()),
    };
    serde_json::to_string_pretty(&file).expect("matrix serialization cannot fail")
}

pub fn matrix_from_json(text: &str) -> Result<HermitianMatrix> {
    let file: MatrixFile = serde_json::from_str(text)?;
    check_schema(file.schema, "matrix file")?;
    hermitian_from_entries(&file.entries)
}

// ---------------------------------------------------------------------------
// Positive maps

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum MapDto {
    ChoiKraus { kraus: Vec<Entries> },
    Schur { b: Entries },
    BlockPinch { alpha: f64 },
    BlockAverage {},
    State { rho: Entries },
    BlockExpectation { partition: Vec<Vec<usize>> },
    DiscreteDensity { atoms: Vec<WeightedAtom> },
}

#[derive(Serialize, Deserialize)]
struct WeightedAtom {
    matrix: Entries,
    weight: f64,
}

/// `{ "schema": 1, "map": { "kind": ..., ... } }`
#[derive(Serialize, Deserialize)]
struct MapFile {
    schema: u32,
    map: MapDto,
}

pub fn map_to_json(phi: &PositiveMapSpec) -> String {
    let map = match phi {
        PositiveMapSpec::ChoiKraus { kraus } => MapDto::ChoiKraus {
            kraus: kraus.iter().map(entries_of).collect(),
        },
        PositiveMapSpec::SchurMultiplier { b } => MapDto::Schur {
            b: entries_of(b.matrix()),
        },
        PositiveMapSpec::BlockPinch { alpha } => MapDto::BlockPinch { alpha: *alpha },
        PositiveMapSpec::BlockAverage => MapDto::BlockAverage {},
        PositiveMapSpec::State { rho } => MapDto::State {
            rho: entries_of(rho.matrix()),
        },
        PositiveMapSpec::BlockDiagonalExpectation { partition } => MapDto::BlockExpectation {
            partition: partition.clone(),
        },
        PositiveMapSpec::DiscreteDensity { atoms } => MapDto::DiscreteDensity {
            atoms: atoms
                .iter()
                .map(|(m, w)| WeightedAtom {
                    matrix: entries_of(m),
                    weight: *w,
                })
                .collect(),
        },
    };
    let file = MapFile {
        schema: SCHEMA_VERSION,
        map,
    };
    serde_json::to_string_pretty(&file).expect("map serialization cannot fail")
}

pub fn map_from_json(text: &str) -> Result<PositiveMapSpec> {
    let file: MapFile = serde_json::from_str(text)?;
    check_schema(file.schema, "map file")?;
    match file.map {
        MapDto::ChoiKraus { kraus } => {
            let kraus = kraus
                .iter()
                .map(matrix_from_entries)
                .collect::<Result<Vec<_>>>()?;
            PositiveMapSpec::choi_kraus(kraus)
        }
        MapDto::Schur { b } => PositiveMapSpec::schur(hermitian_from_entries(&b)?),
        MapDto::BlockPinch { alpha } => PositiveMapSpec::block_pinch(alpha),
        MapDto::BlockAverage {} => Ok(PositiveMapSpec::BlockAverage),
        MapDto::State { rho } => PositiveMapSpec::state(hermitian_from_entries(&rho)?),
        MapDto::BlockExpectation { partition } => PositiveMapSpec::block_expectation(partition),
        MapDto::DiscreteDensity { atoms } => {
            let atoms = atoms
                .iter()
                .map(|a| Ok((matrix_from_entries(&a.matrix)?, a.weight)))
                .collect::<Result<Vec<_>>>()?;
            PositiveMapSpec::discrete_density(atoms)
        }
    }
}

// ---------------------------------------------------------------------------
// Scalar functions

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum FunctionDto {
    Named {
        name: String,
        #[serde(default)]
        params: BTreeMap<String, f64>,
    },
    Measure {
        measure: MeasureDto,
    },
}

#[derive(Serialize, Deserialize)]
struct MeasureDto {
    alpha: f64,
    beta: f64,
    gamma: f64,
    #[serde(default)]
    atoms: Vec<[f64; 2]>,
}

/// `{ "schema": 1, "function": { "name": ..., "params": {...} } }` or
/// `{ "schema": 1, "function": { "measure": { "alpha": ..., ... } } }`
#[derive(Serialize, Deserialize)]
struct FunctionFile {
    schema: u32,
    function: FunctionDto,
}

pub fn function_from_json(text: &str) -> Result<ScalarFunction> {
    let file: FunctionFile = serde_json::from_str(text)?;
    check_schema(file.schema, "function file")?;
    match file.function {
        FunctionDto::Named { name, params } => builtin(&name, &params),
        FunctionDto::Measure { measure } => {
            let m = OperatorConvexMeasure::new(
                measure.alpha,
                measure.beta,
                measure.gamma,
                measure.atoms.iter().map(|a| (a[0], a[1])).collect(),
            )?;
            Ok(operator_convex_from_measure(&m))
        }
    }
}

// ---------------------------------------------------------------------------
// Information-inequality atoms

#[derive(Serialize, Deserialize)]
struct InformationAtomDto {
    a: Entries,
    b: Entries,
    w: f64,
}

/// `{ "schema": 1, "atoms": [ { "a": ..., "b": ..., "w": ... }, ... ] }`
#[derive(Serialize, Deserialize)]
struct AtomsFile {
    schema: u32,
    atoms: Vec<InformationAtomDto>,
}

pub fn atoms_from_json(text: &str) -> Result<Vec<(DMatrix<C64>, DMatrix<C64>, f64)>> {
    let file: AtomsFile = serde_json::from_str(text)?;
    check_schema(file.schema, "atoms file")?;
    file.atoms
        .iter()
        .map(|atom| {
            Ok((
                matrix_from_entries(&atom.a)?,
                matrix_from_entries(&atom.b)?,
                atom.w,
            ))
        })
        .collect()
}

pub fn atoms_to_json(atoms: &[(DMatrix<C64>, DMatrix<C64>, f64)]) -> String {
    let file = AtomsFile {
        schema: SCHEMA_VERSION,
        atoms: atoms
            .iter()
            .map(|(a, b, w)| InformationAtomDto {
                a: entries_of(a),
                b: entries_of(b),
                w: *w,
            })
            .collect(),
    };
    serde_json::to_string_pretty(&file).expect("atoms serialization cannot fail")
}

// ---------------------------------------------------------------------------
// Verdicts and witnesses

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum WitnessDto {
    Direction {
        coords: Vec<[f64; 2]>,
        value: f64,
    },
    EigenvalueIndex {
        rank: usize,
        lhs: f64,
        rhs: f64,
    },
    PartialSum {
        k: usize,
        lhs: f64,
        rhs: f64,
    },
    TraceMismatch {
        trace_a: f64,
        trace_b: f64,
    },
    ProbeFunction {
        nodes: Vec<f64>,
        values: Vec<f64>,
        lhs: f64,
        rhs: f64,
        trial: u64,
    },
    ConvexCombination {
        a: Entries,
        b: Entries,
        weight: f64,
        min_eigenvalue: f64,
    },
}

fn witness_dto(w: &Witness) -> WitnessDto {
    match w {
        Witness::Direction { coords, value } => WitnessDto::Direction {
            coords: coords.iter().map(|z| [z.re, z.im]).collect(),
            value: *value,
        },
        Witness::EigenvalueIndex { rank, lhs, rhs } => WitnessDto::EigenvalueIndex {
            rank: *rank,
            lhs: *lhs,
            rhs: *rhs,
        },
        Witness::PartialSum { k, lhs, rhs } => WitnessDto::PartialSum {
            k: *k,
            lhs: *lhs,
            rhs: *rhs,
        },
        Witness::TraceMismatch { trace_a, trace_b } => WitnessDto::TraceMismatch {
            trace_a: *trace_a,
            trace_b: *trace_b,
        },
        Witness::ProbeFunction {
            nodes,
            values,
            lhs,
            rhs,
            trial,
        } => WitnessDto::ProbeFunction {
            nodes: nodes.clone(),
            values: values.clone(),
            lhs: *lhs,
            rhs: *rhs,
            trial: *trial,
        },
        Witness::ConvexCombination {
            a,
            b,
            weight,
            min_eigenvalue,
        } => WitnessDto::ConvexCombination {
            a: entries_of(a.matrix()),
            b: entries_of(b.matrix()),
            weight: *weight,
            min_eigenvalue: *min_eigenvalue,
        },
    }
}

#[derive(Serialize, Deserialize)]
struct VerdictDto {
    holds: bool,
    margins: Vec<f64>,
    tol: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<WitnessDto>,
}

fn verdict_dto(v: &PreorderVerdict) -> VerdictDto {
    VerdictDto {
        holds: v.holds,
        margins: v.margins.clone(),
        tol: v.tol,
        witness: v.witness.as_ref().map(witness_dto),
    }
}

// ---------------------------------------------------------------------------
// Inequality reports

#[derive(Serialize, Deserialize)]
struct HypothesisDto {
    label: String,
    satisfied: bool,
    detail: String,
}

#[derive(Serialize, Deserialize)]
struct ReportFile {
    schema: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    generated_unix_ms: Option<u64>,
    theorem_id: String,
    hypotheses: Vec<HypothesisDto>,
    hypotheses_ok: bool,
    exploratory: bool,
    verdict: VerdictDto,
    lhs: Entries,
    rhs: Entries,
    tol: f64,
    inputs_digest: String,
}

/// Serialize a report. The timestamp, when given, is informational only: it
/// is the single field allowed to differ between two runs of the same
/// configuration.
pub fn report_to_json(report: &InequalityReport, generated_unix_ms: Option<u64>) -> String {
    let file = ReportFile {
        schema: SCHEMA_VERSION,
        generated_unix_ms,
        theorem_id: report.theorem_id.clone(),
        hypotheses: report
            .hypotheses
            .iter()
            .map(|h: &HypothesisCheck| HypothesisDto {
                label: h.label.clone(),
                satisfied: h.satisfied,
                detail: h.detail.clone(),
            })
            .collect(),
        hypotheses_ok: report.hypotheses_ok,
        exploratory: report.exploratory(),
        verdict: verdict_dto(&report.verdict),
        lhs: entries_of(report.lhs.matrix()),
        rhs: entries_of(report.rhs.matrix()),
        tol: report.tol,
        inputs_digest: report.inputs_digest.clone(),
    };
    serde_json::to_string_pretty(&file).expect("report serialization cannot fail")
}

// ---------------------------------------------------------------------------
// Campaign summaries

#[derive(Serialize, Deserialize)]
struct TrialRecordDto {
    trial: u64,
    dim: usize,
    holds: bool,
    hypotheses_ok: bool,
    min_margin: f64,
    function: String,
    map: String,
}

#[derive(Serialize, Deserialize)]
struct SummaryFile {
    schema: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    generated_unix_ms: Option<u64>,
    theorem_id: String,
    seed: u64,
    trials: u64,
    dim_min: usize,
    dim_max: usize,
    asserted_trials: u64,
    asserted_failures: u64,
    exploratory_trials: u64,
    exploratory_violations: u64,
    min_margin: f64,
    min_margin_trial: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    min_asserted_margin: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    min_asserted_margin_trial: Option<u64>,
    records: Vec<TrialRecordDto>,
    #[serde(skip_serializing_if = "Option::is_none")]
    worst_violation: Option<WorstViolationDto>,
}

#[derive(Serialize, Deserialize)]
struct WorstViolationDto {
    trial: u64,
    report: serde_json::Value,
}

pub fn summary_to_json(summary: &CampaignSummary, generated_unix_ms: Option<u64>) -> String {
    let records = summary
        .records
        .iter()
        .map(|r: &TrialRecord| TrialRecordDto {
            trial: r.trial,
            dim: r.dim,
            holds: r.holds,
            hypotheses_ok: r.hypotheses_ok,
            min_margin: r.min_margin,
            function: r.function_label.clone(),
            map: r.map_kind.clone(),
        })
        .collect();
    let worst_violation = summary.worst_violation.as_ref().map(|(trial, report)| {
        let text = report_to_json(report, None);
        WorstViolationDto {
            trial: *trial,
            report: serde_json::from_str(&text).expect("report JSON round-trips"),
        }
    });
    let file = SummaryFile {
        schema: SCHEMA_VERSION,
        generated_unix_ms,
        theorem_id: summary.theorem_id.clone(),
        seed: summary.seed,
        trials: summary.trials,
        dim_min: summary.dim_min,
        dim_max: summary.dim_max,
        asserted_trials: summary.asserted_trials,
        asserted_failures: summary.asserted_failures,
        exploratory_trials: summary.exploratory_trials,
        exploratory_violations: summary.exploratory_violations,
        min_margin: summary.min_margin,
        min_margin_trial: summary.min_margin_trial,
        min_asserted_margin: summary.min_asserted_margin,
        min_asserted_margin_trial: summary.min_asserted_margin_trial,
        records,
        worst_violation,
    };
    serde_json::to_string_pretty(&file).expect("summary serialization cannot fail")
}

// ---------------------------------------------------------------------------
// Reference-computation reports

#[derive(Serialize, Deserialize)]
struct ReproFile {
    schema: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    generated_unix_ms: Option<u64>,
    name: String,
    rank_threshold: f64,
    input: Entries,
    function_of_mapped: Entries,
    mapped_function: Entries,
    function_of_mapped_eigenvalues: Vec<f64>,
    mapped_function_eigenvalues: Vec<f64>,
    rank_function_of_mapped: usize,
    rank_mapped_function: usize,
    spectral: VerdictDto,
    weak_majorization: VerdictDto,
}

pub fn repro_to_json(report: &crate::repro::ReproReport, generated_unix_ms: Option<u64>) -> String {
    let file = ReproFile {
        schema: SCHEMA_VERSION,
        generated_unix_ms,
        name: report.name.clone(),
        rank_threshold: crate::repro::RANK_THRESHOLD,
        input: entries_of(report.input.matrix()),
        function_of_mapped: entries_of(report.function_of_mapped.matrix()),
        mapped_function: entries_of(report.mapped_function.matrix()),
        function_of_mapped_eigenvalues: report.function_of_mapped_eigenvalues.clone(),
        mapped_function_eigenvalues: report.mapped_function_eigenvalues.clone(),
        rank_function_of_mapped: report.rank_function_of_mapped,
        rank_mapped_function: report.rank_mapped_function,
        spectral: verdict_dto(&report.spectral),
        weak_majorization: verdict_dto(&report.weak_majorization),
    };
    serde_json::to_string_pretty(&file).expect("repro serialization cannot fail")
}

/// CSV table of per-trial results, one row per trial.
pub fn summary_to_csv(summary: &CampaignSummary) -> String {
    let mut out = String::from("theorem_id,seed,dim,holds,min_margin\n");
    for r in &summary.records {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            summary.theorem_id, r.trial, r.dim, r.holds, r.min_margin
        ));
    }
    out
}
