//! End-to-end tests of the command-line interface: the exit-code contract,
//! payload determinism, and the pinned reference computation.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_majorize"))
}

/// Fresh scratch directory per test (tests share one process).
fn scratch(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("majorize-cli-{}-{tag}", std::process::id()));
    fs::create_dir_all(&dir).expect("create scratch dir");
    dir
}

fn write(dir: &Path, name: &str, content: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, content).expect("write fixture");
    path
}

fn real_diagonal_json(values: &[f64]) -> String {
    let n = values.len();
    let rows: Vec<String> = (0..n)
        .map(|i| {
            let cols: Vec<String> = (0..n)
                .map(|j| {
                    let re = if i == j { values[i] } else { 0.0 };
                    format!("[{re}, 0.0]")
                })
                .collect();
            format!("[{}]", cols.join(", "))
        })
        .collect();
    format!("{{ \"schema\": 1, \"entries\": [{}] }}", rows.join(", "))
}

fn counterexample_json() -> String {
    let mut entries = [[0.0f64; 4]; 4];
    entries[0][0] = -2.0;
    for i in 2..4 {
        for j in 2..4 {
            entries[i][j] = 1.0;
        }
    }
    let rows: Vec<String> = entries
        .iter()
        .map(|row| {
            let cols: Vec<String> = row.iter().map(|v| format!("[{v}, 0.0]")).collect();
            format!("[{}]", cols.join(", "))
        })
        .collect();
    format!("{{ \"schema\": 1, \"entries\": [{}] }}", rows.join(", "))
}

const ABS_FN: &str = r#"{ "schema": 1, "function": { "name": "abs" } }"#;
const POWER2_FN: &str = r#"{ "schema": 1, "function": { "name": "power", "params": { "r": 2.0 } } }"#;
const POWER4_FN: &str = r#"{ "schema": 1, "function": { "name": "power", "params": { "r": 4.0 } } }"#;
const RELU_FN: &str = r#"{ "schema": 1, "function": { "name": "relu" } }"#;
const SUM2_FN: &str = r#"{ "schema": 1, "function": { "name": "sum", "params": { "n": 2.0 } } }"#;
const BLOCK_AVERAGE_MAP: &str = r#"{ "schema": 1, "map": { "kind": "block_average" } }"#;
const PINCH_MAP: &str = r#"{ "schema": 1, "map": { "kind": "block_pinch", "alpha": 0.3 } }"#;
const STATE2_MAP: &str = r#"{ "schema": 1, "map": { "kind": "state", "rho": [[[0.5, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.5, 0.0]]] } }"#;

fn run(cmd: &mut Command) -> Output {
    cmd.output().expect("spawn CLI")
}

fn stdout_json(output: &Output) -> serde_json::Value {
    serde_json::from_slice(&output.stdout).expect("stdout parses as JSON")
}

fn file_json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(path).expect("read report"))
        .expect("report parses as JSON")
}

#[test]
fn repro_emits_the_pinned_matrices_and_verdicts() {
    let output = run(bin().args(["repro", "aujla-silva"]));
    assert_eq!(output.status.code(), Some(0));
    let value = stdout_json(&output);
    let expected = [[1.5, 0.5], [0.5, 0.5]];
    for i in 0..2 {
        for j in 0..2 {
            let entry = value["mapped_function"][i][j][0].as_f64().unwrap();
            assert!(
                (entry - expected[i][j]).abs() < 1e-12,
                "mapped entry ({i}, {j}) = {entry}"
            );
            let im = value["mapped_function"][i][j][1].as_f64().unwrap();
            assert!(im.abs() < 1e-12);
        }
    }
    let root_half = 0.5f64.sqrt();
    for i in 0..2 {
        let eig = value["function_of_mapped_eigenvalues"][i].as_f64().unwrap();
        assert!((eig - root_half).abs() < 1e-12);
    }
    assert_eq!(value["rank_function_of_mapped"], 2);
    assert_eq!(value["rank_mapped_function"], 1);
    assert_eq!(value["spectral"]["holds"], false);
    assert_eq!(value["weak_majorization"]["holds"], true);
}

#[test]
fn repro_rejects_unknown_names() {
    let output = run(bin().args(["repro", "unknown-example"]));
    assert_eq!(output.status.code(), Some(3));
}

#[test]
fn verify_exits_zero_on_an_asserted_hold() {
    let dir = scratch("verify-hold");
    let f = write(&dir, "f.json", POWER2_FN);
    let phi = write(&dir, "phi.json", PINCH_MAP);
    let a = write(&dir, "a.json", &real_diagonal_json(&[1.0, 2.0, 3.0, 4.0]));
    let out = dir.join("report.json");
    let output = run(bin()
        .args(["verify", "--theorem", "jensen_loewner"])
        .arg("--function")
        .arg(&f)
        .arg("--map")
        .arg(&phi)
        .arg("--input")
        .arg(&a)
        .arg("--out")
        .arg(&out));
    assert_eq!(output.status.code(), Some(0), "{output:?}");
    let report = file_json(&out);
    assert_eq!(report["hypotheses_ok"], true);
    assert_eq!(report["verdict"]["holds"], true);
    assert_eq!(report["exploratory"], false);
}

#[test]
fn verify_exits_two_on_the_block_average_spectral_counterexample() {
    let dir = scratch("verify-counterexample");
    let f = write(&dir, "abs.json", ABS_FN);
    let phi = write(&dir, "avg.json", BLOCK_AVERAGE_MAP);
    let a = write(&dir, "a.json", &counterexample_json());
    let out = dir.join("report.json");
    let output = run(bin()
        .args(["verify", "--theorem", "jensen_spectral"])
        .arg("--function")
        .arg(&f)
        .arg("--map")
        .arg(&phi)
        .arg("--input")
        .arg(&a)
        .arg("--out")
        .arg(&out));
    assert_eq!(output.status.code(), Some(2));
    let report = file_json(&out);
    assert_eq!(report["exploratory"], true);
    assert_eq!(report["verdict"]["holds"], false);
    let worst = report["verdict"]["margins"][1].as_f64().unwrap();
    assert!((worst - (1.0 - 2.0f64.sqrt())).abs() < 1e-9, "margin {worst}");
}

#[test]
fn verify_exits_zero_for_majorization_on_the_same_data() {
    let dir = scratch("verify-majorization");
    let f = write(&dir, "abs.json", ABS_FN);
    let phi = write(&dir, "avg.json", BLOCK_AVERAGE_MAP);
    let a = write(&dir, "a.json", &counterexample_json());
    let output = run(bin()
        .args(["verify", "--theorem", "jensen_majorization"])
        .arg("--function")
        .arg(&f)
        .arg("--map")
        .arg(&phi)
        .arg("--input")
        .arg(&a));
    assert_eq!(output.status.code(), Some(0));
    let report = stdout_json(&output);
    assert_eq!(report["verdict"]["holds"], true);
}

#[test]
fn verify_exits_three_on_mismatched_dimensions() {
    let dir = scratch("verify-dims");
    let f = write(&dir, "abs.json", ABS_FN);
    let phi = write(&dir, "state.json", STATE2_MAP);
    let a = write(&dir, "a.json", &real_diagonal_json(&[1.0, 2.0, 3.0]));
    let output = run(bin()
        .args(["verify", "--theorem", "jensen_state"])
        .arg("--function")
        .arg(&f)
        .arg("--map")
        .arg(&phi)
        .arg("--input")
        .arg(&a));
    assert_eq!(output.status.code(), Some(3));
}

#[test]
fn verify_exits_three_on_an_unknown_theorem() {
    let output = run(bin().args(["verify", "--theorem", "jensen_unknown"]));
    assert_eq!(output.status.code(), Some(3));
}

#[test]
fn verify_exits_three_on_a_missing_map_flag() {
    let dir = scratch("verify-missing-map");
    let f = write(&dir, "abs.json", ABS_FN);
    let a = write(&dir, "a.json", &real_diagonal_json(&[1.0, 2.0]));
    let output = run(bin()
        .args(["verify", "--theorem", "jensen_loewner"])
        .arg("--function")
        .arg(&f)
        .arg("--input")
        .arg(&a));
    assert_eq!(output.status.code(), Some(3));
}

#[test]
fn verify_rejects_the_csv_format() {
    let dir = scratch("verify-csv");
    let f = write(&dir, "abs.json", ABS_FN);
    let phi = write(&dir, "avg.json", BLOCK_AVERAGE_MAP);
    let a = write(&dir, "a.json", &counterexample_json());
    let output = run(bin()
        .args(["verify", "--theorem", "jensen_majorization", "--format", "csv"])
        .arg("--function")
        .arg(&f)
        .arg("--map")
        .arg(&phi)
        .arg("--input")
        .arg(&a));
    assert_eq!(output.status.code(), Some(3));
}

#[test]
fn verify_reports_are_identical_up_to_the_timestamp() {
    let dir = scratch("verify-determinism");
    let f = write(&dir, "abs.json", ABS_FN);
    let phi = write(&dir, "avg.json", BLOCK_AVERAGE_MAP);
    let a = write(&dir, "a.json", &counterexample_json());
    let mut payloads = Vec::new();
    for name in ["r1.json", "r2.json"] {
        let out = dir.join(name);
        let output = run(bin()
            .args(["verify", "--theorem", "jensen_majorization"])
            .arg("--function")
            .arg(&f)
            .arg("--map")
            .arg(&phi)
            .arg("--input")
            .arg(&a)
            .arg("--out")
            .arg(&out));
        assert_eq!(output.status.code(), Some(0));
        let text = fs::read_to_string(&out).unwrap();
        let without_timestamp: String = text
            .lines()
            .filter(|l| !l.contains("generated_unix_ms"))
            .collect::<Vec<_>>()
            .join("\n");
        payloads.push(without_timestamp);
    }
    assert_eq!(payloads[0], payloads[1]);
}

#[test]
fn verify_multivar_accepts_repeated_inputs() {
    let dir = scratch("verify-multivar");
    let f = write(&dir, "sum.json", SUM2_FN);
    let phi = write(&dir, "pinch.json", PINCH_MAP);
    let a1 = write(&dir, "a1.json", &real_diagonal_json(&[1.0, 2.0, 3.0, 4.0]));
    let a2 = write(&dir, "a2.json", &real_diagonal_json(&[4.0, 3.0, 2.0, 1.0]));
    let output = run(bin()
        .args(["verify", "--theorem", "jensen_multivar_loewner"])
        .arg("--function")
        .arg(&f)
        .arg("--map")
        .arg(&phi)
        .arg("--input")
        .arg(&a1)
        .arg("--input")
        .arg(&a2));
    assert_eq!(output.status.code(), Some(0), "{output:?}");
    let report = stdout_json(&output);
    assert_eq!(report["theorem_id"], "jensen_multivar_loewner");
    assert_eq!(report["verdict"]["holds"], true);
}

#[test]
fn verify_conditional_takes_two_functions_and_two_maps() {
    let dir = scratch("verify-conditional");
    let f = write(&dir, "abs.json", ABS_FN);
    let g = write(&dir, "relu.json", RELU_FN);
    let phi = write(&dir, "avg.json", BLOCK_AVERAGE_MAP);
    let e = write(&dir, "state.json", STATE2_MAP);
    let a = write(&dir, "a.json", &counterexample_json());
    let output = run(bin()
        .args(["verify", "--theorem", "jensen_conditional"])
        .arg("--function")
        .arg(&f)
        .arg("--function")
        .arg(&g)
        .arg("--map")
        .arg(&phi)
        .arg("--map")
        .arg(&e)
        .arg("--input")
        .arg(&a));
    assert_eq!(output.status.code(), Some(0), "{output:?}");
}

#[test]
fn verify_liapunov_takes_explicit_exponents() {
    let dir = scratch("verify-liapunov");
    let phi = write(&dir, "pinch.json", PINCH_MAP);
    let a = write(&dir, "a.json", &real_diagonal_json(&[1.0, 2.0, 3.0, 4.0]));
    let output = run(bin()
        .args(["verify", "--theorem", "liapunov", "--r", "1.0", "--s", "2.0"])
        .arg("--map")
        .arg(&phi)
        .arg("--input")
        .arg(&a));
    assert_eq!(output.status.code(), Some(0), "{output:?}");
}

#[test]
fn verify_holder_takes_four_inputs_and_conjugate_exponents() {
    let dir = scratch("verify-holder");
    let root_half = 0.5f64.sqrt();
    let c = write(&dir, "c.json", &real_diagonal_json(&[root_half, root_half]));
    let id = write(&dir, "id.json", &real_diagonal_json(&[1.0, 1.0]));
    let output = run(bin()
        .args(["verify", "--theorem", "holder", "--p", "2.0", "--q", "2.0"])
        .arg("--input")
        .arg(&c)
        .arg("--input")
        .arg(&c)
        .arg("--input")
        .arg(&id)
        .arg("--input")
        .arg(&id));
    assert_eq!(output.status.code(), Some(0), "{output:?}");
}

#[test]
fn verify_information_reads_an_atoms_file() {
    let dir = scratch("verify-information");
    let atoms = write(
        &dir,
        "atoms.json",
        r#"{ "schema": 1, "atoms": [ { "a": [[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [1.0, 0.0]]], "b": [[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [1.0, 0.0]]], "w": 1.0 } ] }"#,
    );
    let output = run(bin()
        .args(["verify", "--theorem", "information_inequality"])
        .arg("--atoms")
        .arg(&atoms));
    assert_eq!(output.status.code(), Some(0), "{output:?}");
}

#[test]
fn fuzz_csv_has_the_pinned_header_and_one_row_per_trial() {
    let dir = scratch("fuzz-csv");
    let out = dir.join("table.csv");
    let output = run(bin()
        .args([
            "fuzz",
            "--theorem",
            "jensen_majorization",
            "--trials",
            "25",
            "--dim",
            "5",
            "--seed",
            "3",
            "--format",
            "csv",
        ])
        .arg("--out")
        .arg(&out));
    assert_eq!(output.status.code(), Some(0));
    let text = fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "theorem_id,seed,dim,holds,min_margin");
    assert_eq!(lines.len(), 26);
    for line in &lines[1..] {
        assert!(line.starts_with("jensen_majorization,"));
        assert!(line.contains(",true,") || line.contains(",false,"));
    }
}

#[test]
fn fuzz_summaries_are_byte_identical_across_runs() {
    let dir = scratch("fuzz-determinism");
    let mut payloads = Vec::new();
    for name in ["s1.json", "s2.json"] {
        let out = dir.join(name);
        let output = run(bin()
            .args([
                "fuzz",
                "--theorem",
                "jensen_spectral",
                "--trials",
                "30",
                "--dim",
                "6",
                "--seed",
                "9",
            ])
            .arg("--out")
            .arg(&out));
        assert_eq!(output.status.code(), Some(0));
        payloads.push(fs::read(&out).unwrap());
    }
    assert_eq!(payloads[0], payloads[1]);
}

#[test]
fn fuzz_with_a_single_trial_summarizes_exactly_one_row() {
    let output = run(bin().args([
        "fuzz",
        "--theorem",
        "jensen_loewner",
        "--trials",
        "1",
        "--dim",
        "4",
    ]));
    assert_eq!(output.status.code(), Some(0));
    let summary = stdout_json(&output);
    assert_eq!(summary["trials"], 1);
    assert_eq!(summary["records"].as_array().unwrap().len(), 1);
    assert_eq!(summary["asserted_failures"], 0);
}

#[test]
fn fuzz_quartic_override_records_exploratory_violations() {
    let dir = scratch("fuzz-quartic");
    let f = write(&dir, "p4.json", POWER4_FN);
    let output = run(bin()
        .args([
            "fuzz",
            "--theorem",
            "jensen_loewner",
            "--trials",
            "60",
            "--dim",
            "6",
        ])
        .arg("--function")
        .arg(&f));
    assert_eq!(output.status.code(), Some(0), "exploratory violations are not asserted failures");
    let summary = stdout_json(&output);
    assert_eq!(summary["asserted_trials"], 0);
    assert!(summary["exploratory_violations"].as_u64().unwrap() >= 1);
    let worst = &summary["worst_violation"];
    assert_eq!(worst["report"]["exploratory"], true);
    assert_eq!(worst["report"]["verdict"]["holds"], false);
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(run(bin().arg("--help")).status.code(), Some(0));
    assert_eq!(run(bin().arg("--version")).status.code(), Some(0));
    assert_eq!(run(bin().args(["verify", "--help"])).status.code(), Some(0));
}

#[test]
fn unknown_subcommands_exit_three() {
    assert_eq!(run(bin().arg("frobnicate")).status.code(), Some(3));
    assert_eq!(run(&mut bin()).status.code(), Some(3));
}
