use std::fs;
use std::process::{Command, Output};

use psdp_core::bench::CSV_HEADER;
use psdp_core::{ProblemInstance, SolveReport, Termination};

fn psdp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_psdp"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(
        out.status.success(),
        "exit {}: {}",
        out.status,
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn generate_then_solve_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let inst_path = dir.path().join("inst.json");
    let trace_path = dir.path().join("trace.csv");
    let inst_str = inst_path.to_str().unwrap();
    stdout(&psdp(&[
        "generate", "--n", "6", "--m", "6", "--problem", "1", "--seed", "3", "--out", inst_str,
    ]));
    let inst = ProblemInstance::from_json(&fs::read_to_string(&inst_path).unwrap()).unwrap();
    assert_eq!((inst.n(), inst.m()), (6, 6));
    assert!(inst.known_optimum().is_some());

    let text = stdout(&psdp(&["solve", inst_str, "--trace", trace_path.to_str().unwrap()]));
    let report: SolveReport = serde_json::from_str(&text).unwrap();
    assert_eq!(report.termination, Termination::Tolerance);
    assert!(report.fval <= 1e-8);
    assert!(report.global_error.unwrap() <= 1e-3);

    let trace = fs::read_to_string(&trace_path).unwrap();
    let mut lines = trace.lines();
    assert_eq!(lines.next().unwrap(), "k,tau,C,Q,fval,trials,fastpath");
    assert_eq!(lines.count(), report.nitr);
}

#[test]
fn solve_accepts_every_method() {
    let dir = tempfile::tempdir().unwrap();
    let inst_path = dir.path().join("inst.json");
    let inst_str = inst_path.to_str().unwrap();
    stdout(&psdp(&[
        "generate", "--n", "5", "--m", "3", "--problem", "2", "--rank-deficient", "--out", inst_str,
    ]));
    for method in ["optpsdp", "grad", "fgm"] {
        let text = stdout(&psdp(&["solve", inst_str, "--method", method]));
        let report: SolveReport = serde_json::from_str(&text).unwrap();
        assert!(report.nitr >= 1, "{method}");
    }
}

#[test]
fn custom_run_emits_csv_rows() {
    let text = stdout(&psdp(&[
        "run", "--n", "8", "--m", "4", "--problem", "3", "--reps", "2", "--label", "tiny",
    ]));
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), CSV_HEADER.join(","));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r.starts_with("tiny,")));
}

#[test]
fn spec_file_runs_every_experiment_and_writes_traces() {
    let dir = tempfile::tempdir().unwrap();
    let spec_path = dir.path().join("specs.json");
    fs::write(
        &spec_path,
        r#"[{"label": "a", "n": 5, "m": 3, "problem": "P1", "gamma": 0.85, "reps": 1},
            {"label": "b", "n": 4, "m": 4, "problem": "P2", "gamma": 0.5, "reps": 1,
             "methods": ["OptPSDP"]}]"#,
    )
    .unwrap();
    let trace = dir.path().join("t.csv");
    let text = stdout(&psdp(&[
        "run",
        "--spec-file",
        spec_path.to_str().unwrap(),
        "--trace",
        trace.to_str().unwrap(),
        "--format",
        "markdown",
    ]));
    assert!(text.contains("**a: n = 5, m = 3"));
    assert!(text.contains("**b: n = 4, m = 4"));
    assert!(dir.path().join("t_a.csv").exists());
    assert!(dir.path().join("t_b.csv").exists());
}

#[test]
fn json_output_parses() {
    let text = stdout(&psdp(&[
        "run", "--n", "4", "--m", "2", "--problem", "1", "--reps", "1", "--methods", "grad",
        "--format", "json",
    ]));
    let rows: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(rows.as_array().unwrap().len(), 1);
    assert_eq!(rows[0]["method"], "Grad");
}

#[test]
fn bad_input_exits_with_code_two() {
    let out = psdp(&["run", "--preset", "E99"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("E99"));

    let out = psdp(&["run", "--n", "4", "--m", "2", "--problem", "1", "--reps", "0"]);
    assert_eq!(out.status.code(), Some(2));

    let out = psdp(&["solve", "/nonexistent/instance.json"]);
    assert_eq!(out.status.code(), Some(2));
}
