//! End-to-end tests of the `swapcli` binary: exit codes, output formats,
//! determinism, and error reporting.

use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output};

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_swapcli"))
}

fn config_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("configs")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    binary().args(args).output().expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("stdout is UTF-8")
}

fn stderr(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).expect("stderr is UTF-8")
}

fn write_temp_config(content: &str) -> tempfile::NamedTempFile {
    let mut file = tempfile::Builder::new()
        .suffix(".ini")
        .tempfile()
        .expect("temp file");
    file.write_all(content.as_bytes()).expect("write config");
    file.flush().expect("flush config");
    file
}

#[test]
fn steady_reports_the_demo_engine() {
    let path = config_path("engine.ini");
    let out = run(&["steady", "--config", path.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    let v: serde_json::Value = serde_json::from_str(&text).expect("valid JSON");
    assert_eq!(v["mode"], "engine");
    let eta = v["efficiency"].as_f64().unwrap();
    assert!((eta - 0.25).abs() < 1e-12, "eta = {eta}");
    // Key order is fixed by struct declaration order.
    let mode_pos = text.find("\"mode\"").unwrap();
    let work_pos = text.find("\"work\"").unwrap();
    let bounds_pos = text.find("\"work_bounds\"").unwrap();
    assert!(mode_pos < work_pos && work_pos < bounds_pos);
    // 17 significant digits on floats.
    assert!(text.contains("2.5000000000000000e-1"), "{text}");
}

#[test]
fn steady_output_is_byte_identical_across_runs() {
    let path = config_path("engine.ini");
    let a = run(&["steady", "--config", path.to_str().unwrap()]);
    let b = run(&["steady", "--config", path.to_str().unwrap()]);
    assert!(a.status.success() && b.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert!(!a.stdout.is_empty());
}

#[test]
fn sweep_emits_header_plus_exactly_steps_rows() {
    let file = write_temp_config(
        "[cold]\nenergies = 0.0, 1.0\nbeta = 1.0\n\
         [hot]\nenergies = 0.0, 2.0\nbeta = 0.5\n\
         [params]\nx = 0.5\n\
         [sweep]\nparameter = cold_gap_scale\nlo = 0.5\nhi = 1.5\nsteps = 2\n",
    );
    let out = run(&["sweep", "--config", file.path().to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3, "{text}");
    assert_eq!(
        lines[0],
        "value,work,q_hot,q_cold,efficiency,mode,clausius_r1,entropy_production"
    );
    assert!(!text.contains('\r'));
    assert!(text.ends_with('\n'));
}

#[test]
fn sweep_blanks_efficiency_outside_engine_mode() {
    let path = config_path("sweep_gap.ini");
    let out = run(&["sweep", "--config", path.to_str().unwrap()]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut saw_blank = false;
    let mut saw_filled = false;
    for line in text.lines().skip(1) {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields.len(), 8, "{line}");
        let mode = fields[5];
        if mode == "engine" {
            assert!(!fields[4].is_empty(), "{line}");
            saw_filled = true;
        } else {
            assert!(fields[4].is_empty(), "{line}");
            saw_blank = true;
        }
    }
    assert!(saw_blank && saw_filled);
}

#[test]
fn fuzz_passes_and_reports_counts() {
    let out = run(&["fuzz", "--seed", "11", "--n", "250", "--max-levels", "5"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["total_failures"], 0);
    assert_eq!(v["instances"], 250);
    assert_eq!(v["max_levels"], 5);
    let invariants = v["invariants"].as_array().unwrap();
    assert_eq!(invariants.len(), 13);
    for inv in invariants {
        assert_eq!(inv["failures"], 0, "{inv}");
        assert!(inv["first_counterexample"].is_null(), "{inv}");
    }
}

#[test]
fn fuzz_is_deterministic_for_a_seed() {
    let a = run(&["fuzz", "--seed", "3", "--n", "150"]);
    let b = run(&["fuzz", "--seed", "3", "--n", "150"]);
    assert_eq!(a.stdout, b.stdout);
    let c = run(&["fuzz", "--seed", "4", "--n", "150"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn mc_runs_with_overrides() {
    let path = config_path("mc.ini");
    let out = run(&[
        "mc",
        "--config",
        path.to_str().unwrap(),
        "--seed",
        "7",
        "--n",
        "3000",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["rng"], "chacha8");
    assert_eq!(v["seed"], 7);
    assert_eq!(v["cycles_measured"], 3000);
    assert!(v["mean_work"].as_f64().unwrap() > 0.0);
    assert!(v["closed_form"]["work"].as_f64().unwrap() > 0.0);
}

#[test]
fn ultrahot_reports_the_expansion() {
    let path = config_path("ultrahot.ini");
    let out = run(&["ultrahot", "--config", path.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["valid"], true);
    assert!(v["smallness"].as_f64().unwrap() <= 0.1);
    assert!(v["engine_condition"]["holds"].is_boolean());
}

#[test]
fn malformed_config_exits_2_with_line_anchored_message() {
    let file = write_temp_config("[cold]\nenergies = 0.0, 1.0\nbetta = 1.0\n");
    let out = run(&["steady", "--config", file.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(err.contains(":3:"), "{err}");
    assert!(err.contains("betta"), "{err}");
}

#[test]
fn missing_config_file_exits_2() {
    let out = run(&["steady", "--config", "/nonexistent/machine.ini"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("cannot read config"));
}

#[test]
fn degenerate_cycle_exits_3() {
    let file = write_temp_config(
        "[cold]\nenergies = 0.0, 1.0\nbeta = 1.0\n\
         [hot]\nenergies = 0.0, 2.0\nbeta = 0.5\n\
         [params]\nx = 0.0\n",
    );
    let out = run(&["steady", "--config", file.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn usage_errors_exit_2() {
    let out = run(&["warp"]);
    assert_eq!(out.status.code(), Some(2));
    let out2 = run(&["steady"]); // missing --config
    assert_eq!(out2.status.code(), Some(2));
}

#[test]
fn out_flag_writes_the_file_instead_of_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("report.json");
    let path = config_path("engine.ini");
    let out = run(&[
        "steady",
        "--config",
        path.to_str().unwrap(),
        "--out",
        target.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&target).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["mode"], "engine");
}

#[test]
fn sweep_domain_error_names_the_offending_point() {
    let file = write_temp_config(
        "[cold]\nenergies = 0.0, 1.0\nbeta = 1.0\n\
         [hot]\nenergies = 0.0, 2.0\nbeta = 0.5\n\
         [params]\nx = 0.5\n\
         [sweep]\nparameter = beta_h\nlo = 0.4\nhi = 2.0\nsteps = 5\n",
    );
    let out = run(&["sweep", "--config", file.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("sweep beta_h ="), "{}", stderr(&out));
}
