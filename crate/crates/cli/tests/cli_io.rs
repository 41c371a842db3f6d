//! Binary-interface tests: subcommands, flags, exact CSV headers, exit
//! codes, and byte-identical reproducibility of the emitted artifacts.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hopfwind"))
}

fn temp_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir()
        .join(format!("hopfwind-test-{}-{tag}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    dir
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawning hopfwind")
}

fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap_or_else(|e| panic!("reading {}: {e}", path.display()))
}

fn summary_without_runtime(dir: &Path) -> serde_json::Value {
    let mut value: serde_json::Value =
        serde_json::from_str(&read(&dir.join("summary.json"))).expect("summary.json parses");
    value.as_object_mut().unwrap().remove("runtime_seconds");
    value
}

#[test]
fn phase_artifacts_and_reproducibility() {
    let dirs = [temp_dir("phase-a"), temp_dir("phase-b")];
    for (dir, jobs) in dirs.iter().zip(["1", "2"]) {
        let out = run(&[
            "phase",
            "--center",
            "15,0",
            "--samples",
            "16",
            "--x0",
            "-0.2",
            "--x1",
            "0.2",
            "--jobs",
            jobs,
            "--out",
            dir.to_str().unwrap(),
        ]);
        assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    }

    let csv = read(&dirs[0].join("phase_series.csv"));
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("x,gp_at_x,relative"));
    // grid -0.2..0.2 step 0.04 has 11 points
    assert_eq!(lines.count(), 11);
    let first_row = csv.lines().nth(1).unwrap();
    assert!(first_row.starts_with("-0.2"), "unexpected first row {first_row}");

    let svg = read(&dirs[0].join("phase_transition.svg"));
    assert!(svg.starts_with("<svg"));
    assert!(svg.contains("<polyline"));

    let summary = summary_without_runtime(&dirs[0]);
    assert_eq!(summary["command"], "phase");
    for key in ["terminal_relative_phase", "rounded_count", "rounding_residual", "gp_initial", "config"] {
        assert!(summary.get(key).is_some(), "summary missing {key}");
    }
    assert_eq!(summary["config"]["contour"]["n_samples"], 16);

    // identical configs (different worker counts) give identical bytes
    assert_eq!(
        read(&dirs[0].join("phase_series.csv")),
        read(&dirs[1].join("phase_series.csv"))
    );
    assert_eq!(
        read(&dirs[0].join("phase_transition.svg")),
        read(&dirs[1].join("phase_transition.svg"))
    );
    let mut without_jobs = [summary_without_runtime(&dirs[0]), summary_without_runtime(&dirs[1])];
    for summary in without_jobs.iter_mut() {
        let config = summary["config"].as_object_mut().unwrap();
        config.remove("jobs");
        config.remove("out_dir");
    }
    assert_eq!(without_jobs[0], without_jobs[1]);
}

#[test]
fn evans_artifacts_and_count() {
    let dir = temp_dir("evans");
    let out = run(&[
        "evans",
        "--center",
        "15,0",
        "--samples",
        "64",
        "--x0",
        "-4",
        "--x1",
        "4",
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));

    let csv = read(&dir.join("evans_trace.csv"));
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("re_lambda,im_lambda,re_E,im_E,log_mag,unwrapped_arg"));
    assert_eq!(lines.count(), 64);

    let summary = summary_without_runtime(&dir);
    assert_eq!(summary["command"], "evans");
    assert_eq!(summary["winding"], 1, "expected the simple eigenvalue near 15 to be enclosed");
}

#[test]
fn spectrum_artifacts_from_config_file() {
    let dir = temp_dir("spectrum");
    std::fs::create_dir_all(&dir).unwrap();
    let config_path = dir.join("run.toml");
    std::fs::write(
        &config_path,
        format!(
            "s_max = 2.0\ns_step = 0.5\nout_dir = {:?}\n\n[contour]\ncenter = [-6.6357, 0.0]\nradius = 0.1\nn_samples = 16\n",
            dir.to_str().unwrap()
        ),
    )
    .unwrap();
    let out = run(&["spectrum", "--config", config_path.to_str().unwrap()]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));

    let csv = read(&dir.join("essential_spectrum.csv"));
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("s,branch,re,im"));
    // 2 branches x (s_max / s_step + 1) samples
    assert_eq!(lines.count(), 10);
    assert!(csv.contains(",+,"));
    assert!(csv.contains(",-,"));

    let summary = summary_without_runtime(&dir);
    assert_eq!(summary["rows"], 10);
    let clearance = summary["clearance"].as_f64().unwrap();
    assert!(clearance > 0.1, "clearance {clearance}");
}

#[test]
fn config_errors_exit_2() {
    let out = run(&["phase", "--radius", "-1", "--out", temp_dir("bad-radius").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2), "stderr: {}", String::from_utf8_lossy(&out.stderr));

    let out = run(&["phase", "--preset", "no-such-preset"]);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&["evans", "--x0", "1", "--x1", "2", "--out", temp_dir("bad-span").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn numerical_failures_exit_3() {
    // contour at the sigma+ branch point: the eigenvector loop degenerates
    let out = run(&[
        "phase",
        "--center",
        "-15,0",
        "--radius",
        "0.000001",
        "--samples",
        "16",
        "--out",
        temp_dir("branch-point").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("numerical failure"), "stderr: {stderr}");
}

#[test]
fn validate_passes_on_fresh_build() {
    let out = run(&["validate"]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("PASS"));
    assert!(!stdout.contains("FAIL"));
}

#[test]
fn no_rescale_flag_works_on_short_spans() {
    let dir = temp_dir("no-rescale");
    let out = run(&[
        "phase",
        "--center",
        "15,0",
        "--samples",
        "16",
        "--x0",
        "-0.2",
        "--x1",
        "0.2",
        "--no-rescale",
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let summary = summary_without_runtime(&dir);
    assert_eq!(summary["config"]["rescale"], false);
}
