//! Black-box checks of the binary: exit codes, report formats,
//! diagnostics, and the margin/probe options.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

struct Fixtures {
    _dir: tempfile::TempDir,
    lorentz3: PathBuf,
    orthant1: PathBuf,
    orthant2: PathBuf,
    split3: PathBuf,
    spread2: PathBuf,
    coupled2: PathBuf,
    scalar1: PathBuf,
}

fn write(dir: &Path, name: &str, content: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, content).unwrap();
    p
}

fn fixtures() -> Fixtures {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    Fixtures {
        lorentz3: write(p, "lorentz3.json", "{\"type\":\"lorentz\",\"n\":3}"),
        orthant1: write(p, "orthant1.json", "{\"type\":\"orthant\",\"n\":1}"),
        orthant2: write(p, "orthant2.json", "{\"type\":\"orthant\",\"n\":2}"),
        split3: write(p, "split3.txt", "3\n1 0 0\n0 2 0\n0 0 2\n"),
        spread2: write(p, "spread2.txt", "2\n1 0\n0 4\n"),
        coupled2: write(p, "coupled2.txt", "2\n1 -0.3\n-0.3 1\n"),
        scalar1: write(p, "scalar1.txt", "1\n2\n"),
        _dir: dir,
    }
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sphconvex"))
        .args(args)
        .output()
        .unwrap()
}

fn run_env(args: &[&str], key: &str, value: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sphconvex"))
        .args(args)
        .env(key, value)
        .output()
        .unwrap()
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}",
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

// -------------------------------------------------------------------
// exit codes
// -------------------------------------------------------------------

#[test]
fn certified_forms_exit_zero_with_the_certificate() {
    let f = fixtures();
    let out = run(&[
        "certify",
        "--matrix",
        path(&f.split3),
        "--cone",
        path(&f.lorentz3),
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert_eq!(v["command"], "certify");
    assert_eq!(v["status"], "certified");
    assert_eq!(v["cone"], "lorentz");
    assert_eq!(v["exact"]["certificate"]["a"], 1.0);
    assert_eq!(v["exact"]["certificate"]["lambda"], 2.0);
    // Nothing sampled: the exact decider settled it.
    assert!(v.get("sampled").is_none());
}

#[test]
fn refuted_forms_exit_one_with_a_witness() {
    let f = fixtures();
    let out = run(&[
        "certify",
        "--matrix",
        path(&f.spread2),
        "--cone",
        path(&f.orthant2),
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let v = stdout_json(&out);
    assert_eq!(v["status"], "refuted");
    let violation = v["exact"]["witness"]["violation"].as_f64().unwrap();
    assert!(violation > 1e-9, "violation should be material: {violation}");
}

#[test]
fn structurally_open_cases_exit_two() {
    // Equal diagonal with a negative off-diagonal entry in the plane:
    // outside every witness family, not a multiple of the identity, and
    // the sampled inequalities genuinely hold.
    let f = fixtures();
    let out = run(&[
        "certify",
        "--matrix",
        path(&f.coupled2),
        "--cone",
        path(&f.orthant2),
        "--samples",
        "3000",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let v = stdout_json(&out);
    assert_eq!(v["status"], "inconclusive");
    assert_eq!(v["exact"]["status"], "inconclusive");
    let sampled = v["sampled"].as_array().unwrap();
    assert!(!sampled.is_empty());
    for s in sampled {
        assert_eq!(s["verdict"]["status"], "inconclusive", "criterion {}", s["criterion"]);
    }
}

#[test]
fn usage_errors_exit_sixty_four() {
    let f = fixtures();
    // Unknown flag.
    let out = run(&["certify", "--nonsense"]);
    assert_eq!(out.status.code(), Some(64));
    // Missing required arguments.
    let out = run(&["certify"]);
    assert_eq!(out.status.code(), Some(64));
    // Zero samples.
    let out = run(&[
        "certify",
        "--matrix",
        path(&f.split3),
        "--cone",
        path(&f.lorentz3),
        "--samples",
        "0",
    ]);
    assert_eq!(out.status.code(), Some(64));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--samples"));
    // Nonpositive tolerance.
    let out = run(&[
        "certify",
        "--matrix",
        path(&f.split3),
        "--cone",
        path(&f.lorentz3),
        "--tol",
        "-1e-9",
    ]);
    assert_eq!(out.status.code(), Some(64));
    // Bad thread cap.
    for bad in ["0", "three", "-2"] {
        let out = run_env(
            &["certify", "--matrix", path(&f.split3), "--cone", path(&f.lorentz3)],
            "SPHCONVEX_THREADS",
            bad,
        );
        assert_eq!(out.status.code(), Some(64), "SPHCONVEX_THREADS={bad}");
        assert!(String::from_utf8_lossy(&out.stderr).contains("SPHCONVEX_THREADS"));
    }
}

#[test]
fn data_errors_exit_sixty_five_with_located_diagnostics() {
    let f = fixtures();
    let dir = tempfile::tempdir().unwrap();
    let bad_matrix = write(dir.path(), "bad.txt", "2\n1 0\n0 oops\n");
    let bad_cone = write(dir.path(), "bad.json", "{\"type\":\"moebius\",\"n\":3}");

    let out = run(&[
        "certify",
        "--matrix",
        path(&bad_matrix),
        "--cone",
        path(&f.orthant2),
    ]);
    assert_eq!(out.status.code(), Some(65));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(
        err.contains("bad.txt:3:3"),
        "diagnostic should carry file:line:col, got: {err}"
    );

    let out = run(&[
        "certify",
        "--matrix",
        path(&f.split3),
        "--cone",
        path(&bad_cone),
    ]);
    assert_eq!(out.status.code(), Some(65));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bad.json"));

    // Dimension mismatch between the two files.
    let out = run(&[
        "certify",
        "--matrix",
        path(&f.split3),
        "--cone",
        path(&f.orthant2),
    ]);
    assert_eq!(out.status.code(), Some(65));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("dimension"), "got: {err}");

    // Missing file.
    let out = run(&[
        "certify",
        "--matrix",
        "/nonexistent/m.txt",
        "--cone",
        path(&f.orthant2),
    ]);
    assert_eq!(out.status.code(), Some(65));
}

// -------------------------------------------------------------------
// formats and warnings
// -------------------------------------------------------------------

#[test]
fn text_format_prints_a_status_line() {
    let f = fixtures();
    let out = run(&[
        "certify",
        "--matrix",
        path(&f.split3),
        "--cone",
        path(&f.lorentz3),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("status: certified"), "got: {text}");
    assert!(text.contains("lambda"), "certificate values missing: {text}");
}

#[test]
fn asymmetric_input_warns_and_uses_the_symmetric_part() {
    let dir = tempfile::tempdir().unwrap();
    let asym = write(dir.path(), "asym.txt", "2\n1 0.5\n0 1\n");
    let cone = write(dir.path(), "orthant2.json", "{\"type\":\"orthant\",\"n\":2}");
    let out = run(&[
        "props",
        "--matrix",
        path(&asym),
        "--cone",
        path(&cone),
        "--samples",
        "500",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(
        String::from_utf8_lossy(&out.stderr).contains("not symmetric"),
        "missing warning: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    // The symmetric part has off-diagonal 0.25 in both slots, so the
    // report must not flag the Z-property.
    let v = stdout_json(&out);
    assert_eq!(v["z_matrix"], false);
}

#[test]
fn json_reports_parse_for_every_command() {
    let f = fixtures();
    for (cmd, extra) in [
        ("certify", vec![]),
        ("search", vec![]),
        ("props", vec![]),
        ("minimize", vec!["--restarts", "4"]),
        ("ncp", vec!["--restarts", "4"]),
    ] {
        let mut args = vec![
            cmd,
            "--matrix",
            path(&f.split3),
            "--cone",
            path(&f.lorentz3),
            "--samples",
            "800",
            "--format",
            "json",
        ];
        args.extend(extra);
        let out = run(&args);
        let v = stdout_json(&out);
        assert_eq!(v["command"], cmd);
        assert_eq!(v["n"], 3);
    }
}

// -------------------------------------------------------------------
// margins and probes
// -------------------------------------------------------------------

#[test]
fn margin_dumps_are_csv_and_reproducible() {
    let f = fixtures();
    let dir = tempfile::tempdir().unwrap();
    let csv1 = dir.path().join("m1.csv");
    let csv2 = dir.path().join("m2.csv");
    for csv in [&csv1, &csv2] {
        let out = run(&[
            "search",
            "--matrix",
            path(&f.coupled2),
            "--cone",
            path(&f.orthant2),
            "--samples",
            "500",
            "--dump-margins",
            csv.to_str().unwrap(),
            "--format",
            "json",
        ]);
        assert_eq!(out.status.code(), Some(0));
    }
    let body1 = std::fs::read(&csv1).unwrap();
    let body2 = std::fs::read(&csv2).unwrap();
    assert_eq!(body1, body2, "margin dump is not reproducible");

    let text = String::from_utf8(body1).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("criterion,index,margin"));
    let mut rows = 0usize;
    let mut seen = std::collections::BTreeSet::new();
    for line in lines {
        let mut parts = line.splitn(3, ',');
        let criterion = parts.next().unwrap();
        let index: u64 = parts.next().unwrap().parse().unwrap();
        let margin: f64 = parts.next().unwrap().parse().unwrap();
        assert!(["prop3", "prop4", "prop2iii"].contains(&criterion), "bad row: {line}");
        assert!(margin.is_finite());
        seen.insert(criterion.to_string());
        let _ = index;
        rows += 1;
    }
    assert_eq!(rows, 3 * 500, "expected one margin per sample per criterion");
    assert_eq!(seen.len(), 3);
}

#[test]
fn geodesic_probe_reports_violations_for_a_nonconvex_form() {
    let f = fixtures();
    let out = run(&[
        "search",
        "--matrix",
        path(&f.spread2),
        "--cone",
        path(&f.orthant2),
        "--samples",
        "200",
        "--probe-geodesics",
        "50",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let v = stdout_json(&out);
    assert_eq!(v["found"], true);
    let probe = &v["probe"];
    assert_eq!(probe["segments"], 50);
    assert_eq!(probe["grid"], 64);
    let violations = probe["violations"].as_u64().unwrap();
    assert!(violations >= 1, "expected the scan to catch concavity, got 0");
    let d2 = probe["worst"]["second_difference"].as_f64().unwrap();
    assert!(d2 < 0.0, "worst second difference should be negative: {d2}");
}

#[test]
fn probe_on_a_certified_form_stays_consistent() {
    let f = fixtures();
    let out = run(&[
        "certify",
        "--matrix",
        path(&f.split3),
        "--cone",
        path(&f.lorentz3),
        "--probe-geodesics",
        "40",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["status"], "certified");
    assert_eq!(v["probe"]["violations"], 0);
}

// -------------------------------------------------------------------
// degenerate dimensions
// -------------------------------------------------------------------

#[test]
fn one_dimensional_inputs_degrade_gracefully() {
    let f = fixtures();
    let out = run(&[
        "search",
        "--matrix",
        path(&f.scalar1),
        "--cone",
        path(&f.orthant1),
        "--samples",
        "100",
        "--format",
        "json",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v = stdout_json(&out);
    assert_eq!(v["found"], false);
    // Every sampled criterion needs two dimensions; none should run.
    assert!(v.get("sampled").is_none());

    let out = run(&[
        "minimize",
        "--matrix",
        path(&f.scalar1),
        "--cone",
        path(&f.orthant1),
        "--restarts",
        "2",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["result"]["value"], 2.0);
}
