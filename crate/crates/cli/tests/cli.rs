use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;
use vi_cli::InstanceFile;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn vi(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vi")).args(args).output().expect("vi runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON report")
}

fn f(name: &str) -> String {
    fixture(name).display().to_string()
}

#[test]
fn solve_exit_codes() {
    let out = vi(&["solve", &f("ex432_iS.json")]);
    assert_eq!(code(&out), 2);
    let r = report(&out);
    assert_eq!(r["exit_code"], 2);
    assert_eq!(r["payload"]["solve"]["best_gap"].as_f64(), Some(1.0));
    let margin = r["payload"]["certificate"]["margin"].as_f64().unwrap();
    assert!((margin - 0.625).abs() < 1e-12);

    let out = vi(&["solve", &f("zero_A.json")]);
    assert_eq!(code(&out), 0);
}

#[test]
fn check_exit_codes() {
    let out = vi(&["check", &f("ex432_iS.json"), "--property", "ql", "--x", "0,0", "--y", "1,1", "--t", "0.5"]);
    assert_eq!(code(&out), 2);
    let dist = report(&out)["payload"]["report"]["witness"]["distance"].as_f64().unwrap();
    assert!((dist - 2f64.sqrt() / 16.0).abs() <= 1e-12);

    let out = vi(&["check", &f("affine_simplex.json"), "--property", "hull_image", "--trials", "200"]);
    assert_eq!(code(&out), 0);

    let out = vi(&["check", &f("ex434_iM.json"), "--property", "minty", "--direction", "iM_subset_iS"]);
    assert_eq!(code(&out), 2);
    let w = &report(&out)["payload"]["report"]["witness"];
    assert_eq!(w["x"][0].as_f64(), Some(-0.5));

    let out = vi(&["check", &f("ex432_iS.json"), "--property", "bogus"]);
    assert_eq!(code(&out), 1);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("strict_ql") && err.contains("minty"), "{err}");

    let out = vi(&["check", &f("ex4331_iM.json"), "--property", "strict_ql", "--x=-1", "--y", "1", "--t", "0.25"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn fixed_point_exit_codes() {
    let out = vi(&["fixed-point", &f("brouwer_interval.json")]);
    assert_eq!(code(&out), 0);
    assert_eq!(report(&out)["payload"]["residual"].as_f64(), Some(0.0));
    let out = vi(&["fixed-point", &f("range_violation.json")]);
    assert_eq!(code(&out), 1);
}

#[test]
fn usage_and_schema_errors() {
    assert_eq!(code(&vi(&["frobnicate"])), 1);
    assert_eq!(code(&vi(&["reproduce", "nope"])), 1);
    assert_eq!(code(&vi(&["solve", "/nonexistent/file.json"])), 1);
    assert_eq!(code(&vi(&["--help"])), 0);

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ \"dimension\": 2, ").unwrap();
    let out = vi(&["solve", bad.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("line"));

    let unknown = dir.path().join("unknown.json");
    std::fs::write(&unknown, r#"{"dimension":1,"set":{"type":"box","lower":[0],"upper":[1]},"colour":"red"}"#).unwrap();
    assert_eq!(code(&vi(&["solve", unknown.to_str().unwrap()])), 1);

    let expr = dir.path().join("expr.json");
    std::fs::write(
        &expr,
        r#"{"dimension":1,"set":{"type":"box","lower":[0],"upper":[1]},
            "A":{"source":"expr","components":["x1 + * 2"]},"a":{"source":"catalog","name":"identity"},"problem":"S"}"#,
    )
    .unwrap();
    let out = vi(&["solve", expr.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("position 6"));
}

#[test]
fn gap_field_csv_rows() {
    let dir = tempfile::tempdir().unwrap();
    let csv_path = dir.path().join("gap.csv");
    let out = vi(&["export-gap-field", &f("ex432_iS.json"), "-o", csv_path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let mut rdr = csv::Reader::from_path(&csv_path).unwrap();
    let header: Vec<String> = rdr.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(header, ["x1", "x2", "gap", "worst_y1", "worst_y2"]);
    let rows: Vec<csv::StringRecord> = rdr.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 41 * 41);
    let min_gap = rows.iter().map(|r| r[2].parse::<f64>().unwrap()).fold(f64::INFINITY, f64::min);
    assert_eq!(min_gap, 1.0);

    let one_d = dir.path().join("line.csv");
    let out = vi(&["--resolution", "3", "export-gap-field", &f("ex434_iM.json"), "-o", one_d.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let text = std::fs::read_to_string(&one_d).unwrap();
    assert_eq!(text.lines().count(), 4);
    assert_eq!(text.lines().next(), Some("x1,gap,worst_y1"));

    let out = vi(&["export-gap-field", &f("ex432_iS.json"), "-o", "/nonexistent/dir/out.csv"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        vec!["solve", "FILE"],
        vec!["check", "FILE", "--property", "kkm", "--trials", "300", "--seed", "9"],
    ] {
        let mut outs = Vec::new();
        let path = dir.path().join("report.json");
        for _ in 0..2 {
            let mut a: Vec<String> = args.iter().map(|s| s.replace("FILE", &f("ex432_iS.json"))).collect();
            a.extend(["--out".into(), path.display().to_string()]);
            let a: Vec<&str> = a.iter().map(String::as_str).collect();
            vi(&a);
            outs.push(std::fs::read_to_string(&path).unwrap());
        }
        assert!(outs[0] == outs[1], "reports differ");
        assert!(!outs[0].is_empty());
    }
}

#[test]
fn canonical_instance_round_trip() {
    for name in ["ex432_iS.json", "ex434_iM.json", "affine_simplex.json", "psd_pullback.json", "brouwer_disc.json"] {
        let original = InstanceFile::load(&fixture(name)).unwrap();
        let canonical = original.to_canonical_json();
        let again = InstanceFile::from_json(&canonical).unwrap();
        assert_eq!(original, again);
        assert_eq!(canonical, again.to_canonical_json());
        assert_eq!(original.digest(), again.digest());

        // running the canonical copy gives the same payload and digest
        let dir = tempfile::tempdir().unwrap();
        let copy = dir.path().join(name);
        std::fs::write(&copy, &canonical).unwrap();
        let cmd = if original.self_map.is_some() { "fixed-point" } else { "solve" };
        let a = report(&vi(&[cmd, &f(name)]));
        let b = report(&vi(&[cmd, copy.to_str().unwrap()]));
        assert_eq!(a["payload"], b["payload"]);
        assert_eq!(a["instance_digest"], b["instance_digest"]);
    }
}

#[test]
fn reproduce_all_examples() {
    for id in vi_cli::reproduce::EXAMPLE_IDS {
        let out = vi(&["reproduce", id]);
        let r = report(&out);
        assert_eq!(code(&out), 0, "{id}: {}", r["payload"]["checks"]);
        assert_eq!(r["payload"]["passed"], true);
    }
}
