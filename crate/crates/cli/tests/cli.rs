use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;
use toricsyz_core::ehrhart::EhrhartPolynomial;
use toricsyz_core::koszul::{BettiTable, NpVerdict};
use toricsyz_core::semigroup::NormalityReport;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_toricsyz"));
    c.env_remove("TORICSYZ_CACHE_DIR");
    c
}

fn write_poly(dir: &Path, name: &str, vertices: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, format!("{{\"vertices\": {vertices}}}")).unwrap();
    p
}

struct Fixture {
    dir: TempDir,
    triangle: PathBuf,
    cubic: PathBuf,
    simplex: PathBuf,
}

fn fixture() -> Fixture {
    let dir = TempDir::new().unwrap();
    let triangle = write_poly(dir.path(), "simplex2.json", "[[0,0],[1,0],[0,1]]");
    let cubic = write_poly(dir.path(), "cubic_triangle.json", "[[1,0],[0,1],[1,1],[2,2]]");
    let simplex = write_poly(dir.path(), "simplex112.json", "[[0,0,0],[1,0,0],[0,1,0],[1,1,2]]");
    Fixture {
        dir,
        triangle,
        cubic,
        simplex,
    }
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn ok_stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn ehrhart_of_unit_triangle() {
    let f = fixture();
    let out = ok_stdout(&["ehrhart", s(&f.triangle)]);
    assert_eq!(out, "{\"coeffs\":[\"1\",\"3/2\",\"1/2\"]}\n");
    let h: EhrhartPolynomial = serde_json::from_str(&out).unwrap();
    assert_eq!(serde_json::to_string(&h).unwrap() + "\n", out);
}

#[test]
fn np_of_cubic_triangle() {
    let f = fixture();
    let out = ok_stdout(&["np", s(&f.cubic), "--c", "1", "--pmax", "1"]);
    let v: Value = serde_json::from_str(&out).unwrap();
    let verdicts: Vec<NpVerdict> = serde_json::from_value(v["verdicts"].clone()).unwrap();
    assert_eq!(v["verdicts"][0]["status"], "VERIFIED_UP_TO");
    assert_eq!(v["verdicts"][1]["status"], "FAILS");
    assert_eq!((v["verdicts"][1]["i"].as_u64(), v["verdicts"][1]["j"].as_u64()), (Some(1), Some(3)));
    assert_eq!(v["verdicts"][1]["beta"], 1);
    assert_eq!(serde_json::to_value(&verdicts).unwrap(), v["verdicts"]);
}

#[test]
fn np_with_criteria_marks_proven() {
    let f = fixture();
    let out = ok_stdout(&["np", s(&f.triangle), "--c", "2", "--pmax", "2", "--with-criteria"]);
    let v: Value = serde_json::from_str(&out).unwrap();
    for k in 0..=2 {
        assert_eq!(v["verdicts"][k]["status"], "PROVEN", "{out}");
    }
    let out = ok_stdout(&["np", s(&f.cubic), "--pmax", "1", "--with-criteria"]);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["verdicts"][0]["status"], "PROVEN");
    assert_eq!(v["verdicts"][1]["status"], "FAILS");
}

#[test]
fn betti_round_trip_and_certify() {
    let f = fixture();
    let out = ok_stdout(&["betti", s(&f.cubic), "--max-slope", "3", "--certify"]);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["checksum"], true);
    assert_eq!(v["table"]["betti"], serde_json::json!({"0,0": 1, "1,3": 1}));
    let table: BettiTable = serde_json::from_value(v["table"].clone()).unwrap();
    assert_eq!(serde_json::to_value(&table).unwrap(), v["table"]);
    assert_eq!(table.get(1, 3), 1);

    let text = ok_stdout(&["betti", s(&f.cubic), "--max-slope", "3", "--format", "text"]);
    assert!(text.contains("total:"));
    assert!(text.ends_with("checksum: ok\n"));
}

#[test]
fn normality_and_roots() {
    let f = fixture();
    let out = ok_stdout(&["normality", s(&f.simplex)]);
    let rep: NormalityReport = serde_json::from_str(&out).unwrap();
    assert!(!rep.normal);
    let w = rep.witness.unwrap();
    assert_eq!((w.point.0, w.m), (vec![1, 1, 1], 2));

    let out = ok_stdout(&["roots", s(&f.triangle)]);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["r"], 2);
    assert_eq!(v["integer_roots"], serde_json::json!([-1, -2]));

    let out = ok_stdout(&["count", s(&f.cubic), "--d", "2"]);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["points"], 10);
}

#[test]
fn cohomology_and_regularity() {
    let f = fixture();
    let out = ok_stdout(&["cohomology", s(&f.triangle), "--twist", "-3"]);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["dims"], serde_json::json!([0, 0, 1]));

    let out = ok_stdout(&["cohomology", "--product", "1,1", "--twist", "-2,0"]);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["dims"][1], 1);

    let reg = |args: &[&str]| -> bool {
        let v: Value = serde_json::from_str(&ok_stdout(args)).unwrap();
        v["regular"].as_bool().unwrap()
    };
    assert!(reg(&["regularity", s(&f.triangle), "--twist", "0"]));
    assert!(!reg(&["regularity", s(&f.cubic), "--twist", "1"]));
    assert!(reg(&["regularity", s(&f.cubic), "--twist", "2"]));
    assert!(reg(&["regularity", "--product", "2,2", "--twist", "0,0"]));
}

#[test]
fn predict_and_criteria() {
    let f = fixture();
    let out = ok_stdout(&["predict", s(&f.cubic), "--weights", "2;1", "--p", "2", "--check"]);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["prediction"]["twist"], serde_json::json!([3]));
    assert_eq!(v["prediction"]["p"], 2);

    let out = ok_stdout(&["criteria", s(&f.cubic), "--d", "2", "--p", "1"]);
    let v: Value = serde_json::from_str(&out).unwrap();
    let hilbert = v.as_array().unwrap().iter().find(|c| c["criterion"] == "cor_hilbert").unwrap();
    assert_eq!(hilbert["guaranteed_p"], 1);
    assert_eq!(hilbert["threshold"], serde_json::json!([2]));

    let out = ok_stdout(&["criteria", "--product", "2,2", "--degrees", "2,2", "--p", "2"]);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v[0]["criterion"], "cor_prodproj");
    assert_eq!(v[0]["guaranteed_p"], 2);

    let text = ok_stdout(&["criteria", s(&f.triangle), "--d", "1", "--p", "0", "--format", "text"]);
    assert!(text.contains("cor_polytope"));
}

#[test]
fn cache_hits_are_byte_identical() {
    let f = fixture();
    let cache = f.dir.path().join("cache");
    let args = ["betti", s(&f.cubic), "--c", "2", "--max-slope", "2", "--max-i", "3"];
    let cold = bin().args(args).arg("--cache-dir").arg(&cache).output().unwrap();
    assert!(cold.status.success());
    let entries = std::fs::read_dir(&cache).unwrap().count();
    assert_eq!(entries, 1);
    let warm = bin().args(args).env("TORICSYZ_CACHE_DIR", &cache).output().unwrap();
    assert_eq!(cold.stdout, warm.stdout);
    assert_eq!(std::fs::read_dir(&cache).unwrap().count(), 1);
    let uncached = run(&args);
    assert_eq!(cold.stdout, uncached.stdout);

    // different parameters, different entry
    bin()
        .args(["betti", s(&f.cubic), "--c", "2", "--max-slope", "2", "--max-i", "2"])
        .arg("--cache-dir")
        .arg(&cache)
        .output()
        .unwrap();
    assert_eq!(std::fs::read_dir(&cache).unwrap().count(), 2);
}

#[test]
fn output_is_thread_independent() {
    let f = fixture();
    let base = ["np", s(&f.cubic), "--c", "2", "--pmax", "4", "--max-slope", "4"];
    let one = ok_stdout(&[&base[..], &["--threads", "1"]].concat());
    let four = ok_stdout(&[&base[..], &["--threads", "4"]].concat());
    assert_eq!(one, four);
    let v: Value = serde_json::from_str(&one).unwrap();
    assert_eq!(v["verdicts"][3]["status"], "VERIFIED_UP_TO");
    assert_eq!(v["verdicts"][4]["status"], "FAILS");
}

#[test]
fn exit_codes() {
    let f = fixture();
    let bad = write_poly(f.dir.path(), "bad.json", "[[0,0],[1]]");
    assert_eq!(run(&["ehrhart", s(&bad)]).status.code(), Some(2));
    let garbage = f.dir.path().join("garbage.json");
    std::fs::write(&garbage, "not json").unwrap();
    assert_eq!(run(&["ehrhart", s(&garbage)]).status.code(), Some(2));
    assert_eq!(run(&["ehrhart", "/nonexistent/p.json"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        run(&["betti", s(&f.cubic), "--c", "2", "--strand-limit", "10"]).status.code(),
        Some(3)
    );
    assert_eq!(
        run(&["betti", s(&f.cubic), "--max-i", "1", "--max-slope", "200"]).status.code(),
        Some(3)
    );
}

#[test]
fn corpus_is_reproducible() {
    let f = fixture();
    let a = f.dir.path().join("a");
    let b = f.dir.path().join("b");
    for d in [&a, &b] {
        let out = ok_stdout(&["corpus", "--seed", "1", "--count", "10", "--dim", "2", "--bound", "4", "--out", s(d)]);
        let files: Vec<String> = serde_json::from_str(&out).unwrap();
        assert_eq!(files.len(), 10);
    }
    for k in 0..10 {
        let name = format!("polytope_{k:03}.json");
        let x = std::fs::read(a.join(&name)).unwrap();
        assert_eq!(x, std::fs::read(b.join(&name)).unwrap());
        let out = ok_stdout(&["count", s(&a.join(&name))]);
        assert!(out.contains("\"points\""));
    }
    let out = ok_stdout(&["corpus", "--seed", "2", "--count", "5", "--dim", "3", "--bound", "3", "--out", s(&a)]);
    assert_eq!(serde_json::from_str::<Vec<String>>(&out).unwrap().len(), 5);
    assert_eq!(
        run(&["corpus", "--dim", "5", "--out", s(&a)]).status.code(),
        Some(2)
    );
}

#[test]
fn paper_report() {
    let out = ok_stdout(&["report", "--examples", "paper"]);
    assert!(out.starts_with("# Reference example regression"));
    assert_eq!(out.matches("| yes |").count(), 4);
    assert!(out.contains("4/4 claims reproduced."));
}
