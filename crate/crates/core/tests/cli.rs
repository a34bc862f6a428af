use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_skewtorsion"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn skewtorsion")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn verify_dim3_json() {
    let o = run(&["--json", "verify", "dim3"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let checks = v["checks"].as_array().unwrap();
    assert!(!checks.is_empty());
    assert!(checks.iter().all(|c| c["status"] == "pass"));
}

#[test]
fn output_is_byte_stable() {
    let a = run(&["--json", "verify", "core", "--seed", "3"]);
    let b = run(&["--json", "verify", "core", "--seed", "3"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn float_tolerance_keeps_pass_set() {
    let passing = |tol: &str| {
        let o = run(&["--json", "--mode", "float", "--tol", tol, "verify", "all"]);
        let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        let mut ids: Vec<String> = v["checks"]
            .as_array()
            .unwrap()
            .iter()
            .filter(|c| c["status"] == "pass")
            .map(|c| c["id"].as_str().unwrap().to_string())
            .collect();
        ids.sort();
        (o.status.code(), ids)
    };
    let (c1, a) = passing("1e-9");
    let (c2, b) = passing("1e-12");
    assert_eq!(c1, Some(0));
    assert_eq!(c2, Some(0));
    assert_eq!(a, b);
}

#[test]
fn model_dump_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let dump = dir.path().join("flag.json");
    let o = run(&["model", "flag", "--dump", path(&dump)]);
    assert_eq!(o.status.code(), Some(0));

    let o = run(&["holonomy", "--model", path(&dump)]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("holonomy dimension 2"), "{s}");
    assert!(s.contains("scal_g = 30"), "{s}");

    let o = run(&["--json", "stabilizer", "--form", path(&dump)]);
    assert_eq!(o.status.code(), Some(0));
    let alg = dir.path().join("su3.json");
    std::fs::write(&alg, &o.stdout).unwrap();

    let o = run(&["decompose", "--algebra", path(&alg)]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("algebra dimension 8 in so(6)"), "{s}");
    assert!(s.contains("irreducible"), "{s}");

    let o = run(&["split", "--form", path(&dump)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("tau^V = 0"));
}

#[test]
fn g2_stabilizer() {
    let dir = tempfile::tempdir().unwrap();
    let dump = dir.path().join("s7.json");
    let o = run(&["model", "sphere", "--param", "delta=5", "--dump", path(&dump)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let o = run(&["stabilizer", "--form", path(&dump)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("dimension 14\n"), "{}", stdout(&o));
}

#[test]
fn malformed_input_is_diagnosed() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\n  \"n\": 7,\n  \"k\": \n}\n").unwrap();
    let o = run(&["stabilizer", "--form", path(&bad)]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("bad.json:4:1"), "{err}");
    assert!(o.stdout.is_empty());
}

#[test]
fn unknown_names_exit_2() {
    assert_eq!(run(&["verify", "nope"]).status.code(), Some(2));
    assert_eq!(run(&["model", "nope"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "core", "--tol", "0"]).status.code(), Some(2));
    assert_eq!(run(&[]).status.code(), Some(2));
}
