use std::path::Path;
use std::process::{Command, Output};

fn pfi(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pfi"))
        .args(args)
        .output()
        .expect("run pfi")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write_fixtures(dir: &Path) {
    let o = pfi(&["fixtures", "--write", dir.to_str().unwrap()]);
    assert!(o.status.success());
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_string()
}

#[test]
fn compute_triangle_by_brute_force() {
    let dir = tempfile::tempdir().unwrap();
    write_fixtures(dir.path());
    let o = pfi(&[
        "compute",
        "--graph",
        &path(dir.path(), "k3.graph"),
        "--weights",
        "uniform:0.5",
        "--method",
        "brute",
    ]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "1.125");
}

#[test]
fn compute_projective_k5_from_files() {
    let dir = tempfile::tempdir().unwrap();
    write_fixtures(dir.path());
    let w = dir.path().join("k5.weights");
    std::fs::write(
        &w,
        (0..10)
            .map(|e| format!("{e} {}\n", 0.1 + 0.07 * e as f64))
            .collect::<String>(),
    )
    .unwrap();
    let g = path(dir.path(), "k5-projective.graph");
    let s = path(dir.path(), "k5-projective.scheme");
    let w = w.to_str().unwrap();
    let brute = pfi(&["compute", "--graph", &g, "--weights", w, "--method", "brute"]);
    let mc = pfi(&[
        "compute",
        "--graph",
        &g,
        "--scheme",
        &s,
        "--weights",
        w,
        "--method",
        "multicomplex",
    ]);
    assert!(brute.status.success() && mc.status.success());
    let a: f64 = stdout(&brute).trim().parse().unwrap();
    let b: f64 = stdout(&mc).trim().parse().unwrap();
    assert!((a - b).abs() <= 1e-9 * a);
}

#[test]
fn missing_scheme_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    write_fixtures(dir.path());
    let o = pfi(&[
        "compute",
        "--graph",
        &path(dir.path(), "k5.graph"),
        "--weights",
        "uniform:0.5",
        "--method",
        "multicomplex",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bad_weights_file_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.w");
    std::fs::write(&bad, "0 0.5\n1 x\n").unwrap();
    let o = pfi(&["compute", "--fixture", "k3", "--weights", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
}

#[test]
fn ising_compute_matches_spin_sum() {
    let planar = pfi(&[
        "compute",
        "--fixture",
        "k4",
        "--couplings",
        "uniform:0.7",
        "--beta",
        "0.9",
        "--method",
        "planar",
    ]);
    let brute = pfi(&[
        "compute",
        "--fixture",
        "k4",
        "--couplings",
        "uniform:0.7",
        "--beta",
        "0.9",
        "--method",
        "brute",
    ]);
    let a: f64 = stdout(&planar).trim().parse().unwrap();
    let b: f64 = stdout(&brute).trim().parse().unwrap();
    assert!((a - b).abs() <= 1e-9 * a);
}

#[test]
fn verify_grid_passes() {
    let o = pfi(&["verify", "--fixture", "grid3x3"]);
    assert!(o.status.success());
    assert!(stdout(&o).trim_end().ends_with("PASS"));
}

#[test]
fn verify_projective_k5_reports_two_classes() {
    let o = pfi(&["verify", "--fixture", "k5-projective", "--json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["pass"], true);
    let classes = v["constancy"]["classes"].as_array().unwrap();
    assert_eq!(classes.len(), 2);
    assert_eq!(classes[0]["mask"], 0);
    assert_eq!(classes[1]["mask"], 1);
}

#[test]
fn verify_obstruction() {
    let o = pfi(&["verify", "--fixture", "k33", "--expect-obstruction"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("PASS"));
}

#[test]
fn verify_is_deterministic_given_seed() {
    let strip = |o: Output| {
        let mut v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        for m in v["methods"].as_array_mut().unwrap() {
            m["millis"] = 0.into();
        }
        v
    };
    let a = strip(pfi(&["verify", "--fixture", "k33-projective", "--seed", "5", "--json"]));
    let b = strip(pfi(&["verify", "--fixture", "k33-projective", "--seed", "5", "--json"]));
    assert_eq!(a, b);
}

#[test]
fn tight_tolerance_fails_verify() {
    let o = Command::new(env!("CARGO_BIN_EXE_pfi"))
        .args(["verify", "--fixture", "grid3x3"])
        .env("PFI_TOL", "0")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL"));
}

#[test]
fn every_fixture_verifies() {
    let list = stdout(&pfi(&["fixtures"]));
    for name in list.lines().filter_map(|l| l.split_whitespace().next()) {
        let o = pfi(&["verify", "--fixture", name, "--draws", "5"]);
        assert!(o.status.success(), "{name}: {}", stdout(&o));
    }
}

#[test]
fn obstruction_subcommand() {
    let o = pfi(&["obstruction", "k5", "--trials", "20", "--seed", "3", "--json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["pass"], true);
    assert_eq!(v["trials"], 20);
    assert_eq!(pfi(&["obstruction", "k4"]).status.code(), Some(1));
}

#[test]
fn dartgraph_counts() {
    let o = pfi(&["dartgraph", "--fixture", "k5", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["matchings"], 416);
    assert_eq!(v["link_edges"], 10);
    assert_eq!(v["site_edges"], 30);
    assert_eq!(v["darts"].as_array().unwrap().len(), 20);
}

#[test]
fn reduce_checks_against_brute_force() {
    let o = pfi(&[
        "reduce",
        "--fixture",
        "grid3x3",
        "--delete",
        "0,7",
        "--contract",
        "5",
        "--weights",
        "uniform:0.4",
        "--json",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["pass"], true);
    assert!(v["deviation"].as_f64().unwrap() <= 1e-9);
}

#[test]
fn reduce_dumps_matrix() {
    let o = pfi(&["reduce", "--fixture", "k3", "--dump", "-"]);
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("order 6"));
    assert_eq!(lines.next(), Some("ring multicomplex(0)"));
    assert!(lines.next().unwrap().starts_with("labels "));
    assert!(lines.all(|l| l.split_whitespace().count() == 3));
}
