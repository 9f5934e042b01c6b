use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use subsum::gen::{read_witness, witness_path};
use subsum::io::read_instance;
use subsum::verify;

fn subsum(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_subsum")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout))
    })
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

fn gen(dir: &Path, name: &str, args: &[&str]) -> String {
    let path = dir.join(name).to_str().unwrap().to_string();
    let mut full = vec!["gen"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["--out", &path]);
    let out = subsum(&full);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    path
}

#[test]
fn unrank_small_bin() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "a.json", r#"{"variant":"subset_sum","items":["1","2","3"],"target":"3"}"#);
    // bin 0 mod 3 holds {}, {1,2}, {3}, {1,2,3} in χ order
    let expected: [&[u64]; 4] = [&[], &[1, 2], &[3], &[1, 2, 3]];
    for (i, want) in expected.iter().enumerate() {
        let index = (i + 1).to_string();
        let out = subsum(&["unrank", &path, "--p", "3", "--k", "0", "--index", &index]);
        assert_eq!(code(&out), 0);
        let v = json(&out);
        let got: Vec<u64> = v["subset"].as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).collect();
        assert_eq!(got, *want);
        assert_eq!(v["bin_size"], "4");
    }
    let out = subsum(&["unrank", &path, "--p", "3", "--k", "0", "--index", "5"]);
    assert_eq!(code(&out), 3);
}

#[test]
fn curve_maximum() {
    let out = subsum(&["curve", "quantum_shifted", "--step", "0.001", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    let l = v["max"]["l"].as_f64().unwrap();
    let gamma = v["max"]["gamma"].as_f64().unwrap();
    assert!((l - 0.809).abs() < 2e-3, "l = {l}");
    assert!((gamma - 0.504).abs() < 1e-3, "gamma = {gamma}");

    let out = subsum(&["curve", "mitm_classical", "--step", "0.25"]);
    let csv = String::from_utf8(out.stdout).unwrap();
    assert_eq!(csv.lines().next(), Some("l,gamma"));
    assert_eq!(csv.lines().count(), 4);
}

#[test]
fn birthday_check_passes() {
    let out = subsum(&["--seed", "3", "stats", "birthday", "--N", "100", "--M", "1000", "--K", "10", "--r", "30"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
    let v = json(&out);
    assert_eq!(v["pass"], true);
    assert_eq!(v["seed"], 3);
    assert!(v["version"].is_string());
}

#[test]
fn stats_on_instance_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = gen(dir.path(), "s.json", &["subset_sum", "--n", "12", "--bits", "24"]);
    let out = subsum(&["stats", "bin-mean", &path, "--b", "0.5", "--trials", "100"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
    assert_eq!(json(&out)["quantity"], "bin_mean");
}

#[test]
fn planted_equal_sums_with_rep() {
    let dir = tempfile::tempdir().unwrap();
    let path = gen(dir.path(), "eq.json", &["--seed", "5", "equal_sums", "--n", "14", "--bits", "14", "--plant", "0.5"]);
    let out = subsum(&["solve", &path, "--algo", "rep"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["result"]["status"], "found");
    assert_eq!(v["verified"], true);
}

#[test]
fn witness_sidecar_verifies() {
    let dir = tempfile::tempdir().unwrap();
    for (variant, bits) in [("subset_sum", "20"), ("shifted_sums", "20"), ("two_subset_sum", "20")] {
        let path = gen(dir.path(), &format!("{variant}.json"), &["--seed", "11", variant, "--n", "12", "--bits", bits, "--plant", "0.5"]);
        let instance = read_instance(Path::new(&path)).unwrap();
        let witness = read_witness(&witness_path(Path::new(&path))).unwrap();
        assert_eq!(witness.seed, 11);
        assert!(verify(&instance, &witness.solution).unwrap(), "{variant}");
    }
}

#[test]
fn pigeonhole_always_found() {
    let dir = tempfile::tempdir().unwrap();
    let path = gen(dir.path(), "ph.json", &["pigeonhole_equal", "--n", "10", "--bits", "6"]);
    let out = subsum(&["solve", &path, "--algo", "pigeonhole"]);
    assert_eq!(code(&out), 0);
    let path = gen(dir.path(), "pm.json", &["pigeonhole_modular", "--n", "8", "--bits", "8", "--modulus", "200"]);
    let out = subsum(&["solve", &path, "--algo", "pigeonhole"]);
    assert_eq!(code(&out), 0);
}

#[test]
fn unsolvable_instance_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "u.json", r#"{"variant":"subset_sum","items":["2","4","8"],"target":"5"}"#);
    for algo in ["auto", "mitm", "brute"] {
        let out = subsum(&["solve", &path, "--algo", algo]);
        assert_eq!(code(&out), 1, "{algo}");
        assert_eq!(json(&out)["result"]["status"], "not_found");
    }
}

#[test]
fn errors_exit_above_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = gen(dir.path(), "big.json", &["subset_sum", "--n", "40", "--bits", "40"]);
    assert!(code(&subsum(&["solve", &path, "--algo", "brute"])) > 2);
    assert_eq!(code(&subsum(&["solve", &path, "--algo", "nonsense"])), 3);
    assert_eq!(code(&subsum(&["solve", "/nonexistent/instance.json"])), 3);
    let bad = write(dir.path(), "bad.json", r#"{"variant":"subset_sum","items":["1","x"],"target":"1"}"#);
    assert_eq!(code(&subsum(&["solve", &bad])), 3);
    assert_eq!(code(&subsum(&["frobnicate"])), 3);
    assert_eq!(code(&subsum(&["--help"])), 0);
}

#[test]
fn gen_is_deterministic() {
    let a = subsum(&["--seed", "9", "gen", "subset_sum", "--n", "10", "--bits", "30", "--plant", "0.3"]);
    let b = subsum(&["--seed", "9", "gen", "subset_sum", "--n", "10", "--bits", "30", "--plant", "0.3"]);
    let c = subsum(&["--seed", "10", "gen", "subset_sum", "--n", "10", "--bits", "30", "--plant", "0.3"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn bench_csv_rows() {
    let out = subsum(&["bench", "subset_sum", "--n-min", "8", "--n-max", "12", "--n-step", "2", "--algos", "mitm,rep", "--reps", "2"]);
    assert_eq!(code(&out), 0);
    let csv = String::from_utf8(out.stdout).unwrap();
    let mut lines = csv.lines();
    assert!(lines.next().unwrap().starts_with("n,algo,reps,median_ms"));
    assert_eq!(lines.count(), 6);
}
