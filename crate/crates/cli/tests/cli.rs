use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn tte(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tte"))
        .args(args)
        .env_remove("TTE_MAX_PARALLELISM")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path
}

fn s(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn sqrt_cosine(dir: &TempDir, beta: f64) -> PathBuf {
    write(dir, &format!("p{beta}.json"), &format!(r#"{{"kind": "sqrt_cosine", "a": 1, "params": {{"beta": {beta}}}}}"#))
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines().skip(1).map(|l| l.split(',').map(str::to_owned).collect()).collect()
}

#[test]
fn profile_info_reports_scales() {
    let dir = TempDir::new().unwrap();
    let p = sqrt_cosine(&dir, 0.5);
    let out = tte(&["profile-info", "--profile", s(&p)]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let field = |name: &str| -> f64 {
        let line = text.lines().find(|l| l.starts_with(&format!("{name}="))).unwrap();
        line[name.len() + 1..].parse().unwrap()
    };
    let b = 1.0 + 1.0 / std::f64::consts::PI;
    assert_eq!(field("a"), 1.0);
    assert!((field("b") - b).abs() < 1e-10);
    assert!((field("s") + 1.0 / std::f64::consts::PI).abs() < 1e-10);
    assert!((field("n0") - 2.25).abs() < 1e-12);
    assert!(text.contains("sign_class=a<b"));

    let json = tte(&["profile-info", "--profile", s(&p), "--json"]);
    let v: Value = serde_json::from_str(&stdout(&json)).unwrap();
    assert!((v["b"].as_f64().unwrap() - b).abs() < 1e-10);
    assert_eq!(v["hash"].as_str().unwrap().len(), 64);
}

#[test]
fn eval_writes_csv() {
    let dir = TempDir::new().unwrap();
    let unit = write(&dir, "unit.json", r#"{"kind": "unit", "a": 1}"#);
    let out_path = dir.path().join("d.csv");
    let out = tte(&["eval", "--profile", s(&unit), "--k", "3", "--k", "2,-1.5", "--out", s(&out_path)]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(&out_path).unwrap();
    assert!(text.starts_with("k_re,k_im,d_re,d_im,normalized_re,normalized_im\n"));
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[1][0].parse::<f64>().unwrap(), 2.0);
    assert_eq!(rows[1][1].parse::<f64>().unwrap(), -1.5);
    for row in &rows {
        assert!(row[2].parse::<f64>().unwrap().abs() < 1e-8);
        assert!(row[3].parse::<f64>().unwrap().abs() < 1e-8);
    }

    let higher = tte(&["eval", "--profile", s(&unit), "--k", "3", "--l", "2"]);
    assert_eq!(code(&higher), 0);
    let rows = csv_rows(&stdout(&higher));
    assert_eq!(rows[0][4], "");
    assert_eq!(rows[0][5], "");
}

#[test]
fn eigs_is_deterministic_and_round_trips() {
    let dir = TempDir::new().unwrap();
    let p = sqrt_cosine(&dir, 0.5);
    let z1 = dir.path().join("z1.json");
    let z2 = dir.path().join("z2.json");
    for z in [&z1, &z2] {
        let out = tte(&["eigs", "--profile", s(&p), "--wedge", "0.5,40,-0.2,0.2", "--out", s(z)]);
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    }
    let first = fs::read(&z1).unwrap();
    assert_eq!(first, fs::read(&z2).unwrap());

    let v: Value = serde_json::from_slice(&first).unwrap();
    assert_eq!(v["k_min_excluded"], 0.5);
    let zeros = v["zeros"].as_array().unwrap();
    assert!(!zeros.is_empty());
    for z in zeros {
        assert!(z["re"].is_f64() && z["im"].is_f64());
        assert!(z["multiplicity"].as_u64().unwrap() >= 1);
        assert!(z["residual"].is_f64());
    }

    let cmp = tte(&["compare", "--a", s(&z1), "--b", s(&z1)]);
    assert_eq!(code(&cmp), 0);
    let verdict: Value = serde_json::from_str(&stdout(&cmp)).unwrap();
    assert_eq!(verdict["verdict"], "indistinguishable");
    assert_eq!(verdict["max_mismatch"], 0.0);

    let dens_csv = dir.path().join("n.csv");
    let summary = dir.path().join("n.json");
    let out = tte(&[
        "density", "--spectrum", s(&z1), "--wedge", "0.5,40,-0.2,0.2",
        "--out", s(&dens_csv), "--summary", s(&summary),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let counts: Vec<u64> = csv_rows(&fs::read_to_string(&dens_csv).unwrap())
        .iter()
        .map(|r| r[1].parse().unwrap())
        .collect();
    assert!(counts.windows(2).all(|w| w[0] <= w[1]));
    let summary: Value = serde_json::from_str(&fs::read_to_string(&summary).unwrap()).unwrap();
    assert!(summary["delta"].as_f64().unwrap() > 0.0);
    assert!(summary["stderr"].is_f64());
}

#[test]
fn distinct_profiles_compare_distinct() {
    let dir = TempDir::new().unwrap();
    let mut paths = Vec::new();
    for beta in [0.5, 0.3] {
        let p = sqrt_cosine(&dir, beta);
        let z = dir.path().join(format!("z{beta}.json"));
        let out = tte(&["eigs", "--profile", s(&p), "--wedge", "0.5,40,-0.2,0.2", "--out", s(&z)]);
        assert_eq!(code(&out), 0);
        paths.push(z);
    }
    let cmp = tte(&["compare", "--a", s(&paths[0]), "--b", s(&paths[1])]);
    assert_eq!(code(&cmp), 0);
    let verdict: Value = serde_json::from_str(&stdout(&cmp)).unwrap();
    assert_eq!(verdict["verdict"], "distinct");
}

#[test]
fn indicator_and_type() {
    let dir = TempDir::new().unwrap();
    let p = sqrt_cosine(&dir, 0.5);
    let out = tte(&["indicator", "--profile", s(&p), "--r-lo", "20", "--r-hi", "60", "--theta", "1.5707963267948966", "--theta", "0.5"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!(text.starts_with("theta,h,residual\n"));
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 2);
    let sum = 2.0 + 1.0 / std::f64::consts::PI;
    let h: f64 = rows[0][1].parse().unwrap();
    assert!((h - sum).abs() < 1e-2 * sum, "h = {h}");

    let out = tte(&["type", "--profile", s(&p), "--r-lo", "20", "--r-hi", "60"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(v["type_estimate"].as_f64().unwrap() > 0.0);
    assert_eq!(v["scales"]["n0"], 2.25);
}

#[test]
fn check_asymptotics_rows() {
    let dir = TempDir::new().unwrap();
    let p = sqrt_cosine(&dir, 0.5);
    let out = tte(&["check-asymptotics", "--profile", s(&p)]);
    assert_eq!(code(&out), 0);
    let rows = csv_rows(&stdout(&out));
    assert_eq!(rows.len(), 11);
    assert_eq!(rows[0][0].parse::<f64>().unwrap(), 100.0);
    assert_eq!(rows[10][0].parse::<f64>().unwrap(), 200.0);
    assert!(rows.iter().all(|r| r[1].parse::<f64>().unwrap() <= 0.1));
}

#[test]
fn validation_errors_exit_one() {
    let dir = TempDir::new().unwrap();
    let p = sqrt_cosine(&dir, 0.5);
    let bad = write(&dir, "bad.json", r#"{"kind": "cubic", "a": 1}"#);
    let missing = dir.path().join("missing.json");

    assert_eq!(code(&tte(&["bogus"])), 1);
    assert_eq!(code(&tte(&["profile-info", "--profile", s(&p), "--frobnicate"])), 1);
    assert_eq!(code(&tte(&["profile-info", "--profile", s(&missing)])), 1);
    assert_eq!(code(&tte(&["profile-info", "--profile", s(&bad)])), 1);
    assert_eq!(code(&tte(&["eval", "--profile", s(&p), "--k", "600"])), 1);
    assert_eq!(code(&tte(&["eigs", "--profile", s(&p), "--wedge", "0.5,40,0.2,0.1"])), 1);
    assert_eq!(code(&tte(&["compare", "--a", s(&bad), "--b", s(&bad)])), 1);

    let env = Command::new(env!("CARGO_BIN_EXE_tte"))
        .args(["profile-info", "--profile", s(&p)])
        .env("TTE_MAX_PARALLELISM", "zero")
        .output()
        .unwrap();
    assert_eq!(code(&env), 1);
    let env = Command::new(env!("CARGO_BIN_EXE_tte"))
        .args(["profile-info", "--profile", s(&p)])
        .env("TTE_MAX_PARALLELISM", "1")
        .output()
        .unwrap();
    assert_eq!(code(&env), 0);
}

#[test]
fn numerical_failure_exits_two() {
    let dir = TempDir::new().unwrap();
    let unit = write(&dir, "unit.json", r#"{"kind": "unit", "a": 1}"#);
    let out = tte(&["eigs", "--profile", s(&unit), "--wedge", "0.5,20,-0.2,0.2"]);
    assert_eq!(code(&out), 2, "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn cartwright_rejects_foreign_spectrum() {
    let dir = TempDir::new().unwrap();
    let p5 = sqrt_cosine(&dir, 0.5);
    let p3 = sqrt_cosine(&dir, 0.3);
    let z = dir.path().join("z.json");
    assert_eq!(code(&tte(&["eigs", "--profile", s(&p3), "--wedge", "0.5,20,-3.141592653589793,3.141592653589793", "--out", s(&z)])), 0);
    let out = tte(&["cartwright", "--profile", s(&p5), "--spectrum", s(&z)]);
    assert_eq!(code(&out), 1);

    let out = tte(&["cartwright", "--profile", s(&p3), "--spectrum", s(&z), "--r-lo", "20", "--r-hi", "60"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(v["checks"].as_array().is_some_and(|c| !c.is_empty()));
}
