use std::path::Path;
use std::process::{Command, Output};

use sha2::{Digest, Sha256};

fn ftt(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ftt")).args(args).current_dir(cwd).output().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

fn rows(csv_path: &Path) -> Vec<[f64; 6]> {
    let mut r = csv::Reader::from_path(csv_path).unwrap();
    assert_eq!(r.headers().unwrap(), vec!["x", "t", "re_e0", "im_e0", "re_eh", "im_eh"]);
    r.records()
        .map(|rec| {
            let rec = rec.unwrap();
            std::array::from_fn(|k| rec[k].parse().unwrap())
        })
        .collect()
}

fn manifest(path: &Path) -> serde_json::Value {
    serde_json::from_slice(&std::fs::read(path).unwrap()).unwrap()
}

const PENDELLOSUNG: &str = "alpha = 1.0\nkappa = 0.0\nphase = \"0\"\ninit = \"plane_wave\"\n\
x_min = -4.0\nx_max = 4.0\nnx = 64\nt_max = 3.141592653589793\nnt = 64\nsolver = \"closed_form\"\nname = \"pl\"\n";

#[test]
fn pendellosung_run_has_the_quarter_period_row() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "p.toml", PENDELLOSUNG);
    let o = ftt(&["run", "--config", &cfg], dir.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let data = rows(&dir.path().join("out/pl.csv"));
    assert_eq!(data.len(), 65 * 65);
    let half_pi = std::f64::consts::FRAC_PI_2;
    let quarter: Vec<_> = data.iter().filter(|r| r[1] == half_pi).collect();
    assert_eq!(quarter.len(), 65);
    for r in quarter {
        assert!(r[2].abs() < 1e-12 && (r[5] + 1.0).abs() < 1e-12, "{r:?}");
    }
    // row-major over t then x
    assert!(data[0][1] == 0.0 && data[64][1] == 0.0 && data[65][1] > 0.0);
    assert!(data[1][0] > data[0][0]);
    let m = manifest(&dir.path().join("out/pl.json"));
    assert!(m["metrics"]["plane_wave_gap"].as_f64().unwrap() < 1e-12);
    assert!(m["metrics"]["intensity_drift"].as_f64().unwrap() < 1e-12);
}

#[test]
fn invalid_combination_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "p.toml", "solver = \"picard\"\nalpha = 0.5\nnx = 256\nnt = 64\n");
    let o = ftt(&["run", "--config", &cfg], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(!dir.path().join("out").exists());
    let cfg = write(dir.path(), "q.toml", PENDELLOSUNG);
    let o = ftt(&["run", "--config", &cfg, "--phase", "bent:0.2"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    let o = ftt(&["run", "--config", &cfg, "--solver", "spectral"], dir.path());
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn io_failures_exit_with_three() {
    let dir = tempfile::tempdir().unwrap();
    let o = ftt(&["run", "--config", "missing.toml"], dir.path());
    assert_eq!(o.status.code(), Some(3));
    let cfg = write(dir.path(), "p.toml", PENDELLOSUNG);
    write(dir.path(), "blocker", "not a directory");
    let o = ftt(&["run", "--config", &cfg, "--out", "blocker"], dir.path());
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn gaussian_fd_run_is_deterministic_and_recomputable() {
    let dir = tempfile::tempdir().unwrap();
    let text = "alpha = 0.8\nkappa = 0.05\ninit = \"gaussian\"\nwidth = 0.7\nx_min = -5.0\nx_max = 5.0\n\
nx = 160\nt_max = 1.5\nnt = 96\nsolver = \"fd\"\nphase = \"bent:0.1\"\nseed = 7\n";
    let cfg = write(dir.path(), "g.toml", text);
    for out in ["a", "b"] {
        let o = ftt(&["run", "--config", &cfg, "--out", out], dir.path());
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let a = std::fs::read(dir.path().join("a/field.csv")).unwrap();
    let b = std::fs::read(dir.path().join("b/field.csv")).unwrap();
    assert_eq!(a, b);

    let m = manifest(&dir.path().join("a/field.json"));
    let hex: String = Sha256::digest(&a).iter().map(|b| format!("{b:02x}")).collect();
    assert_eq!(m["grid_sha256"], hex);
    assert_eq!(m["config"]["alpha"], 0.8);
    assert_eq!(m["config"]["seed"], 7);
    assert!(m["runtime_seconds"].as_f64().unwrap() >= 0.0);
    assert!(m["metrics"]["plane_wave_gap"].is_null());

    let data = rows(&dir.path().join("a/field.csv"));
    assert!(data.iter().all(|r| r.iter().all(|v| v.is_finite())));
    let max_abs = data
        .iter()
        .map(|r| r[2].hypot(r[3]).max(r[4].hypot(r[5])))
        .fold(0.0, f64::max);
    let recorded = m["metrics"]["max_abs"].as_f64().unwrap();
    assert!((max_abs - recorded).abs() <= 1e-15 * recorded, "{max_abs} vs {recorded}");
    let w = 161;
    let mut drift: f64 = 0.0;
    for (k, r) in data.iter().enumerate().skip(w) {
        let i0 = &data[k % w];
        let now = r[2] * r[2] + r[3] * r[3] + r[4] * r[4] + r[5] * r[5];
        let start = i0[2] * i0[2] + i0[3] * i0[3] + i0[4] * i0[4] + i0[5] * i0[5];
        drift = drift.max((now - start).abs());
    }
    let recorded = m["metrics"]["intensity_drift"].as_f64().unwrap();
    assert!((drift - recorded).abs() <= 1e-14 * recorded.max(1.0), "{drift} vs {recorded}");
}

#[test]
fn picard_and_table_profiles_run() {
    let dir = tempfile::tempdir().unwrap();
    let mut table = String::from("x,re_e0,im_e0,re_eh,im_eh\n");
    for k in 0..=80 {
        let x = -4.0 + 0.1 * k as f64;
        table.push_str(&format!("{x},{},0,0,0\n", (-x * x).exp()));
    }
    write(dir.path(), "beam.csv", &table);
    let text = "init = \"table\"\ntable = \"beam.csv\"\nsolver = \"picard\"\nphase = \"bent:0.2\"\n\
x_min = -4.0\nx_max = 4.0\nnx = 128\nt_max = 1.0\nnt = 16\n";
    let cfg = write(dir.path(), "t.toml", text);
    let o = ftt(&["run", "--config", &cfg], dir.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(rows(&dir.path().join("out/field.csv")).len(), 17 * 129);
}

#[test]
fn verify_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let o = ftt(&["verify", "--only", ""], dir.path());
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stdout).contains("0 checks, 0 failed"));

    let o = ftt(&["verify", "--only", "table_integral,stankovic"], dir.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stdout));

    let o = ftt(&["verify", "--only", "table_integral", "--tol-scale", "0"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stdout).contains("FAIL"));

    let o = ftt(&["verify", "--only", "nonsense"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    let o = ftt(&["verify", "--tol-scale", "-1"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    let o = ftt(&["verify", "--bogus-flag"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(ftt(&["--help"], dir.path()).status.success());
}

#[test]
fn full_verify_suite_passes() {
    let dir = tempfile::tempdir().unwrap();
    let o = ftt(&["verify", "--seed", "11"], dir.path());
    let out = String::from_utf8_lossy(&o.stdout);
    assert!(o.status.success(), "{out}");
    for name in ["lemma41", "lemma42", "table_integral", "stankovic", "limits", "identities"] {
        assert!(out.contains(name), "{name} missing from\n{out}");
    }
}

#[test]
fn pendellosung_table() {
    let dir = tempfile::tempdir().unwrap();
    let o = ftt(&["pendellosung", "--alpha", "1", "--t-max", "3.141592653589793", "--steps", "2"], dir.path());
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "t,re_e0,im_e0,re_eh,im_eh");
    let mid: Vec<f64> = lines[2].split(',').map(|v| v.parse().unwrap()).collect();
    assert!(mid[1].abs() < 1e-12 && (mid[4] + 1.0).abs() < 1e-12, "{mid:?}");
    let o = ftt(&["pendellosung", "--alpha", "0.5", "--t-max", "2", "--steps", "0"], dir.path());
    assert_eq!(o.status.code(), Some(1));
}
