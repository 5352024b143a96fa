use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use egma::oracle::ms_critical_point;
use egma_cli::artifacts::read_path_csv;
use egma_cli::RunRecord;
use serde_json::Value;

fn configs() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs").canonicalize().unwrap()
}

fn egma(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_egma")).current_dir(dir).args(args).output().unwrap()
}

fn write_config(dir: &Path, name: &str, text: &str) -> String {
    let file = dir.join(name);
    fs::write(&file, text).unwrap();
    file.to_str().unwrap().to_string()
}

const SMALL_MS: &str = r#"
[model]
name = "maier-stein"
epsilon = 0.1
beta = 10.0

[endpoints]
start = [-1.0, 0.0]
end = [1.0, 0.0]

[init]
kind = "linear"
bump = { amplitude = 0.1, axis = 1 }

[solver]
n_segments = 100
ds = 0.01
max_iters = 5000

[output]
dir = "run"
"#;

#[test]
fn maier_stein_preset_converges_to_the_critical_energy() {
    let dir = tempfile::tempdir().unwrap();
    let config = configs().join("maier-stein.toml");
    let out = egma(dir.path(), &["solve", config.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let record = RunRecord::from_json(&String::from_utf8(out.stdout).unwrap()).unwrap();
    let (_, e_c) = ms_critical_point(0.1).unwrap();
    assert!((record.final_energy - e_c).abs() < 1e-4, "{} vs {e_c}", record.final_energy);

    let run = dir.path().join("out/maier-stein");
    let saved = RunRecord::from_json(&fs::read_to_string(run.join("run.json")).unwrap()).unwrap();
    assert_eq!(saved, record);
    let table = read_path_csv(&run.join("path.csv")).unwrap();
    assert_eq!(table.alpha.len(), 1001);
    assert!(table.lambda.iter().any(|&l| l == 0.0));
    let energy = fs::read_to_string(run.join("energy.csv")).unwrap();
    assert!(energy.starts_with("iter,E_n,residual\n0,"));
}

#[test]
fn divergent_preset_exits_with_3() {
    let dir = tempfile::tempdir().unwrap();
    let config = configs().join("maier-stein-divergent.toml");
    let out = egma(dir.path(), &["solve", config.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    let record = RunRecord::from_json(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert_eq!(record.status, egma::Status::Diverged);
    assert!(record.divergence.is_some());
}

#[test]
fn max_iters_exits_with_2() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "c.toml", &SMALL_MS.replace("max_iters = 5000", "max_iters = 3"));
    assert_eq!(egma(dir.path(), &["solve", &config]).status.code(), Some(2));
}

#[test]
fn malformed_configs_exit_with_1_and_write_nothing() {
    let broken = [
        SMALL_MS.replace("beta = 10.0", "beta = \"ten\""),
        SMALL_MS.replace("epsilon = 0.1", "epsilon = 0.1\nbta = 3"),
        SMALL_MS.replace("end = [1.0, 0.0]", "end = [1.0, 0.0, 2.0]"),
        SMALL_MS.replace("ds = 0.01", "ds = -0.01"),
        SMALL_MS.replace("kind = \"linear\"", "kind = \"waypoints\"\nfile = \"missing.csv\""),
        SMALL_MS.replace("[init]", "[init]\nnoise = 0.1"),
        "this is not a config".to_string(),
    ];
    for text in &broken {
        let dir = tempfile::tempdir().unwrap();
        let config = write_config(dir.path(), "c.toml", text);
        let out = egma(dir.path(), &["solve", &config]);
        assert_eq!(out.status.code(), Some(1), "{text}");
        assert!(!String::from_utf8_lossy(&out.stderr).is_empty());
        assert!(!dir.path().join("run").exists(), "{text}");
    }
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(egma(dir.path(), &["solve", "nowhere.toml"]).status.code(), Some(1));
}

#[test]
fn parse_errors_name_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "c.toml", &SMALL_MS.replace("beta = 10.0", "beta = \"ten\""));
    let err = String::from_utf8(egma(dir.path(), &["solve", &config]).stderr).unwrap();
    assert!(err.contains("line 5") && err.contains("beta"), "{err}");
}

#[test]
fn identical_configs_give_bit_identical_paths() {
    let dir = tempfile::tempdir().unwrap();
    let text = format!("seed = 7\n{}", SMALL_MS.replace("[init]", "[init]\nnoise = 0.05"));
    let a = write_config(dir.path(), "a.toml", &text);
    let b = write_config(dir.path(), "b.toml", &text.replace("dir = \"run\"", "dir = \"again\""));
    assert_eq!(egma(dir.path(), &["solve", &a]).status.code(), Some(0));
    assert_eq!(egma(dir.path(), &["solve", &b]).status.code(), Some(0));
    let first = fs::read(dir.path().join("run/path.csv")).unwrap();
    assert_eq!(first, fs::read(dir.path().join("again/path.csv")).unwrap());
    assert_eq!(
        fs::read(dir.path().join("run/energy.csv")).unwrap(),
        fs::read(dir.path().join("again/energy.csv")).unwrap()
    );

    let c = write_config(dir.path(), "c.toml", &text.replace("seed = 7", "seed = 8").replace("\"run\"", "\"other\""));
    assert_eq!(egma(dir.path(), &["solve", &c]).status.code(), Some(0));
    assert_ne!(first, fs::read(dir.path().join("other/path.csv")).unwrap());
}

#[test]
fn beta_sweep_crosses_the_pattern_threshold() {
    let dir = tempfile::tempdir().unwrap();
    let config = configs().join("maier-stein.toml");
    let out = egma(dir.path(), &["sweep", config.to_str().unwrap(), "--param", "beta", "--values", "3.4,3.5"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let summary = fs::read_to_string(dir.path().join("out/maier-stein/sweep-beta.csv")).unwrap();
    let lines: Vec<&str> = summary.lines().collect();
    assert_eq!(lines[0], "value,status,final_energy,iterations");
    assert!(lines[1].starts_with("3.4,converged,") && lines[2].starts_with("3.5,converged,"), "{summary}");
    let ymax = |v: &str| {
        let t = read_path_csv(&dir.path().join(format!("out/maier-stein/beta-{v}/path.csv"))).unwrap();
        t.nodes.iter().skip(1).step_by(2).fold(0.0_f64, |m, y| m.max(y.abs()))
    };
    assert!(ymax("3.4") < 0.05);
    assert!(ymax("3.5") > ymax("3.4") + 0.05);
}

#[test]
fn empty_sweep_writes_an_empty_summary() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "c.toml", SMALL_MS);
    let out = egma(dir.path(), &["sweep", &config, "--param", "n_segments", "--values", ""]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let summary = fs::read_to_string(dir.path().join("run/sweep-n_segments.csv")).unwrap();
    assert_eq!(summary.trim(), "value,status,final_energy,iterations");
}

#[test]
fn unknown_sweep_parameter_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "c.toml", SMALL_MS);
    let out = egma(dir.path(), &["sweep", &config, "--param", "gamma", "--values", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!dir.path().join("run").exists());
}

fn two_channel_energy(dir: &Path, overrides: &[(&str, &str)]) -> RunRecord {
    let mut text = fs::read_to_string(configs().join("two-channel.toml")).unwrap();
    for (from, to) in overrides {
        assert!(text.contains(from));
        text = text.replace(from, to);
    }
    let config = write_config(dir, "tc.toml", &text);
    let out = egma(dir, &["solve", &config]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    RunRecord::from_json(&String::from_utf8(out.stdout).unwrap()).unwrap()
}

#[test]
fn two_channel_upper_channel_at_low_noise() {
    let dir = tempfile::tempdir().unwrap();
    let r = two_channel_energy(dir.path(), &[]);
    assert!((r.final_energy - 1.5516).abs() < 5e-4, "{}", r.final_energy);
    let t = read_path_csv(&dir.path().join("out/two-channel/path.csv")).unwrap();
    let top = t.nodes.iter().skip(1).step_by(2).fold(f64::MIN, |m, &y| m.max(y));
    assert!((top - 1.0).abs() < 0.05, "{top}");
}

#[test]
fn two_channel_lower_channel_at_low_noise() {
    let dir = tempfile::tempdir().unwrap();
    let r = two_channel_energy(
        dir.path(),
        &[("amplitude = 1.0", "amplitude = 0.0"), ("n_segments = 200", "n_segments = 1000"), ("ds = 1e-4", "ds = 1e-3")],
    );
    assert!((r.final_energy - 1.0849).abs() < 5e-4, "{}", r.final_energy);
}

#[test]
fn two_channel_at_high_noise() {
    let dir = tempfile::tempdir().unwrap();
    let r = two_channel_energy(
        dir.path(),
        &[("epsilon = 0.05", "epsilon = 0.5"), ("n_segments = 200", "n_segments = 400"), ("ds = 1e-4", "ds = 1e-5")],
    );
    assert!((r.final_energy - 23.9939).abs() < 1e-3, "{}", r.final_energy);
}

#[test]
fn oracle_answers_json_queries() {
    let dir = tempfile::tempdir().unwrap();
    let out = egma(dir.path(), &["oracle", r#"{"op":"ms-critical-point","epsilon":0.1}"#]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let (x_c, e_c) = ms_critical_point(0.1).unwrap();
    assert_eq!(v["x_c_abs"].as_f64().unwrap(), x_c);
    assert_eq!(v["E_c"].as_f64().unwrap(), e_c);

    let file = write_config(dir.path(), "q.json", r#"{"op":"quad-fw-times","start":1.0,"end":2.0}"#);
    assert_eq!(egma(dir.path(), &["oracle", &file]).status.code(), Some(0));
    assert_eq!(egma(dir.path(), &["oracle", r#"{"op":"no-such-op"}"#]).status.code(), Some(1));
}

#[test]
fn gradcheck_passes_for_every_model() {
    let dir = tempfile::tempdir().unwrap();
    for model in ["quadratic", "two-channel", "lj-cluster", "maier-stein"] {
        let out = egma(dir.path(), &["gradcheck", "--model", model, "--points", "20", "--seed", "3"]);
        assert_eq!(out.status.code(), Some(0), "{model}: {}", String::from_utf8_lossy(&out.stdout));
        for line in String::from_utf8(out.stdout).unwrap().lines() {
            let v: Value = serde_json::from_str(line).unwrap();
            assert_eq!(v["passed"], Value::Bool(true));
            assert!(v["max_deviation"].as_f64().unwrap() <= 1e-5);
        }
    }
    assert_eq!(egma(dir.path(), &["gradcheck", "--model", "lj8"]).status.code(), Some(1));
}
