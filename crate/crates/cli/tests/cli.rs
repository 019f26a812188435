//! End-to-end tests of the command-line surface: subcommands, flags, output
//! files, determinism, and exit codes.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::tempdir;

fn efe_bo(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_efe-bo"))
        .args(args)
        .current_dir(cwd)
        .output()
        .expect("binary runs")
}

fn tiny_config_json() -> String {
    r#"{
        "n_objectives": 2,
        "methods": [
            { "kind": "VAR" },
            { "kind": "EFE", "tau_sq_min": 1.0, "tau_sq_max": 30.0 }
        ],
        "grid": { "lower": -8.0, "upper": 8.0, "n": 60 },
        "gp": { "lengthscale": 0.5, "signal_variance": 1.0, "noise_variance": 0.04, "jitter": 1e-8 },
        "initial_points": [-5.0, 0.0, 5.0],
        "iterations": 4,
        "obs_noise_std": 0.2,
        "master_seed": 7,
        "workers": 1
    }"#
    .to_string()
}

#[test]
fn theory_check_passes_and_prints_rows() {
    let dir = tempdir().unwrap();
    let out = efe_bo(&["theory-check", "--mc-samples", "200000"], dir.path());
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let stdout = String::from_utf8(out.stdout).unwrap();
    for name in [
        "eig-identity",
        "lcb-linearization-fd",
        "ucb-linearization-fd",
        "linearization-local-argmax",
        "efe-bias-stationary-point",
        "efe-bias-zero-at-matched-tau",
        "efe-bias-sign-change-at-matched-tau",
        "kalman-identity-mc",
        "expected-kl-mc",
        "cross-entropy-mc",
    ] {
        assert!(stdout.contains(name), "missing row {name} in:\n{stdout}");
    }
    assert!(stdout.contains("all 10 checks passed"));
    assert!(!stdout.contains("FAIL"));
}

#[test]
fn starved_monte_carlo_checks_exit_with_code_one() {
    // Ten samples cannot hit a 5e-3 Monte Carlo tolerance; the fixed oracle
    // seeds make this deterministic.
    let dir = tempdir().unwrap();
    let out = efe_bo(&["theory-check", "--mc-samples", "10"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("FAIL"));
}

#[test]
fn bench_writes_all_outputs() {
    let dir = tempdir().unwrap();
    let cfg_path = dir.path().join("tiny.config");
    fs::write(&cfg_path, tiny_config_json()).unwrap();

    let out = efe_bo(
        &["bench", "--config", "tiny.config", "--out", "results"],
        dir.path(),
    );
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );

    let results = dir.path().join("results");
    for file in [
        "summary.csv",
        "scatter.csv",
        "report.json",
        "config.replay.json",
    ] {
        assert!(results.join(file).exists(), "missing {file}");
    }
    let summary = fs::read_to_string(results.join("summary.csv")).unwrap();
    assert!(summary
        .starts_with("method,mean_final_mse,sd_final_mse,mean_final_regret,sd_final_regret\n"));
    assert_eq!(summary.lines().count(), 3);

    // One record file per (method, objective).
    let run_files: Vec<_> = ["VAR", "EFE"]
        .iter()
        .flat_map(|m| fs::read_dir(results.join("runs").join(m)).unwrap())
        .collect();
    assert_eq!(run_files.len(), 4);
}

#[test]
fn bench_is_byte_identical_across_reruns() {
    let dir = tempdir().unwrap();
    let cfg_path = dir.path().join("tiny.config");
    fs::write(&cfg_path, tiny_config_json()).unwrap();

    for out_dir in ["a", "b"] {
        let out = efe_bo(
            &["bench", "--config", "tiny.config", "--out", out_dir],
            dir.path(),
        );
        assert!(out.status.success());
    }
    for file in ["summary.csv", "scatter.csv"] {
        let a = fs::read(dir.path().join("a").join(file)).unwrap();
        let b = fs::read(dir.path().join("b").join(file)).unwrap();
        assert_eq!(a, b, "{file} differs between identical reruns");
    }
}

#[test]
fn bench_seed_flag_overrides_config() {
    let dir = tempdir().unwrap();
    let cfg_path = dir.path().join("tiny.config");
    fs::write(&cfg_path, tiny_config_json()).unwrap();

    let out = efe_bo(
        &[
            "bench",
            "--config",
            "tiny.config",
            "--seed",
            "99",
            "--out",
            "o",
        ],
        dir.path(),
    );
    assert!(out.status.success());
    let replay = fs::read_to_string(dir.path().join("o").join("config.replay.json")).unwrap();
    assert!(replay.contains("\"master_seed\": 99"));
}

#[test]
fn bench_method_filter_selects_subset() {
    let dir = tempdir().unwrap();
    let cfg_path = dir.path().join("tiny.config");
    fs::write(&cfg_path, tiny_config_json()).unwrap();

    let out = efe_bo(
        &[
            "bench",
            "--config",
            "tiny.config",
            "--methods",
            "EFE",
            "--out",
            "o",
        ],
        dir.path(),
    );
    assert!(out.status.success());
    let summary = fs::read_to_string(dir.path().join("o").join("summary.csv")).unwrap();
    assert_eq!(summary.lines().count(), 2);
    assert!(summary.lines().nth(1).unwrap().starts_with("EFE,"));
}

#[test]
fn unknown_method_is_a_config_error() {
    let dir = tempdir().unwrap();
    let cfg_path = dir.path().join("tiny.config");
    fs::write(&cfg_path, tiny_config_json()).unwrap();

    let out = efe_bo(
        &[
            "bench",
            "--config",
            "tiny.config",
            "--methods",
            "GRADIENT",
            "--out",
            "o",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn malformed_config_is_a_config_error() {
    let dir = tempdir().unwrap();
    fs::write(dir.path().join("bad.config"), "{ not json").unwrap();
    let out = efe_bo(
        &["bench", "--config", "bad.config", "--out", "o"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unwritable_output_is_an_io_error() {
    let dir = tempdir().unwrap();
    let cfg_path = dir.path().join("tiny.config");
    fs::write(&cfg_path, tiny_config_json()).unwrap();
    // A file where the output directory should go.
    fs::write(dir.path().join("blocked"), "").unwrap();

    let out = efe_bo(
        &["bench", "--config", "tiny.config", "--out", "blocked/sub"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn vdp_demo_writes_outputs() {
    let dir = tempdir().unwrap();
    let out = efe_bo(&["vdp", "--iterations", "4", "--out", "vdp"], dir.path());
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(dir.path().join("vdp").join("vdp_plot.csv").exists());
    assert!(dir.path().join("vdp").join("vdp_demo.json").exists());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("adaptive EFE"));
    assert!(stdout.contains("fixed EFE"));
}

#[test]
fn shipped_default_config_parses_and_matches_builtin() {
    // The repository root ships the reference configuration; it must stay
    // in sync with the built-in default.
    let shipped =
        fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("../../default.config"))
            .unwrap();
    let parsed: efe_bo::bench::BenchmarkConfig = serde_json::from_str(&shipped).unwrap();
    assert_eq!(parsed, efe_bo::bench::BenchmarkConfig::default());
}
