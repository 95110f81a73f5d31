use std::path::Path;
use std::process::Command;

use floes_cli::artifacts::{read_floes, FIELDS_HEADER, FLOES_HEADER};
use floes_cli::config::{PopulationSpec, SimConfig};
use floes_cli::pipeline::{compare_files, example2_pipeline, RunContext};

fn floes() -> Command {
    Command::new(env!("CARGO_BIN_EXE_floes"))
}

fn small_example2() -> SimConfig {
    let mut cfg = SimConfig::example2(false);
    cfg.population = PopulationSpec::Lattice { nx: 20, ny: 20, radius: 0.02, thickness: 1.0 };
    cfg.hydro.nx = 10;
    cfg.hydro.ny = 10;
    cfg.t_end = 0.2;
    cfg.snapshot_stride = 100;
    cfg.compare.times = vec![0.0, 0.1, 0.2];
    cfg.run_id = Some("small".into());
    cfg
}

fn header(path: &Path) -> Vec<String> {
    let mut r = csv::Reader::from_path(path).unwrap();
    r.headers().unwrap().iter().map(str::to_string).collect()
}

#[test]
fn config_round_trips_through_toml() {
    for cfg in [SimConfig::example1(), SimConfig::example2(false), small_example2()] {
        let text = cfg.to_toml_string().unwrap();
        assert!(text.contains("T = "));
        assert_eq!(SimConfig::from_toml_str(&text).unwrap(), cfg);
    }
    assert!(SimConfig::from_toml_str("bogus = 1").is_err());
    assert!(SimConfig::from_toml_str("dt = -1.0").is_err());
}

#[test]
fn compare_on_written_files_matches_the_in_memory_run() {
    let tmp = tempfile::tempdir().unwrap();
    let ctx = RunContext { root: tmp.path().to_path_buf(), command: "test".into(), overrides: vec![] };
    let cfg = small_example2();
    let (dir, run) = example2_pipeline(&cfg, &ctx).unwrap();
    for f in ["manifest.json", "floes.csv", "moments.csv", "fields.csv", "cells.csv", "compare.json"] {
        assert!(dir.join(f).exists(), "missing {f}");
    }
    assert_eq!(header(&dir.join("floes.csv")), FLOES_HEADER);
    assert_eq!(header(&dir.join("fields.csv")), FIELDS_HEADER);
    let rows = compare_files(&dir.join("floes.csv"), &dir.join("fields.csv"), cfg.materials.draft_ratio).unwrap();
    assert_eq!(rows.len(), run.rows.len());
    for (a, b) in rows.iter().zip(&run.rows) {
        assert!((a.time - b.time).abs() < 1e-12);
        assert!((a.velocity.absolute - b.velocity.absolute).abs() <= 1e-12 * (1.0 + b.velocity.absolute));
        assert!((a.density.absolute - b.density.absolute).abs() <= 1e-12 * (1.0 + b.density.absolute));
    }
    // lattice floes at rest against a fluid at rest
    assert!(run.rows[0].velocity.absolute == 0.0);
    assert!(run.rows[0].density.absolute < 1e-12);
}

#[test]
fn binary_runs_particle_config_with_overrides() {
    let tmp = tempfile::tempdir().unwrap();
    let mut cfg = SimConfig::example1();
    cfg.population = PopulationSpec::default();
    let cfg_path = tmp.path().join("run.toml");
    std::fs::write(&cfg_path, cfg.to_toml_string().unwrap()).unwrap();
    let out = tmp.path().join("out");
    let done = floes()
        .args(["sim", "particle"])
        .arg(&cfg_path)
        .args(["--T", "0.05", "--seed", "7", "--run-id", "cli", "--threads", "2", "--out"])
        .arg(&out)
        .output()
        .unwrap();
    assert!(done.status.success());
    let dir = out.join("cli");
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("manifest.json")).unwrap()).unwrap();
    let text = manifest.to_string();
    assert!(text.contains("T=0.05") && text.contains("seed=7"), "{text}");
    let rows = read_floes(&dir.join("floes.csv")).unwrap();
    assert!(!rows.is_empty());
    let last = rows.iter().map(|r| r.t).fold(0.0, f64::max);
    assert!((last - 0.05).abs() < 1e-12);
}

#[test]
fn binary_reports_bad_input_with_exit_code_2() {
    let tmp = tempfile::tempdir().unwrap();
    let bad = tmp.path().join("bad.toml");
    std::fs::write(&bad, "dt = 0.0\n").unwrap();
    let out = floes().args(["sim", "particle"]).arg(&bad).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
    let missing = floes().args(["sim", "particle", "/nonexistent.toml"]).output().unwrap();
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn binary_runs_are_reproducible() {
    let tmp = tempfile::tempdir().unwrap();
    let run = |id: &str, threads: &str| {
        let done = floes()
            .args(["sim", "example1", "--T", "0.1", "--run-id", id, "--threads", threads, "--out"])
            .arg(tmp.path())
            .output()
            .unwrap();
        assert!(done.status.success());
        std::fs::read(tmp.path().join(id).join("floes.csv")).unwrap()
    };
    assert_eq!(run("a", "1"), run("b", "3"));
}
