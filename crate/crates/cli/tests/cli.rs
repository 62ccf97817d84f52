use std::path::Path;
use std::process::Command;

use wikitrends_cli::{run_pipeline, run_stage, write_fixture, FixtureOptions, PipelineConfig, Stage};

fn fixture(dir: &Path) -> PipelineConfig {
    let opts = FixtureOptions {
        t_hours: 300,
        n_noise_pages: 30,
        ..FixtureOptions::default()
    };
    let path = write_fixture(dir, &opts).unwrap();
    PipelineConfig::load(&path).unwrap()
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_wikitrends"))
}

#[test]
fn stages_compose_to_run() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = fixture(dir.path());
    let whole = run_pipeline(&cfg).unwrap();
    cfg.output_dir = dir.path().join("staged");
    let mut last = None;
    for s in Stage::ALL {
        last = run_stage(&cfg, s).unwrap();
    }
    assert_eq!(last.unwrap(), whole);
    for name in ["en/trends.json", "fr/graph.gexf", "ru/metrics.csv", "alignment.json"] {
        assert!(whole.files.iter().any(|f| f.path == name), "{name} missing");
    }
}

#[test]
fn binary_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let status = bin().args(["synth", "--hours", "300", "--noise-pages", "30", "--output"]).arg(dir.path()).status().unwrap();
    assert!(status.success());
    let config = dir.path().join("config.toml");
    let mut manifests = Vec::new();
    for out in ["a", "b"] {
        let status = bin()
            .args(["--log-level", "warn", "--config"])
            .arg(&config)
            .arg("--output")
            .arg(dir.path().join(out))
            .arg("run")
            .status()
            .unwrap();
        assert!(status.success());
        manifests.push(std::fs::read(dir.path().join(out).join("manifest.json")).unwrap());
    }
    assert_eq!(manifests[0], manifests[1]);

    // a different seed changes the seeded outputs
    let status = bin()
        .args(["--log-level", "error", "--seed", "7", "--config"])
        .arg(&config)
        .arg("--output")
        .arg(dir.path().join("c"))
        .arg("run")
        .status()
        .unwrap();
    assert!(status.success());
    assert_ne!(std::fs::read(dir.path().join("c/manifest.json")).unwrap(), manifests[0]);
}

#[test]
fn config_errors_exit_2_without_outputs() {
    let dir = tempfile::tempdir().unwrap();
    fixture(dir.path());
    let config = dir.path().join("config.toml");
    let text = std::fs::read_to_string(&config).unwrap().replace("en/edges.tsv", "en/missing.tsv");
    std::fs::write(&config, text).unwrap();
    let out = bin().args(["--log-level", "off", "--config"]).arg(&config).arg("run").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(!dir.path().join("out").exists());

    let out = bin().args(["--log-level", "off", "--config"]).arg(dir.path().join("nope.toml")).arg("run").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn missing_cache_is_a_data_error() {
    let dir = tempfile::tempdir().unwrap();
    fixture(dir.path());
    let out = bin()
        .args(["--log-level", "off", "--config"])
        .arg(dir.path().join("config.toml"))
        .arg("cluster")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}
