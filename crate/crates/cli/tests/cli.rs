//! End-to-end checks of the artifact files and the binary's exit codes.

use std::fs;
use std::path::Path;
use std::process::Command;

use rmab::regret::theoretical_slope;
use rmab::scenario::{scenario, ScenarioName};
use rmab_cli::{run_config_file, run_scenario, Manifest, Overrides};

/// Small overrides so scenario batches finish in milliseconds.
fn tiny() -> Overrides {
    Overrides {
        runs: Some(5),
        horizon: Some(500),
        seed: None,
    }
}

fn read(path: &Path) -> String {
    fs::read_to_string(path).unwrap()
}

#[test]
fn scenario_writes_expected_files() {
    let dir = tempfile::tempdir().unwrap();
    let (manifest, files) =
        run_scenario(ScenarioName::Fig3MarkovRegret, dir.path(), &tiny()).unwrap();

    // one regret CSV per policy plus the manifest
    assert_eq!(manifest.outputs.len(), 3);
    assert_eq!(files.len(), 4);
    for label in ["proposed", "ucb1", "dsee"] {
        let path = dir.path().join(format!("fig3_markov_regret_{label}.csv"));
        assert!(path.exists(), "{path:?}");
        let text = read(&path);
        assert!(text.starts_with("t,mean_regret,std_regret,normalized_regret\n"));
        assert!(!text.contains('\r'));
        // one row per grid time, last row at the overridden horizon
        assert!(text.lines().last().unwrap().starts_with("500,"));
    }
    assert!(dir.path().join("fig3_markov_regret_manifest.json").exists());
}

#[test]
fn repeated_invocations_are_byte_identical() {
    let dir_a = tempfile::tempdir().unwrap();
    let dir_b = tempfile::tempdir().unwrap();
    run_scenario(ScenarioName::Fig4BernoulliRegret, dir_a.path(), &tiny()).unwrap();
    run_scenario(ScenarioName::Fig4BernoulliRegret, dir_b.path(), &tiny()).unwrap();
    for entry in fs::read_dir(dir_a.path()).unwrap() {
        let path_a = entry.unwrap().path();
        let path_b = dir_b.path().join(path_a.file_name().unwrap());
        assert_eq!(
            fs::read(&path_a).unwrap(),
            fs::read(&path_b).unwrap(),
            "{path_a:?} differs"
        );
    }
}

#[test]
fn slope_scenario_emits_theoretical_column() {
    let dir = tempfile::tempdir().unwrap();
    let overrides = Overrides {
        runs: Some(5),
        horizon: Some(2_000),
        seed: None,
    };
    run_scenario(ScenarioName::Fig2MarkovSlope, dir.path(), &overrides).unwrap();
    let slope_path = dir.path().join("fig2_markov_slope_proposed_slope.csv");
    let text = read(&slope_path);
    assert!(text.starts_with("t,empirical_slope,theoretical_slope\n"));

    let gaps = scenario(ScenarioName::Fig2MarkovSlope).policies[0]
        .config
        .gap_profile()
        .unwrap();
    // the t = 1000 row carries the closed-form slope, about 7.548e-3
    let row = text
        .lines()
        .find(|line| line.starts_with("1000,"))
        .expect("slope row at t = 1000");
    let theory: f64 = row.split(',').nth(2).unwrap().parse().unwrap();
    assert_eq!(
        theory.to_bits(),
        theoretical_slope(1000, &gaps).unwrap().to_bits()
    );
    assert!((theory - 7.548e-3).abs() < 1e-5);
}

#[test]
fn manifest_reproduces_outputs_byte_identically() {
    let dir = tempfile::tempdir().unwrap();
    run_scenario(ScenarioName::Fig3MarkovRegret, dir.path(), &tiny()).unwrap();
    let manifest: Manifest =
        serde_json::from_str(&read(&dir.path().join("fig3_markov_regret_manifest.json"))).unwrap();
    assert_eq!(manifest.artifact, "rmab");
    assert_eq!(manifest.scenario.as_deref(), Some("fig3_markov_regret"));

    // re-run each recorded config standalone and compare the CSV bytes
    let redo = tempfile::tempdir().unwrap();
    for entry in &manifest.outputs {
        let config_path = redo.path().join(format!("{}.json", entry.policy));
        fs::write(&config_path, entry.config.to_json()).unwrap();
        let (_, files) =
            run_config_file(&config_path, redo.path(), &Overrides::default()).unwrap();
        let reproduced = files
            .iter()
            .find(|p| p.extension().is_some_and(|e| e == "csv"))
            .unwrap();
        assert_eq!(
            fs::read(reproduced).unwrap(),
            fs::read(dir.path().join(&entry.regret_csv)).unwrap(),
            "policy {} not reproduced",
            entry.policy
        );
    }
}

#[test]
fn simulate_uses_config_file_stem() {
    let dir = tempfile::tempdir().unwrap();
    let config_path = dir.path().join("trial.json");
    fs::write(
        &config_path,
        r#"{
            "bands": [{ "kind": "bernoulli", "p_idle": 0.6 }],
            "policy": { "kind": "oracle" },
            "horizon": 200, "runs": 3, "seed": 11
        }"#,
    )
    .unwrap();
    let (_, files) = run_config_file(&config_path, dir.path(), &Overrides::default()).unwrap();
    assert!(files.iter().any(|p| p.ends_with("trial_regret.csv")));
    assert!(files.iter().any(|p| p.ends_with("trial_manifest.json")));
}

// --- binary behaviour ------------------------------------------------------

fn rmab_bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_rmab"))
}

#[test]
fn binary_runs_a_scenario_successfully() {
    let dir = tempfile::tempdir().unwrap();
    let status = rmab_bin()
        .args([
            "scenario",
            "fig4_bernoulli_regret",
            "--runs",
            "3",
            "--horizon",
            "300",
            "--out",
        ])
        .arg(dir.path())
        .status()
        .unwrap();
    assert!(status.success());
    assert!(dir.path().join("fig4_bernoulli_regret_proposed.csv").exists());
}

#[test]
fn binary_exit_code_distinguishes_config_from_io_errors() {
    // invalid config content -> 2
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(
        &bad,
        r#"{
            "bands": [{ "kind": "bernoulli", "p_idle": 1.3 }],
            "policy": { "kind": "proposed" },
            "horizon": 100, "runs": 1, "seed": 0
        }"#,
    )
    .unwrap();
    let output = rmab_bin().arg("simulate").arg(&bad).output().unwrap();
    assert_eq!(output.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("p_idle"), "{stderr}");

    // unknown scenario name -> 2
    let status = rmab_bin().args(["scenario", "fig9"]).status().unwrap();
    assert_eq!(status.code(), Some(2));

    // missing config file -> 3
    let status = rmab_bin()
        .args(["simulate", "/nonexistent/config.json"])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(3));
}

#[test]
fn binary_gap_report_accepts_presets() {
    let output = rmab_bin()
        .args(["gaps", "fig3_markov_regret"])
        .output()
        .unwrap();
    assert!(output.status.success());
    let stdout = String::from_utf8(output.stdout).unwrap();
    assert!(stdout.starts_with("band,idle_prob,mean_reward,gap,growth_factor,count_bound\n"));
    assert_eq!(stdout.lines().count(), 6);
    // band 3 is the best band: mean 0.85, zero gap
    let band3: Vec<&str> = stdout.lines().nth(3).unwrap().split(',').collect();
    assert_eq!(band3[0], "3");
    let mu: f64 = band3[2].parse().unwrap();
    let gap: f64 = band3[3].parse().unwrap();
    assert!((mu - 0.85).abs() < 1e-12);
    assert_eq!(gap, 0.0);
}
