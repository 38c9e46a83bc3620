//! Batch orchestration and artifact files for the `rmab` binary.
//!
//! CSV is the normative output format. All floats are serialized with
//! Rust's shortest round-trip formatting, so re-parsing a CSV reproduces
//! the in-memory values bit-exactly; lines end with LF. Each invocation
//! also writes a manifest recording the exact configs, which suffices to
//! reproduce every output byte-identically.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use rmab::config::ConfigDoc;
use rmab::regret::{theoretical_slope, GapProfile, RegretTrace, DEFAULT_SLOPE_SPAN};
use rmab::scenario::{scenario, Scenario, ScenarioName};
use rmab::sim::{monte_carlo, SimulationConfig};

/// Errors with an exit-code category: configuration problems exit 2,
/// I/O problems exit 3.
#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] rmab::ConfigError),
    #[error("unknown scenario \"{0}\"; expected fig2_markov_slope, fig3_markov_regret, or fig4_bernoulli_regret")]
    UnknownScenario(String),
    #[error(transparent)]
    Sim(#[from] rmab::SimError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::UnknownScenario(_) | CliError::Sim(_) => 2,
            CliError::Io { .. } => 3,
        }
    }

    fn io(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
        move |source| CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }
}

/// Command-line overrides applied on top of a config or preset.
#[derive(Debug, Clone, Copy, Default)]
pub struct Overrides {
    pub runs: Option<u32>,
    pub horizon: Option<u64>,
    pub seed: Option<u64>,
}

impl Overrides {
    pub fn apply(&self, config: &mut SimulationConfig) {
        if let Some(runs) = self.runs {
            config.runs = runs;
        }
        if let Some(horizon) = self.horizon {
            config.horizon = horizon;
        }
        if let Some(seed) = self.seed {
            config.master_seed = seed;
        }
    }
}

/// One artifact group of a manifest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub policy: String,
    pub regret_csv: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slope_csv: Option<String>,
    pub config: ConfigDoc,
}

/// Record of an invocation: artifact version plus the exact configs that
/// produced each file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub artifact: String,
    pub version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scenario: Option<String>,
    pub outputs: Vec<ManifestEntry>,
}

impl Manifest {
    fn new(scenario: Option<&str>) -> Self {
        Self {
            artifact: "rmab".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            scenario: scenario.map(Into::into),
            outputs: Vec::new(),
        }
    }
}

/// Render the regret trace as CSV.
pub fn regret_csv(trace: &RegretTrace) -> String {
    let mut out = String::from("t,mean_regret,std_regret,normalized_regret\n");
    for i in 0..trace.len() {
        out.push_str(&format!(
            "{},{},{},{}\n",
            trace.times[i], trace.mean_regret[i], trace.std_regret[i], trace.normalized[i]
        ));
    }
    out
}

/// Render empirical and theoretical slope series as CSV.
pub fn slope_csv(trace: &RegretTrace, gaps: &GapProfile) -> Result<String, CliError> {
    let slopes = trace.empirical_slope(DEFAULT_SLOPE_SPAN).map_err(rmab::SimError::from)?;
    let mut out = String::from("t,empirical_slope,theoretical_slope\n");
    for (i, &t) in trace.times.iter().enumerate() {
        let theory = theoretical_slope(t, gaps).map_err(rmab::SimError::from)?;
        out.push_str(&format!("{t},{},{theory}\n", slopes[i]));
    }
    Ok(out)
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    let mut file = fs::File::create(path).map_err(CliError::io(path))?;
    file.write_all(contents.as_bytes()).map_err(CliError::io(path))?;
    Ok(())
}

fn run_one(
    stem: &str,
    label: &str,
    config: &SimulationConfig,
    out_dir: &Path,
    with_slope: bool,
) -> Result<(ManifestEntry, Vec<PathBuf>), CliError> {
    let result = monte_carlo(config)?;
    let mut written = Vec::new();

    let regret_name = format!("{stem}_{label}.csv");
    let regret_path = out_dir.join(&regret_name);
    write_file(&regret_path, &regret_csv(&result.trace))?;
    written.push(regret_path);

    let slope_name = if with_slope {
        let gaps = config.gap_profile()?;
        let name = format!("{stem}_{label}_slope.csv");
        let path = out_dir.join(&name);
        write_file(&path, &slope_csv(&result.trace, &gaps)?)?;
        written.push(path);
        Some(name)
    } else {
        None
    };

    Ok((
        ManifestEntry {
            policy: label.to_string(),
            regret_csv: regret_name,
            slope_csv: slope_name,
            config: ConfigDoc::from_config(config),
        },
        written,
    ))
}

fn finish(
    mut manifest: Manifest,
    entries: Vec<(ManifestEntry, Vec<PathBuf>)>,
    stem: &str,
    out_dir: &Path,
) -> Result<(Manifest, Vec<PathBuf>), CliError> {
    let mut written = Vec::new();
    for (entry, files) in entries {
        manifest.outputs.push(entry);
        written.extend(files);
    }
    let manifest_path = out_dir.join(format!("{stem}_manifest.json"));
    let text = serde_json::to_string_pretty(&manifest).expect("manifests always serialize");
    write_file(&manifest_path, &(text + "\n"))?;
    written.push(manifest_path);
    Ok((manifest, written))
}

fn ensure_out_dir(out_dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(out_dir).map_err(CliError::io(out_dir))
}

/// Run every policy of a preset and write its artifact files.
pub fn run_scenario(
    name: ScenarioName,
    out_dir: &Path,
    overrides: &Overrides,
) -> Result<(Manifest, Vec<PathBuf>), CliError> {
    ensure_out_dir(out_dir)?;
    let Scenario {
        policies,
        emit_slope,
        ..
    } = scenario(name);
    let stem = name.as_str();
    let mut entries = Vec::new();
    for run in &policies {
        let mut config = run.config.clone();
        overrides.apply(&mut config);
        entries.push(run_one(stem, run.label, &config, out_dir, emit_slope)?);
    }
    finish(Manifest::new(Some(stem)), entries, stem, out_dir)
}

/// Run a single parsed config document and write its artifact files.
pub fn run_config(
    stem: &str,
    doc: &ConfigDoc,
    out_dir: &Path,
    overrides: &Overrides,
) -> Result<(Manifest, Vec<PathBuf>), CliError> {
    ensure_out_dir(out_dir)?;
    let mut config = doc.build()?;
    overrides.apply(&mut config);
    let entries = vec![run_one(stem, "regret", &config, out_dir, false)?];
    finish(Manifest::new(None), entries, stem, out_dir)
}

/// Run a config file (JSON) and write its artifact files next to `out_dir`.
pub fn run_config_file(
    path: &Path,
    out_dir: &Path,
    overrides: &Overrides,
) -> Result<(Manifest, Vec<PathBuf>), CliError> {
    let text = fs::read_to_string(path).map_err(CliError::io(path))?;
    let doc: ConfigDoc = serde_json::from_str(&text).map_err(rmab::ConfigError::from)?;
    let stem = path
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("simulation")
        .to_string();
    run_config(&stem, &doc, out_dir, overrides)
}

/// Per-band diagnostics as CSV: stationary idle probability, mean reward,
/// optimality gap, interval growth constant, and the sensing-count bound at
/// the configured horizon (empty for bands tying the best mean).
pub fn gap_report(config: &SimulationConfig) -> Result<String, CliError> {
    let gaps = config.gap_profile()?;
    let mut out = String::from("band,idle_prob,mean_reward,gap,growth_factor,count_bound\n");
    for (i, band) in config.bands.iter().enumerate() {
        let idle = band.idle_probability().map_err(rmab::SimError::from)?;
        let mu = gaps.means()[i];
        let gap = gaps.gaps()[i];
        let growth = rmab::interval_growth_factor(gap);
        let bound = if gap > 0.0 {
            let b = rmab::sensing_count_bound(config.horizon as f64, (i + 1) as f64, growth)
                .map_err(rmab::SimError::from)?;
            format!("{b}")
        } else {
            String::new()
        };
        out.push_str(&format!("{},{idle},{mu},{gap},{growth},{bound}\n", i + 1));
    }
    Ok(out)
}

/// Resolve the `gaps` argument: a preset name or a config file path.
pub fn gap_report_for(target: &str) -> Result<String, CliError> {
    if let Some(name) = ScenarioName::parse(target) {
        let config = &scenario(name).policies[0].config;
        return gap_report(config);
    }
    let path = Path::new(target);
    let text = fs::read_to_string(path).map_err(CliError::io(path))?;
    let config = rmab::parse_config(&text)?;
    gap_report(&config)
}
