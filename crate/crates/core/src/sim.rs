//! Episode runner and Monte Carlo batch aggregation.
//!
//! One episode advances all bands at every time instant (the bands are
//! restless), asks the policy for an arm, and reveals only that band's
//! reward. Batches fan episodes out with rayon and reduce in run-index
//! order, so for a fixed master seed the output is bit-identical no matter
//! how many threads execute it.

use rayon::prelude::*;
use thiserror::Error;

use crate::env::{BandModel, BandState, EnvError};
use crate::policy::{Policy, PolicyError, PolicyKind};
use crate::regret::{weak_regret, GapProfile, RegretError, RegretTrace};
use crate::rng::{child_rng, ENV_STREAM};

/// Errors from episode execution and aggregation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error(transparent)]
    Env(#[from] EnvError),
    #[error(transparent)]
    Policy(#[from] PolicyError),
    #[error(transparent)]
    Regret(#[from] RegretError),
    #[error("config needs at least one band")]
    NoBands,
    #[error("horizon {horizon} is shorter than the number of bands {n_arms}")]
    HorizonTooShort { horizon: u64, n_arms: usize },
    #[error("config needs at least one run")]
    NoRuns,
    #[error("run index {run} out of range for {runs} runs")]
    RunOutOfRange { run: u32, runs: u32 },
    #[error("oracle band {band} out of range for {n_arms} bands")]
    OracleArmOutOfRange { band: usize, n_arms: usize },
    #[error("no sensing times tracked for arm {0}: it ties the best mean")]
    ArmNotTracked(usize),
    #[error("no episode logs supplied")]
    NoLogs,
}

/// Whether per-step arm choices are kept in the episode log.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ChoiceLogging {
    /// Keep choices up to a horizon of 100 000 steps, drop them beyond.
    #[default]
    Auto,
    On,
    Off,
}

impl ChoiceLogging {
    fn enabled(self, horizon: u64) -> bool {
        match self {
            ChoiceLogging::Auto => horizon <= 100_000,
            ChoiceLogging::On => true,
            ChoiceLogging::Off => false,
        }
    }
}

/// Trace sampling controls.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RecordOptions {
    /// Density of the log-spaced recording grid.
    pub points_per_decade: u32,
    pub choices: ChoiceLogging,
}

impl Default for RecordOptions {
    fn default() -> Self {
        Self {
            points_per_decade: 200,
            choices: ChoiceLogging::Auto,
        }
    }
}

/// Full description of a Monte Carlo experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationConfig {
    pub bands: Vec<BandModel>,
    pub policy: PolicyKind,
    /// Total decisions per episode.
    pub horizon: u64,
    /// Independent episodes.
    pub runs: u32,
    pub master_seed: u64,
    pub record: RecordOptions,
}

impl SimulationConfig {
    pub fn n_arms(&self) -> usize {
        self.bands.len()
    }

    pub fn validate(&self) -> Result<(), SimError> {
        if self.bands.is_empty() {
            return Err(SimError::NoBands);
        }
        if self.horizon < self.bands.len() as u64 {
            return Err(SimError::HorizonTooShort {
                horizon: self.horizon,
                n_arms: self.bands.len(),
            });
        }
        if self.runs == 0 {
            return Err(SimError::NoRuns);
        }
        if let PolicyKind::Oracle { arm: Some(band) } = self.policy {
            if band >= self.bands.len() {
                return Err(SimError::OracleArmOutOfRange {
                    band,
                    n_arms: self.bands.len(),
                });
            }
        }
        Ok(())
    }

    /// True means and gaps of the configured bands.
    pub fn gap_profile(&self) -> Result<GapProfile, SimError> {
        let means: Vec<f64> = self
            .bands
            .iter()
            .map(BandModel::expected_reward)
            .collect::<Result<_, _>>()?;
        Ok(GapProfile::from_means(&means))
    }

    /// Policy kind with an unresolved oracle pinned to the best-mean arm.
    fn resolved_policy(&self, gaps: &GapProfile) -> PolicyKind {
        match self.policy {
            PolicyKind::Oracle { arm: None } => PolicyKind::Oracle {
                arm: Some(gaps.best_arm()),
            },
            other => other,
        }
    }
}

/// Record of one episode.
#[derive(Debug, Clone, PartialEq)]
pub struct EpisodeLog {
    /// Recorded time instants (strictly increasing, ends at the horizon).
    pub grid: Vec<u64>,
    /// Per-arm sensing counts at each grid time; rows sum to the time.
    pub counts_at_grid: Vec<Vec<u64>>,
    /// For each arm with a positive gap, every time instant it was sensed;
    /// `None` for arms tying the best mean.
    pub sensing_times: Vec<Option<Vec<u64>>>,
    /// Per-step arm choices, when enabled by [`ChoiceLogging`].
    pub choices: Option<Vec<u32>>,
    /// FNV-1a digest of every band reward emitted during the episode.
    /// Identical digests across policies certify that the environment
    /// evolved identically (restlessness is observation-independent).
    pub env_digest: u64,
}

/// Recording grid: `{1..=N}`, a log-spaced set with `points_per_decade`
/// entries per decade, and the horizon itself.
pub fn record_times(horizon: u64, n_arms: usize, points_per_decade: u32) -> Vec<u64> {
    let ppd = points_per_decade.max(1) as f64;
    let mut times: Vec<u64> = (1..=(n_arms as u64).min(horizon)).collect();
    times.push(horizon);
    let mut k = 0u64;
    loop {
        let t = 10f64.powf(k as f64 / ppd).round();
        if t > horizon as f64 {
            break;
        }
        times.push(t as u64);
        k += 1;
    }
    times.sort_unstable();
    times.dedup();
    times
}

const FNV_OFFSET: u64 = 0xCBF2_9CE4_8422_2325;
const FNV_PRIME: u64 = 0x1_0000_0000_01B3;

fn fnv1a_u64(mut hash: u64, value: u64) -> u64 {
    for byte in value.to_le_bytes() {
        hash ^= byte as u64;
        hash = hash.wrapping_mul(FNV_PRIME);
    }
    hash
}

/// Run one episode of a batch.
///
/// The environment stream is derived from `(master_seed, run_index)`; see
/// [`crate::rng`] for the splitting rule. Every band consumes exactly one
/// draw per time instant, so a longer run is a bit-exact extension of a
/// shorter one.
pub fn run_episode(config: &SimulationConfig, run_index: u32) -> Result<EpisodeLog, SimError> {
    config.validate()?;
    if run_index >= config.runs {
        return Err(SimError::RunOutOfRange {
            run: run_index,
            runs: config.runs,
        });
    }
    let gaps = config.gap_profile()?;
    run_episode_inner(config, run_index, &gaps)
}

fn run_episode_inner(
    config: &SimulationConfig,
    run_index: u32,
    gaps: &GapProfile,
) -> Result<EpisodeLog, SimError> {
    let n = config.bands.len();
    let mut policy = Policy::new(config.resolved_policy(gaps), n)?;
    let mut env_rng = child_rng(config.master_seed, run_index as u64, ENV_STREAM);

    let mut states: Vec<BandState> = config
        .bands
        .iter()
        .map(|band| band.sample_initial_state(&mut env_rng))
        .collect::<Result<_, _>>()?;

    let grid = record_times(config.horizon, n, config.record.points_per_decade);
    let mut counts_at_grid = Vec::with_capacity(grid.len());
    let mut sensing_times: Vec<Option<Vec<u64>>> = gaps
        .gaps()
        .iter()
        .map(|&g| if g > 0.0 { Some(Vec::new()) } else { None })
        .collect();
    let mut choices = config
        .record
        .choices
        .enabled(config.horizon)
        .then(|| Vec::with_capacity(config.horizon as usize));

    let mut rewards = vec![0.0f64; n];
    let mut digest = FNV_OFFSET;
    let mut next_grid = 0usize;

    for t in 1..=config.horizon {
        for (i, band) in config.bands.iter().enumerate() {
            let (next, reward) = band.step(states[i], &mut env_rng);
            states[i] = next;
            rewards[i] = reward;
            digest = fnv1a_u64(digest, reward.to_bits());
        }
        let arm = policy.select_arm();
        policy.update(arm, rewards[arm])?;

        if let Some(times) = sensing_times[arm].as_mut() {
            times.push(t);
        }
        if let Some(choices) = choices.as_mut() {
            choices.push(arm as u32);
        }
        if next_grid < grid.len() && grid[next_grid] == t {
            counts_at_grid.push(policy.state().counts().to_vec());
            next_grid += 1;
        }
    }

    Ok(EpisodeLog {
        grid,
        counts_at_grid,
        sensing_times,
        choices,
        env_digest: digest,
    })
}

/// Aggregated batch output.
#[derive(Debug, Clone, PartialEq)]
pub struct MonteCarloResult {
    pub trace: RegretTrace,
    /// Per-run logs, kept only by [`monte_carlo_with_logs`].
    pub logs: Option<Vec<EpisodeLog>>,
}

/// Run the configured batch and aggregate weak regret across runs.
pub fn monte_carlo(config: &SimulationConfig) -> Result<MonteCarloResult, SimError> {
    monte_carlo_impl(config, false)
}

/// Like [`monte_carlo`], additionally retaining every episode log.
pub fn monte_carlo_with_logs(config: &SimulationConfig) -> Result<MonteCarloResult, SimError> {
    monte_carlo_impl(config, true)
}

fn monte_carlo_impl(config: &SimulationConfig, keep_logs: bool) -> Result<MonteCarloResult, SimError> {
    config.validate()?;
    let gaps = config.gap_profile()?;

    // Episodes run concurrently; collection preserves run order, so the
    // reduction below is a fixed-order sum independent of scheduling.
    let per_run: Vec<(Vec<f64>, Option<EpisodeLog>)> = (0..config.runs)
        .into_par_iter()
        .map(|run| {
            let log = run_episode_inner(config, run, &gaps)?;
            let regrets: Vec<f64> = log
                .grid
                .iter()
                .zip(&log.counts_at_grid)
                .map(|(&t, counts)| weak_regret(counts, &gaps, t))
                .collect::<Result<_, _>>()?;
            Ok((regrets, keep_logs.then_some(log)))
        })
        .collect::<Result<_, SimError>>()?;

    let grid = record_times(config.horizon, config.n_arms(), config.record.points_per_decade);
    let runs = config.runs as f64;
    let mut mean = Vec::with_capacity(grid.len());
    let mut std = Vec::with_capacity(grid.len());
    for i in 0..grid.len() {
        let m = per_run.iter().map(|(r, _)| r[i]).sum::<f64>() / runs;
        let var = per_run.iter().map(|(r, _)| (r[i] - m) * (r[i] - m)).sum::<f64>() / runs;
        mean.push(m);
        std.push(var.sqrt());
    }

    let logs = keep_logs.then(|| per_run.into_iter().filter_map(|(_, log)| log).collect());
    Ok(MonteCarloResult {
        trace: RegretTrace::new(grid, mean, std),
        logs,
    })
}

/// Across-run mean of the sensing-interval ratio `z_{k+1} / z_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct GrowthRatioStat {
    /// Ratio index: the step from the k-th to the (k+1)-th sensing.
    pub k: usize,
    pub mean_ratio: f64,
    /// Runs in which the (k+1)-th sensing happened.
    pub included_runs: usize,
    /// Runs lacking a (k+1)-th sensing, excluded from the mean.
    pub excluded_runs: usize,
}

/// Sensing-interval growth statistics for one suboptimal arm, from the
/// logs of a batch. Errors when the arm ties the best mean (its sensing
/// times are not tracked).
pub fn interval_growth_stats(
    logs: &[EpisodeLog],
    arm: usize,
) -> Result<Vec<GrowthRatioStat>, SimError> {
    if logs.is_empty() {
        return Err(SimError::NoLogs);
    }
    if logs[0].sensing_times[arm].is_none() {
        return Err(SimError::ArmNotTracked(arm));
    }
    let total = logs.len();
    let mut stats = Vec::new();
    for k in 1.. {
        let mut sum = 0.0;
        let mut included = 0usize;
        for log in logs {
            let times = log.sensing_times[arm].as_ref().expect("tracked arm");
            if times.len() > k {
                sum += times[k] as f64 / times[k - 1] as f64;
                included += 1;
            }
        }
        if included == 0 {
            break;
        }
        stats.push(GrowthRatioStat {
            k,
            mean_ratio: sum / included as f64,
            included_runs: included,
            excluded_runs: total - included,
        });
    }
    Ok(stats)
}
