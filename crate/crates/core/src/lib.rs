//! Restless multi-armed bandit policies and a deterministic Monte Carlo
//! regret harness.
//!
//! The crate simulates the spectrum-sensing setting where each of N
//! frequency bands is idle or occupied and keeps evolving whether sensed or
//! not; a single decision-maker senses one band per time instant and wants
//! to match the best single band in hindsight (weak regret).
//!
//! - [`env`]: band reward processes (i.i.d. Bernoulli and 2-state Markov).
//! - [`policy`]: the confidence-term index policy plus UCB1, a
//!   deterministic explore/exploit schedule (DSEE) and a fixed-arm oracle.
//! - [`regret`]: weak regret, normalized regret, slope estimation, and the
//!   analytic growth quantities.
//! - [`sim`]: episode runner and parallel, bit-reproducible batches.
//! - [`config`] / [`scenario`]: JSON experiment documents and built-in
//!   presets.

pub mod config;
pub mod env;
pub mod policy;
pub mod regret;
pub mod rng;
pub mod scenario;
pub mod sim;

pub use config::{parse_config, ConfigDoc, ConfigError};
pub use env::{stationary_idle_prob, BandModel, BandState, EnvError, InitMode, Occupancy};
pub use policy::{confidence_term, DseeBudget, Policy, PolicyError, PolicyKind, PolicyState};
pub use regret::{
    empirical_slope, interval_growth_factor, normalized_regret, sensing_count_bound,
    theoretical_slope, weak_regret, GapProfile, RegretError, RegretTrace,
};
pub use scenario::{scenario, Scenario, ScenarioName};
pub use sim::{
    interval_growth_stats, monte_carlo, monte_carlo_with_logs, run_episode, ChoiceLogging,
    EpisodeLog, MonteCarloResult, RecordOptions, SimError, SimulationConfig,
};
