//! Built-in experiment presets.
//!
//! Three ready-made scenarios cover the standard benchmark setups for this
//! harness: a 5-band Markov instance used both for slope verification
//! (`fig2_markov_slope`) and for policy comparison (`fig3_markov_regret`),
//! and a 5-band Bernoulli instance (`fig4_bernoulli_regret`). All policies
//! within a scenario share one master seed, so they face identical band
//! trajectories (common random numbers).

use crate::env::BandModel;
use crate::policy::{DseeBudget, PolicyKind};
use crate::sim::{ChoiceLogging, RecordOptions, SimulationConfig};

/// Desk-scale defaults; the slope scenario doubles the run count because
/// slope estimation differentiates the (noisy) mean curve.
pub const DEFAULT_RUNS: u32 = 1_000;
pub const DEFAULT_HORIZON: u64 = 100_000;
pub const SLOPE_RUNS: u32 = 2_000;

const FIG2_SEED: u64 = 7002;
const FIG3_SEED: u64 = 7003;
const FIG4_SEED: u64 = 7004;

/// Names of the built-in presets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScenarioName {
    Fig2MarkovSlope,
    Fig3MarkovRegret,
    Fig4BernoulliRegret,
}

impl ScenarioName {
    pub const ALL: [ScenarioName; 3] = [
        ScenarioName::Fig2MarkovSlope,
        ScenarioName::Fig3MarkovRegret,
        ScenarioName::Fig4BernoulliRegret,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ScenarioName::Fig2MarkovSlope => "fig2_markov_slope",
            ScenarioName::Fig3MarkovRegret => "fig3_markov_regret",
            ScenarioName::Fig4BernoulliRegret => "fig4_bernoulli_regret",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|s| s.as_str() == name)
    }
}

/// One policy entry of a scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct PolicyRun {
    /// Short label used in output file names and report columns.
    pub label: &'static str,
    pub config: SimulationConfig,
}

/// A preset: one simulation per policy, plus whether slope curves belong in
/// the output.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: ScenarioName,
    pub policies: Vec<PolicyRun>,
    /// Emit empirical/theoretical slope series alongside the regret trace.
    pub emit_slope: bool,
}

/// 5-band Markov instance: per-band busy→idle and idle→busy transition
/// probabilities, rates 1.0 idle / 0.1 busy, stationary initialization.
pub fn markov_bands() -> Vec<BandModel> {
    const P10: [f64; 5] = [0.1, 0.1, 0.5, 0.1, 0.1];
    const P01: [f64; 5] = [0.2, 0.3, 0.1, 0.4, 0.5];
    P10.iter()
        .zip(&P01)
        .map(|(&p10, &p01)| BandModel::markov(p10, p01, 1.0, 0.1).expect("valid preset band"))
        .collect()
}

/// 5-band Bernoulli instance: per-band idle probabilities, rates 1.0 idle /
/// 0.1 busy.
pub fn bernoulli_bands() -> Vec<BandModel> {
    const P0: [f64; 5] = [0.3, 0.36, 0.17, 0.25, 0.33];
    P0.iter()
        .map(|&p_idle| BandModel::bernoulli(p_idle, 1.0, 0.1).expect("valid preset band"))
        .collect()
}

fn preset_config(
    bands: Vec<BandModel>,
    policy: PolicyKind,
    runs: u32,
    seed: u64,
) -> SimulationConfig {
    SimulationConfig {
        bands,
        policy,
        horizon: DEFAULT_HORIZON,
        runs,
        master_seed: seed,
        record: RecordOptions {
            points_per_decade: 200,
            // per-step choice logs are pure ballast at these horizons
            choices: ChoiceLogging::Off,
        },
    }
}

/// Build a preset scenario.
pub fn scenario(name: ScenarioName) -> Scenario {
    match name {
        ScenarioName::Fig2MarkovSlope => Scenario {
            name,
            policies: vec![PolicyRun {
                label: "proposed",
                config: preset_config(
                    markov_bands(),
                    PolicyKind::Proposed,
                    SLOPE_RUNS,
                    FIG2_SEED,
                ),
            }],
            emit_slope: true,
        },
        ScenarioName::Fig3MarkovRegret => Scenario {
            name,
            policies: vec![
                PolicyRun {
                    label: "proposed",
                    config: preset_config(
                        markov_bands(),
                        PolicyKind::Proposed,
                        DEFAULT_RUNS,
                        FIG3_SEED,
                    ),
                },
                PolicyRun {
                    label: "ucb1",
                    config: preset_config(markov_bands(), PolicyKind::Ucb1, DEFAULT_RUNS, FIG3_SEED),
                },
                PolicyRun {
                    label: "dsee",
                    config: preset_config(
                        markov_bands(),
                        PolicyKind::Dsee { budget: DseeBudget::Constant(10.0) },
                        DEFAULT_RUNS,
                        FIG3_SEED,
                    ),
                },
            ],
            emit_slope: false,
        },
        ScenarioName::Fig4BernoulliRegret => Scenario {
            name,
            policies: vec![
                PolicyRun {
                    label: "proposed",
                    config: preset_config(
                        bernoulli_bands(),
                        PolicyKind::Proposed,
                        DEFAULT_RUNS,
                        FIG4_SEED,
                    ),
                },
                PolicyRun {
                    label: "ucb1",
                    config: preset_config(
                        bernoulli_bands(),
                        PolicyKind::Ucb1,
                        DEFAULT_RUNS,
                        FIG4_SEED,
                    ),
                },
                PolicyRun {
                    label: "dsee",
                    config: preset_config(
                        bernoulli_bands(),
                        PolicyKind::Dsee { budget: DseeBudget::LogTime },
                        DEFAULT_RUNS,
                        FIG4_SEED,
                    ),
                },
            ],
            emit_slope: false,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::env::{InitMode, Occupancy};

    #[test]
    fn scenario_names_round_trip() {
        for name in ScenarioName::ALL {
            assert_eq!(ScenarioName::parse(name.as_str()), Some(name));
        }
        assert_eq!(ScenarioName::parse("fig5"), None);
    }

    #[test]
    fn markov_preset_matches_expected_parameters() {
        let bands = markov_bands();
        let expected = [(0.1, 0.2), (0.1, 0.3), (0.5, 0.1), (0.1, 0.4), (0.1, 0.5)];
        assert_eq!(bands.len(), 5);
        for (band, &(p10, p01)) in bands.iter().zip(&expected) {
            assert_eq!(band.occupancy, Occupancy::Markov { p10, p01 });
            assert_eq!(band.r_idle, 1.0);
            assert_eq!(band.r_busy, 0.1);
            assert_eq!(band.init, InitMode::Stationary);
        }
    }

    #[test]
    fn bernoulli_preset_matches_expected_parameters() {
        let bands = bernoulli_bands();
        let expected = [0.3, 0.36, 0.17, 0.25, 0.33];
        assert_eq!(bands.len(), 5);
        for (band, &p_idle) in bands.iter().zip(&expected) {
            assert_eq!(band.occupancy, Occupancy::Bernoulli { p_idle });
            assert_eq!(band.r_idle, 1.0);
            assert_eq!(band.r_busy, 0.1);
        }
    }

    #[test]
    fn scenario_policy_lineups() {
        let fig2 = scenario(ScenarioName::Fig2MarkovSlope);
        assert!(fig2.emit_slope);
        assert_eq!(fig2.policies.len(), 1);
        assert_eq!(fig2.policies[0].config.policy, PolicyKind::Proposed);
        assert_eq!(fig2.policies[0].config.runs, SLOPE_RUNS);

        let fig3 = scenario(ScenarioName::Fig3MarkovRegret);
        assert_eq!(
            fig3.policies.iter().map(|p| p.label).collect::<Vec<_>>(),
            vec!["proposed", "ucb1", "dsee"]
        );
        assert_eq!(
            fig3.policies[2].config.policy,
            PolicyKind::Dsee { budget: DseeBudget::Constant(10.0) }
        );

        let fig4 = scenario(ScenarioName::Fig4BernoulliRegret);
        assert_eq!(
            fig4.policies[2].config.policy,
            PolicyKind::Dsee { budget: DseeBudget::LogTime }
        );
        // policies within a scenario share bands, seeds, and horizons
        for s in [&fig3, &fig4] {
            let first = &s.policies[0].config;
            for p in &s.policies {
                assert_eq!(p.config.bands, first.bands);
                assert_eq!(p.config.master_seed, first.master_seed);
                assert_eq!(p.config.horizon, first.horizon);
                assert_eq!(p.config.runs, DEFAULT_RUNS);
            }
        }
    }

    #[test]
    fn preset_configs_validate_and_round_trip() {
        use crate::config::{parse_config, ConfigDoc};
        for name in ScenarioName::ALL {
            for run in scenario(name).policies {
                run.config.validate().unwrap();
                let doc = ConfigDoc::from_config(&run.config);
                let reparsed = parse_config(&doc.to_json()).unwrap();
                assert_eq!(run.config, reparsed, "{name:?}/{}", run.label);
            }
        }
    }
}
