//! Band reward processes: i.i.d. Bernoulli and 2-state Markov occupancy.
//!
//! A band is either idle (state 0) or occupied (state 1) and pays a
//! state-dependent rate in `[0, 1]`. Every band advances at every time
//! instant whether or not it is sensed; only the sensed band's reward is
//! revealed to the policy. The reward of a step reflects the state *after*
//! the transition, so state and reward carry the same time index.

use rand::Rng;
use thiserror::Error;

/// Errors from band model construction and stationary statistics.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum EnvError {
    #[error("{name} = {value} must lie in [0, 1]")]
    InvalidProbability { name: &'static str, value: f64 },
    #[error("{name} = {value} must lie in [0, 1]")]
    InvalidReward { name: &'static str, value: f64 },
    /// p10 = p01 = 0 leaves both states absorbing, so there is no unique
    /// stationary distribution to draw from or average over.
    #[error("degenerate chain: p10 + p01 must be > 0 for a unique stationary distribution")]
    DegenerateChain,
}

/// Occupancy law of a single band.
///
/// A degenerate Markov chain (`p10 = p01 = 0`) is a valid *process* (both
/// states absorbing) and can be stepped; only stationary statistics and
/// stationary initialization reject it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Occupancy {
    /// State redrawn independently each step; idle with probability `p_idle`.
    Bernoulli { p_idle: f64 },
    /// 2-state chain: `p10` is the busy→idle transition probability per
    /// step, `p01` the idle→busy probability.
    Markov { p10: f64, p01: f64 },
}

/// How the state at time 0 is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InitMode {
    /// Draw from the stationary distribution of the occupancy law.
    #[default]
    Stationary,
    FixedIdle,
    FixedBusy,
}

/// Reward process of one frequency band.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandModel {
    pub occupancy: Occupancy,
    /// Rate obtained while the band is idle.
    pub r_idle: f64,
    /// Rate obtained while the band is occupied.
    pub r_busy: f64,
    pub init: InitMode,
}

/// Occupancy state of one band at one time instant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BandState {
    /// `true` means occupied (state 1), `false` idle (state 0).
    pub occupied: bool,
}

fn check_probability(name: &'static str, value: f64) -> Result<(), EnvError> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(EnvError::InvalidProbability { name, value })
    }
}

fn check_reward(name: &'static str, value: f64) -> Result<(), EnvError> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(EnvError::InvalidReward { name, value })
    }
}

/// Stationary probability of the idle state for the 2-state chain,
/// `pi0 = p10 / (p10 + p01)`.
///
/// Errors with [`EnvError::DegenerateChain`] when `p10 = p01 = 0`.
pub fn stationary_idle_prob(p10: f64, p01: f64) -> Result<f64, EnvError> {
    check_probability("p10", p10)?;
    check_probability("p01", p01)?;
    if p10 + p01 <= 0.0 {
        return Err(EnvError::DegenerateChain);
    }
    Ok(p10 / (p10 + p01))
}

impl BandModel {
    /// Band with i.i.d. Bernoulli occupancy and stationary initialization.
    pub fn bernoulli(p_idle: f64, r_idle: f64, r_busy: f64) -> Result<Self, EnvError> {
        check_probability("p_idle", p_idle)?;
        check_reward("r_idle", r_idle)?;
        check_reward("r_busy", r_busy)?;
        Ok(Self {
            occupancy: Occupancy::Bernoulli { p_idle },
            r_idle,
            r_busy,
            init: InitMode::Stationary,
        })
    }

    /// Band with 2-state Markov occupancy and stationary initialization.
    pub fn markov(p10: f64, p01: f64, r_idle: f64, r_busy: f64) -> Result<Self, EnvError> {
        check_probability("p10", p10)?;
        check_probability("p01", p01)?;
        check_reward("r_idle", r_idle)?;
        check_reward("r_busy", r_busy)?;
        Ok(Self {
            occupancy: Occupancy::Markov { p10, p01 },
            r_idle,
            r_busy,
            init: InitMode::Stationary,
        })
    }

    /// Same band with a different initial-state rule.
    pub fn with_init(mut self, init: InitMode) -> Self {
        self.init = init;
        self
    }

    /// Long-run probability of the idle state.
    pub fn idle_probability(&self) -> Result<f64, EnvError> {
        match self.occupancy {
            Occupancy::Bernoulli { p_idle } => Ok(p_idle),
            Occupancy::Markov { p10, p01 } => stationary_idle_prob(p10, p01),
        }
    }

    /// Mean stationary reward `mu = pi0 * r_idle + (1 - pi0) * r_busy`.
    pub fn expected_reward(&self) -> Result<f64, EnvError> {
        let pi0 = self.idle_probability()?;
        Ok(pi0 * self.r_idle + (1.0 - pi0) * self.r_busy)
    }

    /// Draw the state at time 0 according to the band's [`InitMode`].
    ///
    /// Consumes exactly one draw from `rng` in `Stationary` mode and none in
    /// the fixed modes.
    pub fn sample_initial_state<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<BandState, EnvError> {
        match self.init {
            InitMode::FixedIdle => Ok(BandState { occupied: false }),
            InitMode::FixedBusy => Ok(BandState { occupied: true }),
            InitMode::Stationary => {
                let pi0 = self.idle_probability()?;
                let idle = rng.random::<f64>() < pi0;
                Ok(BandState { occupied: !idle })
            }
        }
    }

    /// Advance the band one time instant and return the new state together
    /// with the reward for that instant.
    ///
    /// Consumes exactly one draw from `rng` regardless of occupancy kind, so
    /// stream positions stay aligned across horizons.
    pub fn step<R: Rng + ?Sized>(&self, state: BandState, rng: &mut R) -> (BandState, f64) {
        let u = rng.random::<f64>();
        let occupied = match self.occupancy {
            Occupancy::Bernoulli { p_idle } => u >= p_idle,
            Occupancy::Markov { p10, p01 } => {
                if state.occupied {
                    u >= p10
                } else {
                    u < p01
                }
            }
        };
        let reward = if occupied { self.r_busy } else { self.r_idle };
        (BandState { occupied }, reward)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const REL: f64 = 1e-12;

    fn assert_rel(actual: f64, expected: f64) {
        let err = if expected == 0.0 {
            actual.abs()
        } else {
            ((actual - expected) / expected).abs()
        };
        assert!(err <= REL, "got {actual}, want {expected} (rel err {err:e})");
    }

    #[test]
    fn stationary_idle_prob_matches_balance_equation() {
        // pi0 * p01 = (1 - pi0) * p10, solved by hand.
        assert_rel(stationary_idle_prob(0.1, 0.2).unwrap(), 1.0 / 3.0);
        assert_rel(stationary_idle_prob(0.5, 0.5).unwrap(), 0.5);
        assert_rel(stationary_idle_prob(0.5, 0.1).unwrap(), 5.0 / 6.0);
    }

    #[test]
    fn stationary_idle_prob_rejects_degenerate_chain() {
        assert_eq!(stationary_idle_prob(0.0, 0.0), Err(EnvError::DegenerateChain));
    }

    #[test]
    fn stationary_idle_prob_rejects_bad_probabilities() {
        assert!(matches!(
            stationary_idle_prob(1.5, 0.2),
            Err(EnvError::InvalidProbability { name: "p10", .. })
        ));
        assert!(matches!(
            stationary_idle_prob(0.5, -0.1),
            Err(EnvError::InvalidProbability { name: "p01", .. })
        ));
    }

    #[test]
    fn expected_reward_examples() {
        let b = BandModel::bernoulli(0.3, 1.0, 0.1).unwrap();
        assert_rel(b.expected_reward().unwrap(), 0.37); // 0.3*1 + 0.7*0.1

        let m = BandModel::markov(0.5, 0.1, 1.0, 0.1).unwrap();
        assert_rel(m.expected_reward().unwrap(), 0.85); // 5/6 + (1/6)*0.1

        // Constant reward is insensitive to the occupancy law.
        let c1 = BandModel::bernoulli(0.123, 0.5, 0.5).unwrap();
        let c2 = BandModel::markov(0.7, 0.2, 0.5, 0.5).unwrap();
        assert_rel(c1.expected_reward().unwrap(), 0.5);
        assert_rel(c2.expected_reward().unwrap(), 0.5);
    }

    #[test]
    fn expected_reward_propagates_degenerate_chain() {
        let m = BandModel::markov(0.0, 0.0, 1.0, 0.0).unwrap();
        assert_eq!(m.expected_reward(), Err(EnvError::DegenerateChain));
    }

    #[test]
    fn construction_rejects_out_of_range_fields() {
        assert!(BandModel::bernoulli(1.3, 1.0, 0.0).is_err());
        assert!(BandModel::bernoulli(0.5, 1.2, 0.0).is_err());
        assert!(BandModel::markov(0.5, 0.1, 1.0, -0.2).is_err());
        assert!(BandModel::bernoulli(f64::NAN, 1.0, 0.0).is_err());
    }

    #[test]
    fn fixed_init_modes_are_deterministic() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let idle = BandModel::markov(0.1, 0.2, 1.0, 0.0)
            .unwrap()
            .with_init(InitMode::FixedIdle);
        let busy = idle.with_init(InitMode::FixedBusy);
        for _ in 0..10 {
            assert!(!idle.sample_initial_state(&mut rng).unwrap().occupied);
            assert!(busy.sample_initial_state(&mut rng).unwrap().occupied);
        }
    }

    #[test]
    fn certain_idle_band_always_starts_idle() {
        let b = BandModel::bernoulli(1.0, 1.0, 0.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..1000 {
            assert!(!b.sample_initial_state(&mut rng).unwrap().occupied);
        }
    }

    #[test]
    fn stationary_init_frequency_matches_symmetric_chain() {
        let b = BandModel::markov(0.5, 0.5, 1.0, 0.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let n = 10_000;
        let idle = (0..n)
            .filter(|_| !b.sample_initial_state(&mut rng).unwrap().occupied)
            .count() as f64;
        let freq = idle / n as f64;
        // 3 standard errors of a Bernoulli(0.5) estimate.
        assert!((freq - 0.5).abs() < 3.0 * 0.5 / (n as f64).sqrt(), "freq {freq}");
    }

    #[test]
    fn stationary_init_errors_on_degenerate_chain() {
        let b = BandModel::markov(0.0, 0.0, 1.0, 0.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(b.sample_initial_state(&mut rng), Err(EnvError::DegenerateChain));
    }

    #[test]
    fn absorbing_chain_stays_put() {
        let b = BandModel::markov(0.0, 0.0, 0.8, 0.1)
            .unwrap()
            .with_init(InitMode::FixedIdle);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut state = b.sample_initial_state(&mut rng).unwrap();
        for _ in 0..200 {
            let (next, reward) = b.step(state, &mut rng);
            assert!(!next.occupied);
            assert_eq!(reward, 0.8);
            state = next;
        }
    }

    #[test]
    fn deterministic_alternation_when_transitions_certain() {
        let b = BandModel::markov(1.0, 1.0, 1.0, 0.0)
            .unwrap()
            .with_init(InitMode::FixedIdle);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut state = b.sample_initial_state(&mut rng).unwrap();
        for t in 1..=100u32 {
            let (next, reward) = b.step(state, &mut rng);
            // idle at t=0, so odd steps are busy, even steps idle
            assert_eq!(next.occupied, t % 2 == 1);
            assert_eq!(reward, if next.occupied { 0.0 } else { 1.0 });
            state = next;
        }
    }

    #[test]
    fn certain_idle_bernoulli_always_pays_r_idle() {
        let b = BandModel::bernoulli(1.0, 0.7, 0.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut state = b.sample_initial_state(&mut rng).unwrap();
        for _ in 0..200 {
            let (next, reward) = b.step(state, &mut rng);
            assert_eq!(reward, 0.7);
            state = next;
        }
    }

    #[test]
    fn rewards_always_within_unit_interval() {
        let bands = [
            BandModel::bernoulli(0.37, 1.0, 0.1).unwrap(),
            BandModel::markov(0.1, 0.5, 0.9, 0.05).unwrap(),
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for b in bands {
            let mut state = b.sample_initial_state(&mut rng).unwrap();
            for _ in 0..50_000 {
                let (next, reward) = b.step(state, &mut rng);
                assert!((0.0..=1.0).contains(&reward));
                state = next;
            }
        }
    }

    #[test]
    fn long_markov_trajectory_converges_to_stationary_statistics() {
        let b = BandModel::markov(0.1, 0.2, 1.0, 0.1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let steps = 1_000_000u64;
        let mut state = b.sample_initial_state(&mut rng).unwrap();
        let mut idle = 0u64;
        let mut reward_sum = 0.0;
        for _ in 0..steps {
            let (next, reward) = b.step(state, &mut rng);
            if !next.occupied {
                idle += 1;
            }
            reward_sum += reward;
            state = next;
        }
        let pi0 = b.idle_probability().unwrap();
        let mu = b.expected_reward().unwrap();
        let n = steps as f64;
        let se_idle = (pi0 * (1.0 - pi0) / n).sqrt();
        let idle_freq = idle as f64 / n;
        assert!(
            (idle_freq - pi0).abs() < 3.0 * se_idle,
            "idle freq {idle_freq} vs pi0 {pi0}"
        );
        // Same Bernoulli-style band on the reward scale: reward is a linear
        // map of the state indicator, so its standard error scales by the
        // rate spread.
        let se_mu = se_idle * (b.r_idle - b.r_busy).abs();
        let mean = reward_sum / n;
        assert!((mean - mu).abs() < 3.0 * se_mu, "mean {mean} vs mu {mu}");
    }

    #[test]
    fn state_evolution_does_not_depend_on_observation() {
        // Restlessness: the same seed yields the same trajectory whether or
        // not the band is "sensed", because sensing never touches the rng.
        let b = BandModel::markov(0.3, 0.4, 1.0, 0.1).unwrap();
        let mut a = ChaCha8Rng::seed_from_u64(5);
        let mut c = ChaCha8Rng::seed_from_u64(5);
        let mut sa = b.sample_initial_state(&mut a).unwrap();
        let mut sc = b.sample_initial_state(&mut c).unwrap();
        for t in 0..10_000u64 {
            let (na, ra) = b.step(sa, &mut a);
            let (nc, rc) = b.step(sc, &mut c);
            let sensed = t % 3 == 0; // "sense" one trajectory on a schedule
            if sensed {
                let _ = ra; // observation only
            }
            assert_eq!(na, nc);
            assert_eq!(ra.to_bits(), rc.to_bits());
            sa = na;
            sc = nc;
        }
    }
}
