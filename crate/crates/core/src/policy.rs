//! Arm-selection policies behind a single interface.
//!
//! All policies share the same per-arm sufficient statistics
//! ([`PolicyState`]): sensing counts, running reward means, last-sensed
//! times, and the global clock. The index policy implemented here scores
//! each arm as sample mean plus a confidence term `sqrt(ln(t / tau))` that
//! restarts at zero whenever the arm is sensed, so the interval between
//! sensings of a weak arm stretches out geometrically. UCB1, an
//! epoch-based explore/exploit schedule and a fixed-arm oracle are provided
//! as baselines.
//!
//! Every tie is broken toward the lowest arm index; given the same reward
//! sequence, every policy reproduces the same selection sequence.

use thiserror::Error;

/// Errors from policy state maintenance and selection.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum PolicyError {
    #[error("confidence term needs 1 <= tau <= t, got tau = {tau}, t = {t}")]
    InvalidSensingTime { t: u64, tau: u64 },
    #[error("reward {0} must lie in [0, 1]")]
    RewardOutOfRange(f64),
    #[error("arm {arm} out of range for {n_arms} arms")]
    ArmOutOfRange { arm: usize, n_arms: usize },
    #[error("inconsistent policy state: {0}")]
    InconsistentState(String),
}

/// Exploration budget of the explore/exploit schedule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DseeBudget {
    /// Fixed parameter: budget `D * ln(t)` exploration steps by time t.
    Constant(f64),
    /// Self-scaling variant: budget `ln(t) * ln(t)`.
    LogTime,
}

impl DseeBudget {
    fn threshold(self, t: u64) -> f64 {
        let lt = (t as f64).ln();
        match self {
            DseeBudget::Constant(d) => d * lt,
            DseeBudget::LogTime => lt * lt,
        }
    }
}

/// Which policy drives arm selection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PolicyKind {
    /// Sample mean plus `sqrt(ln(t / tau))` confidence term.
    Proposed,
    /// Sample mean plus `sqrt(2 ln(t) / T_n)` bonus.
    Ucb1,
    /// Deterministic sequencing of exploration and exploitation epochs.
    Dsee { budget: DseeBudget },
    /// Always play one fixed arm. `None` means "resolve to the arm with the
    /// highest true mean" at simulation start.
    Oracle { arm: Option<usize> },
}

/// Per-arm sufficient statistics for any index policy.
///
/// The clock starts at `t = 1`; the first `N` decisions are the round-robin
/// initialization and `t` advances by one per completed update. Means are
/// stored as (sum, count) pairs and divided on read, so they stay exact
/// running means over arbitrarily many updates.
#[derive(Debug, Clone, PartialEq)]
pub struct PolicyState {
    t: u64,
    reward_sums: Vec<f64>,
    counts: Vec<u64>,
    last_sensed: Vec<u64>,
}

impl PolicyState {
    /// Fresh state before the first decision (`t = 1`, nothing sensed).
    pub fn new(n_arms: usize) -> Self {
        assert!(n_arms >= 1, "need at least one arm");
        Self {
            t: 1,
            reward_sums: vec![0.0; n_arms],
            counts: vec![0; n_arms],
            last_sensed: vec![0; n_arms],
        }
    }

    /// Rebuild a mid-episode state from recorded parts.
    ///
    /// Checks structural consistency: equal lengths, `sum(counts) = t - 1`,
    /// `last_sensed < t`, and `last_sensed[n] = 0` exactly for unsensed arms.
    /// Reward sums are trusted as given.
    pub fn from_parts(
        t: u64,
        reward_sums: Vec<f64>,
        counts: Vec<u64>,
        last_sensed: Vec<u64>,
    ) -> Result<Self, PolicyError> {
        let n = reward_sums.len();
        if n == 0 || counts.len() != n || last_sensed.len() != n {
            return Err(PolicyError::InconsistentState(
                "per-arm vectors must be non-empty and of equal length".into(),
            ));
        }
        if t < 1 {
            return Err(PolicyError::InconsistentState("clock starts at t = 1".into()));
        }
        let decisions: u64 = counts.iter().sum();
        if decisions != t - 1 {
            return Err(PolicyError::InconsistentState(format!(
                "counts sum to {decisions} but t = {t} implies {} completed decisions",
                t - 1
            )));
        }
        for (arm, (&tau, &c)) in last_sensed.iter().zip(&counts).enumerate() {
            if tau >= t {
                return Err(PolicyError::InconsistentState(format!(
                    "last_sensed[{arm}] = {tau} is not before t = {t}"
                )));
            }
            if (tau == 0) != (c == 0) {
                return Err(PolicyError::InconsistentState(format!(
                    "last_sensed[{arm}] = {tau} inconsistent with count {c}"
                )));
            }
        }
        Ok(Self {
            t,
            reward_sums,
            counts,
            last_sensed,
        })
    }

    /// Current decision index (1-based).
    pub fn t(&self) -> u64 {
        self.t
    }

    pub fn n_arms(&self) -> usize {
        self.counts.len()
    }

    /// Times arm `arm` has been sensed so far.
    pub fn count(&self, arm: usize) -> u64 {
        self.counts[arm]
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Running sample mean of `arm`; 0 before the arm is first sensed.
    pub fn mean(&self, arm: usize) -> f64 {
        if self.counts[arm] == 0 {
            0.0
        } else {
            self.reward_sums[arm] / self.counts[arm] as f64
        }
    }

    /// Last time instant `arm` was sensed; 0 means never.
    pub fn last_sensed(&self, arm: usize) -> u64 {
        self.last_sensed[arm]
    }

    /// Record the reward observed for the arm selected at the current `t`,
    /// then advance the clock. All other arms' statistics are untouched.
    pub fn update(&mut self, arm: usize, reward: f64) -> Result<(), PolicyError> {
        if arm >= self.n_arms() {
            return Err(PolicyError::ArmOutOfRange {
                arm,
                n_arms: self.n_arms(),
            });
        }
        if !(0.0..=1.0).contains(&reward) {
            return Err(PolicyError::RewardOutOfRange(reward));
        }
        self.reward_sums[arm] += reward;
        self.counts[arm] += 1;
        self.last_sensed[arm] = self.t;
        self.t += 1;
        Ok(())
    }
}

/// Confidence term `sqrt(ln(t / tau))` for an arm last sensed at `tau`.
///
/// Exactly 0 when `tau = t` (the moment of sensing) and strictly increasing
/// in `t` afterwards; unlike a statistical confidence bound it ignores the
/// sample size entirely.
pub fn confidence_term(t: u64, tau: u64) -> Result<f64, PolicyError> {
    if tau == 0 || tau > t {
        return Err(PolicyError::InvalidSensingTime { t, tau });
    }
    Ok(confidence_term_unchecked(t, tau))
}

fn confidence_term_unchecked(t: u64, tau: u64) -> f64 {
    (t as f64 / tau as f64).ln().sqrt()
}

/// Index of the first maximal score; ties go to the lowest arm.
fn argmax_lowest(scores: impl Iterator<Item = f64>) -> usize {
    let mut best = 0;
    let mut best_score = f64::NEG_INFINITY;
    for (arm, score) in scores.enumerate() {
        if score > best_score {
            best = arm;
            best_score = score;
        }
    }
    best
}

/// Round-robin initialization arm for `t <= N`, else `None`.
fn initialization_arm(state: &PolicyState) -> Option<usize> {
    if state.t <= state.n_arms() as u64 {
        Some((state.t - 1) as usize)
    } else {
        None
    }
}

/// Selection rule of the confidence-term index policy: round-robin for the
/// first `N` decisions, afterwards the arm maximizing
/// `mean + sqrt(ln(t / tau))`.
pub fn select_proposed(state: &PolicyState) -> usize {
    if let Some(arm) = initialization_arm(state) {
        return arm;
    }
    if let Some(arm) = state.counts.iter().position(|&c| c == 0) {
        return arm; // only reachable from reconstructed states
    }
    let t = state.t;
    argmax_lowest(
        (0..state.n_arms())
            .map(|arm| state.mean(arm) + confidence_term_unchecked(t, state.last_sensed[arm])),
    )
}

/// UCB1 selection: round-robin initialization, afterwards the arm
/// maximizing `mean + sqrt(2 ln(t) / T_n)`.
pub fn select_ucb1(state: &PolicyState) -> usize {
    if let Some(arm) = initialization_arm(state) {
        return arm;
    }
    if let Some(arm) = state.counts.iter().position(|&c| c == 0) {
        return arm;
    }
    let ln_t = (state.t as f64).ln();
    argmax_lowest(
        (0..state.n_arms())
            .map(|arm| state.mean(arm) + (2.0 * ln_t / state.counts[arm] as f64).sqrt()),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum DseePhase {
    Explore,
    Exploit,
}

/// Bookkeeping for the deterministic explore/exploit schedule.
///
/// Epoch lengths grow geometrically with ratio 4: the k-th exploration
/// epoch spends `N * 4^(k-1)` steps cycling round-robin over all arms, the
/// k-th exploitation epoch spends `2 * 4^(k-1)` steps on the arm with the
/// best mean *over exploration observations only*. At each epoch boundary
/// an exploration epoch starts iff the accumulated exploration time X(t)
/// is below the budget `D(t) * ln(t)` (the very first epoch always
/// explores, since nothing is known yet).
#[derive(Debug, Clone, PartialEq)]
pub struct DseeSchedule {
    budget: DseeBudget,
    phase: DseePhase,
    steps_left: u64,
    explore_epochs: u32,
    exploit_epochs: u32,
    explored_steps: u64,
    position: u64,
    exploit_arm: usize,
    explore_sums: Vec<f64>,
    explore_counts: Vec<u64>,
}

impl DseeSchedule {
    pub fn new(n_arms: usize, budget: DseeBudget) -> Self {
        assert!(n_arms >= 1, "need at least one arm");
        Self {
            budget,
            phase: DseePhase::Explore,
            steps_left: 0,
            explore_epochs: 0,
            exploit_epochs: 0,
            explored_steps: 0,
            position: 0,
            exploit_arm: 0,
            explore_sums: vec![0.0; n_arms],
            explore_counts: vec![0; n_arms],
        }
    }

    /// Total exploration steps so far (the budget variable X(t)).
    pub fn explored_steps(&self) -> u64 {
        self.explored_steps
    }

    fn n_arms(&self) -> usize {
        self.explore_counts.len()
    }

    fn start_epoch(&mut self, t: u64) {
        let explore = self.explored_steps == 0
            || (self.explored_steps as f64) < self.budget.threshold(t);
        if explore {
            self.phase = DseePhase::Explore;
            self.explore_epochs += 1;
            let len = 4u64.saturating_pow(self.explore_epochs - 1);
            self.steps_left = (self.n_arms() as u64).saturating_mul(len);
        } else {
            self.phase = DseePhase::Exploit;
            self.exploit_epochs += 1;
            self.steps_left = 2u64.saturating_mul(4u64.saturating_pow(self.exploit_epochs - 1));
            self.exploit_arm = argmax_lowest((0..self.n_arms()).map(|arm| {
                if self.explore_counts[arm] == 0 {
                    f64::NEG_INFINITY
                } else {
                    self.explore_sums[arm] / self.explore_counts[arm] as f64
                }
            }));
        }
        self.position = 0;
    }

    /// Arm for the current step. Starts a new epoch first when the previous
    /// one is exhausted; calling again before `observe` returns the same arm.
    pub fn select(&mut self, state: &PolicyState) -> usize {
        if self.steps_left == 0 {
            self.start_epoch(state.t());
        }
        match self.phase {
            DseePhase::Explore => (self.position % self.n_arms() as u64) as usize,
            DseePhase::Exploit => self.exploit_arm,
        }
    }

    /// Consume one scheduled step and, during exploration, fold the reward
    /// into the exploration-only means.
    fn observe(&mut self, arm: usize, reward: f64) {
        if self.phase == DseePhase::Explore {
            self.explore_sums[arm] += reward;
            self.explore_counts[arm] += 1;
            self.explored_steps += 1;
        }
        self.position += 1;
        self.steps_left = self.steps_left.saturating_sub(1);
    }
}

/// A policy bundled with its state, ready to drive one episode.
#[derive(Debug, Clone, PartialEq)]
pub struct Policy {
    kind: PolicyKind,
    state: PolicyState,
    dsee: Option<DseeSchedule>,
    oracle_arm: usize,
}

impl Policy {
    /// Build a policy for `n_arms` arms.
    ///
    /// An `Oracle` kind must carry a concrete in-range arm here; use
    /// [`PolicyKind::Oracle`] with `Some(arm)` (the simulator resolves
    /// `None` to the best true-mean arm before constructing the policy).
    pub fn new(kind: PolicyKind, n_arms: usize) -> Result<Self, PolicyError> {
        let (dsee, oracle_arm) = match kind {
            PolicyKind::Dsee { budget } => (Some(DseeSchedule::new(n_arms, budget)), 0),
            PolicyKind::Oracle { arm } => {
                let arm = arm.ok_or_else(|| {
                    PolicyError::InconsistentState(
                        "oracle arm must be resolved before constructing the policy".into(),
                    )
                })?;
                if arm >= n_arms {
                    return Err(PolicyError::ArmOutOfRange { arm, n_arms });
                }
                (None, arm)
            }
            _ => (None, 0),
        };
        Ok(Self {
            kind,
            state: PolicyState::new(n_arms),
            dsee,
            oracle_arm,
        })
    }

    pub fn kind(&self) -> &PolicyKind {
        &self.kind
    }

    pub fn state(&self) -> &PolicyState {
        &self.state
    }

    /// Arm to sense at the current time instant.
    pub fn select_arm(&mut self) -> usize {
        match self.kind {
            PolicyKind::Proposed => select_proposed(&self.state),
            PolicyKind::Ucb1 => select_ucb1(&self.state),
            PolicyKind::Dsee { .. } => {
                let dsee = self.dsee.as_mut().expect("dsee schedule present");
                dsee.select(&self.state)
            }
            PolicyKind::Oracle { .. } => self.oracle_arm,
        }
    }

    /// Reveal the selected arm's reward and advance the clock.
    pub fn update(&mut self, arm: usize, reward: f64) -> Result<(), PolicyError> {
        self.state.update(arm, reward)?;
        if let Some(dsee) = self.dsee.as_mut() {
            dsee.observe(arm, reward);
        }
        Ok(())
    }
}
