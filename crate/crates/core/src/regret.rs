//! Weak regret and its analytic companions.
//!
//! Weak regret compares a policy's payoff against the best *single* band:
//! `R(t) = t * mu_star - sum_n mu_n * T_n(t)`, which collapses to
//! `sum_n gap_n * T_n(t)`. The pseudo-regret form used here weights the
//! realized sensing counts by the true means; it is an unbiased, much
//! lower-variance estimator of the expected weak regret, which is what
//! makes slope comparisons feasible at moderate run counts.

use thiserror::Error;

/// Errors from regret computations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum RegretError {
    #[error("counts sum to {got} but t = {expected}")]
    CountSumMismatch { expected: u64, got: u64 },
    #[error("counts vector has {got} arms, profile has {expected}")]
    ArmCountMismatch { expected: usize, got: usize },
    #[error("time index must be >= 1")]
    ZeroTime,
    #[error("growth constant C = {0} must exceed 1")]
    GrowthConstantNotAboveOne(f64),
    #[error("need t >= z1 >= 1, got t = {t}, z1 = {z1}")]
    InvalidSensingWindow { t: f64, z1: f64 },
    #[error("slope estimation needs at least 3 points, got {0}")]
    TooFewPoints(usize),
    #[error("times must be strictly increasing")]
    NonIncreasingTimes,
    #[error("smoothing span must exceed 1, got {0}")]
    InvalidSpan(f64),
}

/// True per-arm means and their optimality gaps.
#[derive(Debug, Clone, PartialEq)]
pub struct GapProfile {
    means: Vec<f64>,
    best_arm: usize,
    mu_star: f64,
    gaps: Vec<f64>,
}

impl GapProfile {
    /// Derive gaps from true means; the best arm is the lowest index
    /// achieving the maximal mean.
    pub fn from_means(means: &[f64]) -> Self {
        assert!(!means.is_empty(), "need at least one arm");
        let mut best_arm = 0;
        let mut mu_star = f64::NEG_INFINITY;
        for (arm, &mu) in means.iter().enumerate() {
            if mu > mu_star {
                best_arm = arm;
                mu_star = mu;
            }
        }
        let gaps = means.iter().map(|&mu| mu_star - mu).collect();
        Self {
            means: means.to_vec(),
            best_arm,
            mu_star,
            gaps,
        }
    }

    pub fn n_arms(&self) -> usize {
        self.means.len()
    }

    pub fn means(&self) -> &[f64] {
        &self.means
    }

    /// Lowest-index arm with the maximal mean.
    pub fn best_arm(&self) -> usize {
        self.best_arm
    }

    pub fn mu_star(&self) -> f64 {
        self.mu_star
    }

    /// `gap_n = mu_star - mu_n`; zero for every optimal arm.
    pub fn gaps(&self) -> &[f64] {
        &self.gaps
    }

    /// Whether the arm ties the best mean (zero gap).
    pub fn is_optimal(&self, arm: usize) -> bool {
        self.gaps[arm] == 0.0
    }
}

/// Weak pseudo-regret at time `t` from realized sensing counts:
/// `sum_n gap_n * T_n(t)`.
///
/// Requires the counts to account for every decision (`sum = t`).
pub fn weak_regret(counts: &[u64], gaps: &GapProfile, t: u64) -> Result<f64, RegretError> {
    if counts.len() != gaps.n_arms() {
        return Err(RegretError::ArmCountMismatch {
            expected: gaps.n_arms(),
            got: counts.len(),
        });
    }
    let total: u64 = counts.iter().sum();
    if total != t {
        return Err(RegretError::CountSumMismatch { expected: t, got: total });
    }
    Ok(counts
        .iter()
        .zip(gaps.gaps())
        .map(|(&c, &gap)| gap * c as f64)
        .sum())
}

/// Asymptotic growth rate of the expected weak regret,
/// `(sum_{gap_n > 0} 1 / gap_n) / t`.
///
/// Arms tying the best mean contribute nothing and are excluded.
pub fn theoretical_slope(t: u64, gaps: &GapProfile) -> Result<f64, RegretError> {
    if t == 0 {
        return Err(RegretError::ZeroTime);
    }
    let sum: f64 = gaps.gaps().iter().filter(|&&g| g > 0.0).map(|&g| 1.0 / g).sum();
    Ok(sum / t as f64)
}

/// Growth constant `C = e^(gap^2)` for the interval between consecutive
/// sensings of a suboptimal arm.
pub fn interval_growth_factor(gap: f64) -> f64 {
    (gap * gap).exp()
}

/// Upper bound on the number of sensings of a suboptimal arm by time `t`,
/// given its first sensing time `z1` and interval growth constant `c`:
/// `(ln t - ln z1) / ln c + 1`.
pub fn sensing_count_bound(t: f64, z1: f64, c: f64) -> Result<f64, RegretError> {
    if c <= 1.0 {
        return Err(RegretError::GrowthConstantNotAboveOne(c));
    }
    if !(z1 >= 1.0 && t >= z1) {
        return Err(RegretError::InvalidSensingWindow { t, z1 });
    }
    Ok((t.ln() - z1.ln()) / c.ln() + 1.0)
}

/// Default geometric span of the slope smoothing window.
pub const DEFAULT_SLOPE_SPAN: f64 = 1.5;

/// Per-time slope estimates of a regret curve sampled at `times`.
///
/// Central finite differences (one-sided at the endpoints), then a moving
/// average over a geometric window spanning a factor `span` in t, i.e.
/// `[t / sqrt(span), t * sqrt(span)]`.
pub fn empirical_slope(times: &[u64], values: &[f64], span: f64) -> Result<Vec<f64>, RegretError> {
    let n = times.len();
    if n < 3 || values.len() != n {
        return Err(RegretError::TooFewPoints(n.min(values.len())));
    }
    if span.is_nan() || span <= 1.0 {
        return Err(RegretError::InvalidSpan(span));
    }
    if times.windows(2).any(|w| w[0] >= w[1]) {
        return Err(RegretError::NonIncreasingTimes);
    }

    let t = |i: usize| times[i] as f64;
    let mut raw = Vec::with_capacity(n);
    raw.push((values[1] - values[0]) / (t(1) - t(0)));
    for i in 1..n - 1 {
        raw.push((values[i + 1] - values[i - 1]) / (t(i + 1) - t(i - 1)));
    }
    raw.push((values[n - 1] - values[n - 2]) / (t(n - 1) - t(n - 2)));

    let half = span.sqrt();
    let mut smoothed = Vec::with_capacity(n);
    let mut lo = 0usize;
    let mut hi = 0usize;
    for i in 0..n {
        let lower = t(i) / half;
        let upper = t(i) * half;
        while t(lo) < lower {
            lo += 1;
        }
        if hi < i {
            hi = i;
        }
        while hi + 1 < n && t(hi + 1) <= upper {
            hi += 1;
        }
        let window = &raw[lo..=hi];
        smoothed.push(window.iter().sum::<f64>() / window.len() as f64);
    }
    Ok(smoothed)
}

/// Regret series normalized by `1 / ln(t)`; undefined (NaN) where `t < 2`.
pub fn normalized_regret(times: &[u64], mean_regret: &[f64]) -> Vec<f64> {
    times
        .iter()
        .zip(mean_regret)
        .map(|(&t, &r)| if t >= 2 { r / (t as f64).ln() } else { f64::NAN })
        .collect()
}

/// Time series of weak regret statistics aggregated over runs.
///
/// Equality is bit-exact on the float series (NaN equals itself): traces
/// are reproducibility artifacts, and two traces are "the same output"
/// exactly when their bytes match.
#[derive(Debug, Clone)]
pub struct RegretTrace {
    /// Recorded time instants, strictly increasing.
    pub times: Vec<u64>,
    /// Mean weak regret across runs at each time.
    pub mean_regret: Vec<f64>,
    /// Standard deviation across runs (1/runs normalization, so a single
    /// run reports zero).
    pub std_regret: Vec<f64>,
    /// `mean_regret / ln(t)`; NaN at t = 1.
    pub normalized: Vec<f64>,
}

fn bits_eq(a: &[f64], b: &[f64]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.to_bits() == y.to_bits())
}

impl PartialEq for RegretTrace {
    fn eq(&self, other: &Self) -> bool {
        self.times == other.times
            && bits_eq(&self.mean_regret, &other.mean_regret)
            && bits_eq(&self.std_regret, &other.std_regret)
            && bits_eq(&self.normalized, &other.normalized)
    }
}

impl RegretTrace {
    /// Assemble a trace; the normalized series is derived on construction.
    pub fn new(times: Vec<u64>, mean_regret: Vec<f64>, std_regret: Vec<f64>) -> Self {
        assert_eq!(times.len(), mean_regret.len());
        assert_eq!(times.len(), std_regret.len());
        let normalized = normalized_regret(&times, &mean_regret);
        Self {
            times,
            mean_regret,
            std_regret,
            normalized,
        }
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Slope estimates of the mean regret curve; see [`empirical_slope`].
    pub fn empirical_slope(&self, span: f64) -> Result<Vec<f64>, RegretError> {
        empirical_slope(&self.times, &self.mean_regret, span)
    }

    /// Value at the largest recorded time `<= t`, if any.
    pub fn at_or_before(&self, t: u64) -> Option<(u64, f64, f64)> {
        let idx = self.times.partition_point(|&x| x <= t).checked_sub(1)?;
        Some((self.times[idx], self.mean_regret[idx], self.std_regret[idx]))
    }
}
