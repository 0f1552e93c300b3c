use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Settings shared by [`rejection_abc`](super::rejection_abc) and
/// [`smc_abc`](super::smc_abc). `None` means "unlimited" for the stopping
/// conditions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AbcConfig {
    /// `T` accepted samples (rejection) or `N` particles per generation (SMC).
    pub num_particles: usize,
    /// Rejection tolerance; `+∞` accepts every proposal.
    pub epsilon: f64,
    /// SMC threshold schedule: `ε_t` is this quantile of generation `t−1`
    /// distances.
    pub quantile_alpha: f64,
    /// Synthetic sample size `m`; defaults to the observed size.
    pub synthetic_size: Option<usize>,
    pub max_generations: Option<usize>,
    pub max_total_simulations: Option<u64>,
    pub time_budget_seconds: Option<f64>,
    /// SMC stops once `(ε_{t−1} − ε_t)/ε_{t−1}` falls below this.
    pub min_epsilon_improvement: f64,
    /// Scale applied to the weighted covariance in the SMC perturbation kernel.
    pub kernel_scale: f64,
    pub seed: u64,
}

impl Default for AbcConfig {
    fn default() -> Self {
        Self {
            num_particles: 1000,
            epsilon: 1.0,
            quantile_alpha: 0.5,
            synthetic_size: None,
            max_generations: Some(20),
            max_total_simulations: None,
            time_budget_seconds: None,
            min_epsilon_improvement: 1e-4,
            kernel_scale: 2.0,
            seed: 0,
        }
    }
}

impl AbcConfig {
    pub(crate) fn validate_rejection(&self) -> Result<()> {
        if self.num_particles == 0 {
            return Err(Error::invalid("number of samples T must be >= 1"));
        }
        if !(self.epsilon > 0.0) {
            return Err(Error::invalid(format!(
                "epsilon must be > 0, got {}",
                self.epsilon
            )));
        }
        self.validate_budgets()
    }

    pub(crate) fn validate_smc(&self) -> Result<()> {
        if self.num_particles < 2 {
            return Err(Error::invalid("SMC needs at least 2 particles"));
        }
        if !(self.quantile_alpha > 0.0 && self.quantile_alpha < 1.0) {
            return Err(Error::invalid(format!(
                "quantile_alpha must lie in (0, 1), got {}",
                self.quantile_alpha
            )));
        }
        if !(self.kernel_scale > 0.0) || !self.kernel_scale.is_finite() {
            return Err(Error::invalid("kernel_scale must be positive"));
        }
        if self.max_generations.is_none()
            && self.max_total_simulations.is_none()
            && self.time_budget_seconds.is_none()
        {
            return Err(Error::invalid(
                "at least one of max_generations, max_total_simulations, time_budget_seconds must be set",
            ));
        }
        self.validate_budgets()
    }

    fn validate_budgets(&self) -> Result<()> {
        if self.synthetic_size == Some(0) {
            return Err(Error::invalid("synthetic_size must be >= 1"));
        }
        if let Some(t) = self.time_budget_seconds {
            if !(t > 0.0) {
                return Err(Error::invalid("time_budget_seconds must be > 0"));
            }
        }
        if self.max_generations == Some(0) {
            return Err(Error::invalid("max_generations must be >= 1"));
        }
        Ok(())
    }
}

/// Why a sampler stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StopReason {
    /// Rejection sampler collected all `T` samples.
    Complete,
    MaxGenerations,
    Stagnation,
    /// The tolerance reached zero; no further shrinking is possible.
    ZeroEpsilon,
    SimulationBudget,
    TimeBudget,
}

impl StopReason {
    /// True when a budget cut the run short (partial results).
    pub fn is_budget_exhausted(self) -> bool {
        matches!(self, StopReason::SimulationBudget | StopReason::TimeBudget)
    }
}
