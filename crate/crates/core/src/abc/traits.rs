use crate::measure::EmpiricalMeasure;
use crate::rng::StreamRng;

/// Prior distribution `π` over a parameter vector.
pub trait Prior: Sync {
    fn dim(&self) -> usize;

    /// One draw, inside the support with probability one.
    fn sample(&self, rng: &mut StreamRng) -> Vec<f64>;

    /// Log density up to a constant; `-∞` outside the support.
    fn log_density(&self, theta: &[f64]) -> f64;
}

/// Generative model `θ ↦ μ_θ`. Must be a pure function of `(θ, m, seed)`.
pub trait Simulator: Sync {
    fn simulate(&self, theta: &[f64], m: usize, seed: u64) -> crate::Result<EmpiricalMeasure>;
}

/// Non-negative discrepancy between the observed and a synthetic dataset.
pub trait Discrepancy: Sync {
    fn distance(&self, observed: &EmpiricalMeasure, synthetic: &EmpiricalMeasure) -> f64;
}

impl<F> Discrepancy for F
where
    F: Fn(&EmpiricalMeasure, &EmpiricalMeasure) -> f64 + Sync,
{
    fn distance(&self, observed: &EmpiricalMeasure, synthetic: &EmpiricalMeasure) -> f64 {
        self(observed, synthetic)
    }
}
