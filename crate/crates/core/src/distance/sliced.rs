//! Monte Carlo Sliced-Wasserstein distance.

use serde::{Deserialize, Serialize};

use super::projection::{sample_projections, ProjectedMeasure, ProjectionSet};
use super::wasserstein1d::{check_order, root, wasserstein_1d_pow_sorted};
use crate::error::{Error, Result};
use crate::measure::EmpiricalMeasure;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DistanceConfig {
    pub order_p: f64,
    pub num_projections: usize,
    pub seed: u64,
}

impl Default for DistanceConfig {
    fn default() -> Self {
        Self {
            order_p: 2.0,
            num_projections: 100,
            seed: 0,
        }
    }
}

impl DistanceConfig {
    pub fn validate(&self) -> Result<()> {
        check_order(self.order_p)?;
        if self.num_projections == 0 {
            return Err(Error::invalid("num_projections must be >= 1"));
        }
        Ok(())
    }
}

/// `SW_p` estimated with `cfg.num_projections` directions drawn from
/// `cfg.seed`.
pub fn sliced_wasserstein(
    a: &EmpiricalMeasure,
    b: &EmpiricalMeasure,
    cfg: &DistanceConfig,
) -> Result<f64> {
    cfg.validate()?;
    a.check_same_dim(b)?;
    let projections = sample_projections(a.dim(), cfg.num_projections, cfg.seed)?;
    sliced_wasserstein_with(a, b, &projections, cfg.order_p)
}

/// `SW_p` over an explicit, shared set of directions.
pub fn sliced_wasserstein_with(
    a: &EmpiricalMeasure,
    b: &EmpiricalMeasure,
    projections: &ProjectionSet,
    p: f64,
) -> Result<f64> {
    check_order(p)?;
    a.check_same_dim(b)?;
    let pa = projections.project(a)?;
    let pb = projections.project(b)?;
    Ok(sliced_wasserstein_projected(&pa, &pb, p))
}

/// `(1/L Σ_l W_p^p)^{1/p}` between two already projected measures. Both must
/// come from the same [`ProjectionSet`].
pub fn sliced_wasserstein_projected(a: &ProjectedMeasure, b: &ProjectedMeasure, p: f64) -> f64 {
    root(sliced_wasserstein_projected_pow(a, b, p), p)
}

/// `SW_p^p` between projected measures.
pub fn sliced_wasserstein_projected_pow(a: &ProjectedMeasure, b: &ProjectedMeasure, p: f64) -> f64 {
    let l = a.num_projections();
    debug_assert_eq!(l, b.num_projections());
    let total: f64 = (0..l)
        .map(|k| wasserstein_1d_pow_sorted(a.slice(k), b.slice(k), p))
        .sum();
    total / l as f64
}
