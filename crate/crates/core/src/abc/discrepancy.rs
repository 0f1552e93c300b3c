//! Ready-made discrepancies for the samplers.

use crate::distance::{
    hilbert_distance, knn_kl_estimate, sample_projections, sliced_wasserstein_projected,
    swapping_distance, ProjectionSet, DEFAULT_HILBERT_BITS, DEFAULT_MAX_SWEEPS,
};
use crate::error::Result;
use crate::measure::EmpiricalMeasure;

use super::Discrepancy;

/// `SW_p` with one projection set fixed for the whole run, so that the
/// acceptance region is a deterministic function of the run seed.
#[derive(Debug, Clone)]
pub struct SlicedWassersteinDiscrepancy {
    pub projections: ProjectionSet,
    pub order_p: f64,
}

impl SlicedWassersteinDiscrepancy {
    pub fn new(dim: usize, num_projections: usize, order_p: f64, seed: u64) -> Result<Self> {
        Ok(Self {
            projections: sample_projections(dim, num_projections, seed)?,
            order_p,
        })
    }
}

impl Discrepancy for SlicedWassersteinDiscrepancy {
    fn distance(&self, observed: &EmpiricalMeasure, synthetic: &EmpiricalMeasure) -> f64 {
        match (
            self.projections.project(observed),
            self.projections.project(synthetic),
        ) {
            (Ok(a), Ok(b)) => sliced_wasserstein_projected(&a, &b, self.order_p),
            _ => f64::INFINITY,
        }
    }
}

/// Hilbert-curve matching cost (WABC with the Hilbert distance).
#[derive(Debug, Clone, Copy)]
pub struct HilbertDiscrepancy {
    pub order_p: f64,
    pub bits: u32,
}

impl Default for HilbertDiscrepancy {
    fn default() -> Self {
        Self {
            order_p: 2.0,
            bits: DEFAULT_HILBERT_BITS,
        }
    }
}

impl Discrepancy for HilbertDiscrepancy {
    fn distance(&self, observed: &EmpiricalMeasure, synthetic: &EmpiricalMeasure) -> f64 {
        hilbert_distance(observed, synthetic, self.order_p, self.bits).unwrap_or(f64::INFINITY)
    }
}

/// Greedy swapping matching cost (WABC with the swapping distance).
#[derive(Debug, Clone, Copy)]
pub struct SwappingDiscrepancy {
    pub order_p: f64,
    pub max_sweeps: usize,
}

impl Default for SwappingDiscrepancy {
    fn default() -> Self {
        Self {
            order_p: 2.0,
            max_sweeps: DEFAULT_MAX_SWEEPS,
        }
    }
}

impl Discrepancy for SwappingDiscrepancy {
    fn distance(&self, observed: &EmpiricalMeasure, synthetic: &EmpiricalMeasure) -> f64 {
        swapping_distance(observed, synthetic, self.order_p, self.max_sweeps)
            .unwrap_or(f64::INFINITY)
    }
}

/// k-NN estimate of `KL(observed ‖ synthetic)`. Can be negative.
#[derive(Debug, Clone, Copy)]
pub struct KlDiscrepancy {
    pub k: usize,
}

impl Default for KlDiscrepancy {
    fn default() -> Self {
        Self { k: 1 }
    }
}

impl Discrepancy for KlDiscrepancy {
    fn distance(&self, observed: &EmpiricalMeasure, synthetic: &EmpiricalMeasure) -> f64 {
        knn_kl_estimate(observed, synthetic, self.k)
            .map(|e| e.value)
            .unwrap_or(f64::INFINITY)
    }
}

/// Euclidean distance between summary vectors `s(y)` and `s(z)`.
pub struct SummaryDiscrepancy<F> {
    summary: F,
}

impl<F> SummaryDiscrepancy<F>
where
    F: Fn(&EmpiricalMeasure) -> Vec<f64> + Sync,
{
    pub fn new(summary: F) -> Self {
        Self { summary }
    }
}

impl<F> Discrepancy for SummaryDiscrepancy<F>
where
    F: Fn(&EmpiricalMeasure) -> Vec<f64> + Sync,
{
    fn distance(&self, observed: &EmpiricalMeasure, synthetic: &EmpiricalMeasure) -> f64 {
        let a = (self.summary)(observed);
        let b = (self.summary)(synthetic);
        a.iter()
            .zip(&b)
            .map(|(x, y)| (x - y) * (x - y))
            .sum::<f64>()
            .sqrt()
    }
}
