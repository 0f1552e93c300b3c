use std::time::Instant;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::batch::{evaluate, next_batch_size};
use super::{AbcConfig, Discrepancy, Prior, Simulator, StopReason};
use crate::error::Result;
use crate::measure::EmpiricalMeasure;
use crate::rng;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RejectionOutput {
    pub samples: Vec<Vec<f64>>,
    pub distances: Vec<f64>,
    pub proposals: u64,
    pub status: StopReason,
    pub elapsed_seconds: f64,
}

impl RejectionOutput {
    /// First coordinate of every accepted sample.
    pub fn scalar_samples(&self) -> Vec<f64> {
        self.samples.iter().map(|t| t[0]).collect()
    }
}

/// Vanilla rejection ABC: draw `θ ~ π`, simulate `z_{1:m} ~ μ_θ`, keep `θ`
/// when `D(y, z) ≤ ε`, until `T` samples are kept.
///
/// Each proposal costs one simulation. If `max_total_simulations` or the time
/// budget runs out first, the accepted samples so far are returned with a
/// budget [`StopReason`].
pub fn rejection_abc<P, S, D>(
    prior: &P,
    simulator: &S,
    observed: &EmpiricalMeasure,
    discrepancy: &D,
    cfg: &AbcConfig,
) -> Result<RejectionOutput>
where
    P: Prior + ?Sized,
    S: Simulator + ?Sized,
    D: Discrepancy + ?Sized,
{
    cfg.validate_rejection()?;
    let started = Instant::now();
    let m = cfg.synthetic_size.unwrap_or(observed.len());
    let target = cfg.num_particles;
    let mut out = RejectionOutput {
        samples: Vec::with_capacity(target),
        distances: Vec::with_capacity(target),
        proposals: 0,
        status: StopReason::Complete,
        elapsed_seconds: 0.0,
    };

    'outer: while out.samples.len() < target {
        if let Some(limit) = cfg.time_budget_seconds {
            if started.elapsed().as_secs_f64() > limit {
                out.status = StopReason::TimeBudget;
                break;
            }
        }
        let remaining = cfg.max_total_simulations.map(|b| b - out.proposals);
        if remaining == Some(0) {
            out.status = StopReason::SimulationBudget;
            break;
        }
        let size = next_batch_size(
            target - out.samples.len(),
            out.samples.len() as u64,
            out.proposals,
            remaining,
        );
        let batch = evaluate(out.proposals, size, |idx| -> Result<(Vec<f64>, f64)> {
            let mut r = rng::stream(cfg.seed, &[0, idx]);
            let theta = prior.sample(&mut r);
            let z = simulator.simulate(&theta, m, r.random())?;
            Ok((theta, discrepancy.distance(observed, &z)))
        });
        for outcome in batch {
            let (theta, dist) = outcome?;
            out.proposals += 1;
            if dist <= cfg.epsilon {
                out.samples.push(theta);
                out.distances.push(dist);
                if out.samples.len() == target {
                    break 'outer;
                }
            }
        }
    }
    out.elapsed_seconds = started.elapsed().as_secs_f64();
    Ok(out)
}
