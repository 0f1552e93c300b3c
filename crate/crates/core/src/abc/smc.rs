use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::batch::{evaluate, next_batch_size};
use super::kernel::GaussianKernel;
use super::{AbcConfig, Discrepancy, Prior, Simulator, StopReason};
use crate::error::{Error, Result};
use crate::measure::EmpiricalMeasure;
use crate::rng::{self, StreamRng};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Particle {
    pub theta: Vec<f64>,
    pub weight: f64,
    pub distance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Population {
    pub generation: usize,
    pub epsilon: f64,
    pub particles: Vec<Particle>,
    /// Accepted over proposed, including proposals outside the prior support.
    pub acceptance_rate: f64,
    pub proposals: u64,
    pub simulations: u64,
    /// Wall clock since the start of the run when this generation closed.
    pub elapsed_seconds: f64,
    /// The perturbation kernel fell back to an isotropic covariance.
    pub degenerate_kernel: bool,
}

impl Population {
    pub fn thetas(&self, coord: usize) -> Vec<f64> {
        self.particles.iter().map(|p| p.theta[coord]).collect()
    }

    pub fn weights(&self) -> Vec<f64> {
        self.particles.iter().map(|p| p.weight).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SmcOutput {
    pub populations: Vec<Population>,
    pub stop: StopReason,
    pub total_simulations: u64,
}

impl SmcOutput {
    pub fn last(&self) -> &Population {
        self.populations.last().expect("at least one generation")
    }
}

enum Proposal {
    OutsideSupport,
    Simulated { theta: Vec<f64>, distance: f64 },
}

/// Lower empirical `alpha`-quantile.
fn quantile(values: &[f64], alpha: f64) -> f64 {
    let mut v = values.to_vec();
    v.sort_unstable_by(f64::total_cmp);
    let k = ((alpha * v.len() as f64).ceil() as usize).clamp(1, v.len());
    v[k - 1]
}

fn pick_ancestor(cumulative: &[f64], rng: &mut StreamRng) -> usize {
    let u: f64 = rng.random::<f64>() * cumulative[cumulative.len() - 1];
    cumulative
        .partition_point(|&c| c <= u)
        .min(cumulative.len() - 1)
}

fn log_sum_exp(values: impl Iterator<Item = f64>) -> f64 {
    let v: Vec<f64> = values.collect();
    let top = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if top == f64::NEG_INFINITY {
        return top;
    }
    top + v.iter().map(|x| (x - top).exp()).sum::<f64>().ln()
}

struct Budget<'a> {
    cfg: &'a AbcConfig,
    started: Instant,
    simulations: u64,
}

impl Budget<'_> {
    fn remaining(&self) -> Option<u64> {
        self.cfg
            .max_total_simulations
            .map(|b| b.saturating_sub(self.simulations))
    }

    fn out_of_time(&self) -> bool {
        self.cfg
            .time_budget_seconds
            .is_some_and(|t| self.started.elapsed().as_secs_f64() > t)
    }
}

/// Adaptive sequential Monte Carlo ABC.
///
/// Generation 0 samples `N` particles from the prior with `ε₀` the largest
/// distance. Generation `t` uses `ε_t`, the `quantile_alpha` quantile of the
/// previous distances; proposals pick an ancestor by weight, perturb it with a
/// Gaussian kernel of covariance `kernel_scale ×` the weighted covariance, and
/// are accepted when their distance is at most `ε_t`. Importance weights are
/// `π(θ) / Σ_j w_j K(θ | θ_j)`.
///
/// The run stops on `max_generations`, the simulation or time budget, or when
/// `ε_t` improves by less than `min_epsilon_improvement` (relative). A
/// generation cut short by a budget is discarded, except generation 0 which
/// is returned partially filled.
pub fn smc_abc<P, S, D>(
    prior: &P,
    simulator: &S,
    observed: &EmpiricalMeasure,
    discrepancy: &D,
    cfg: &AbcConfig,
) -> Result<SmcOutput>
where
    P: Prior + ?Sized,
    S: Simulator + ?Sized,
    D: Discrepancy + ?Sized,
{
    cfg.validate_smc()?;
    let m = cfg.synthetic_size.unwrap_or(observed.len());
    let n = cfg.num_particles;
    let mut budget = Budget {
        cfg,
        started: Instant::now(),
        simulations: 0,
    };

    let simulate = |theta: &[f64], r: &mut StreamRng| -> Result<f64> {
        let z = simulator.simulate(theta, m, r.random())?;
        Ok(discrepancy.distance(observed, &z))
    };

    // generation 0: prior draws, every one accepted
    let mut particles: Vec<Particle> = Vec::with_capacity(n);
    let mut stop = None;
    while particles.len() < n {
        if budget.out_of_time() {
            stop = Some(StopReason::TimeBudget);
            break;
        }
        let remaining = budget.remaining();
        if remaining == Some(0) {
            stop = Some(StopReason::SimulationBudget);
            break;
        }
        let size = (n - particles.len())
            .min(remaining.unwrap_or(u64::MAX) as usize)
            .min(8192);
        let start = particles.len() as u64;
        let batch = evaluate(start, size, |idx| -> Result<Particle> {
            let mut r = rng::stream(cfg.seed, &[0, idx]);
            let theta = prior.sample(&mut r);
            let distance = simulate(&theta, &mut r)?;
            Ok(Particle {
                theta,
                weight: 0.0,
                distance,
            })
        });
        for p in batch {
            particles.push(p?);
        }
        budget.simulations += size as u64;
    }
    if particles.is_empty() {
        return Err(Error::invalid("simulation budget allows no prior draw"));
    }
    let w0 = 1.0 / particles.len() as f64;
    particles.iter_mut().for_each(|p| p.weight = w0);
    let eps0 = particles.iter().map(|p| p.distance).fold(0.0, f64::max);
    let count = particles.len() as u64;
    let mut populations = vec![Population {
        generation: 0,
        epsilon: eps0,
        particles,
        acceptance_rate: 1.0,
        proposals: count,
        simulations: count,
        elapsed_seconds: budget.started.elapsed().as_secs_f64(),
        degenerate_kernel: false,
    }];

    if let Some(reason) = stop {
        return Ok(SmcOutput {
            populations,
            stop: reason,
            total_simulations: budget.simulations,
        });
    }

    let stop = loop {
        let prev = populations.last().expect("generation 0 exists");
        let t = prev.generation + 1;
        if cfg.max_generations.is_some_and(|g| t >= g) {
            break StopReason::MaxGenerations;
        }
        if prev.epsilon <= 0.0 {
            break StopReason::ZeroEpsilon;
        }
        let distances: Vec<f64> = prev.particles.iter().map(|p| p.distance).collect();
        let eps = quantile(&distances, cfg.quantile_alpha);
        if (prev.epsilon - eps) / prev.epsilon < cfg.min_epsilon_improvement {
            break StopReason::Stagnation;
        }
        match next_generation(prior, &simulate, prev, eps, t, cfg, &mut budget)? {
            Ok(pop) => populations.push(pop),
            Err(reason) => break reason,
        }
    };

    Ok(SmcOutput {
        populations,
        stop,
        total_simulations: budget.simulations,
    })
}

#[allow(clippy::type_complexity)]
fn next_generation<P: Prior + ?Sized>(
    prior: &P,
    simulate: &(dyn Fn(&[f64], &mut StreamRng) -> Result<f64> + Sync),
    prev: &Population,
    eps: f64,
    generation: usize,
    cfg: &AbcConfig,
    budget: &mut Budget<'_>,
) -> Result<std::result::Result<Population, StopReason>> {
    let n = cfg.num_particles;
    let thetas: Vec<Vec<f64>> = prev.particles.iter().map(|p| p.theta.clone()).collect();
    let weights = prev.weights();
    let kernel = GaussianKernel::fit(&thetas, &weights, cfg.kernel_scale);
    let mut cumulative = Vec::with_capacity(weights.len());
    let mut acc = 0.0;
    for w in &weights {
        acc += w;
        cumulative.push(acc);
    }

    let mut accepted: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n);
    let (mut proposals, mut simulations) = (0u64, 0u64);
    let limit = budget.remaining();
    let exhausted = |sims: u64| limit.is_some_and(|l| sims >= l);
    'fill: while accepted.len() < n {
        if budget.out_of_time() {
            budget.simulations += simulations;
            return Ok(Err(StopReason::TimeBudget));
        }
        if exhausted(simulations) {
            budget.simulations += simulations;
            return Ok(Err(StopReason::SimulationBudget));
        }
        // proposals outside the support cost no simulation, so the batch is
        // not capped by the budget; the serial pass below enforces it
        let size = next_batch_size(n - accepted.len(), accepted.len() as u64, proposals, None);
        let batch = evaluate(proposals, size, |idx| -> Result<Proposal> {
            let mut r = rng::stream(cfg.seed, &[generation as u64, idx]);
            let ancestor = pick_ancestor(&cumulative, &mut r);
            let theta = kernel.perturb(&thetas[ancestor], &mut r);
            if prior.log_density(&theta) == f64::NEG_INFINITY {
                return Ok(Proposal::OutsideSupport);
            }
            let distance = simulate(&theta, &mut r)?;
            Ok(Proposal::Simulated { theta, distance })
        });
        for outcome in batch {
            match outcome? {
                Proposal::OutsideSupport => proposals += 1,
                Proposal::Simulated { theta, distance } => {
                    if exhausted(simulations) {
                        budget.simulations += simulations;
                        return Ok(Err(StopReason::SimulationBudget));
                    }
                    proposals += 1;
                    simulations += 1;
                    if distance <= eps {
                        accepted.push((theta, distance));
                        if accepted.len() == n {
                            break 'fill;
                        }
                    }
                }
            }
        }
    }
    budget.simulations += simulations;

    let log_weights: Vec<f64> = accepted
        .par_iter()
        .map(|(theta, _)| {
            let log_prior = prior.log_density(theta);
            let log_mix = log_sum_exp(
                thetas
                    .iter()
                    .zip(&weights)
                    .map(|(c, &w)| w.ln() + kernel.log_density(theta, c)),
            );
            log_prior - log_mix
        })
        .collect();
    let top = log_weights
        .iter()
        .cloned()
        .fold(f64::NEG_INFINITY, f64::max);
    let raw: Vec<f64> = log_weights.iter().map(|l| (l - top).exp()).collect();
    let total: f64 = raw.iter().sum();
    if !top.is_finite() || !(total > 0.0) || !total.is_finite() {
        let dump: Vec<String> = accepted
            .iter()
            .zip(&log_weights)
            .take(10)
            .map(|((t, d), lw)| format!("theta={t:?} distance={d} log_weight={lw}"))
            .collect();
        return Err(Error::Internal(format!(
            "importance weights underflowed in generation {generation} (epsilon {eps}); first particles: {}",
            dump.join("; ")
        )));
    }
    let particles = accepted
        .into_iter()
        .zip(raw)
        .map(|((theta, distance), w)| Particle {
            theta,
            weight: w / total,
            distance,
        })
        .collect();
    Ok(Ok(Population {
        generation,
        epsilon: eps,
        particles,
        acceptance_rate: n as f64 / proposals as f64,
        proposals,
        simulations,
        elapsed_seconds: budget.started.elapsed().as_secs_f64(),
        degenerate_kernel: kernel.degenerate,
    }))
}
