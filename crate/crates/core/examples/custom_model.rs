//! Plugging a user-defined prior, simulator and discrepancy into SMC-ABC:
//! the location of a 2D Gaussian under a uniform box prior.

use rand::Rng;
use rand_distr::StandardNormal;
use swabc::abc::{smc_abc, AbcConfig, Prior, Simulator, SlicedWassersteinDiscrepancy};
use swabc::rng::{seeded, StreamRng};
use swabc::EmpiricalMeasure;

struct BoxPrior;

impl Prior for BoxPrior {
    fn dim(&self) -> usize {
        2
    }

    fn sample(&self, rng: &mut StreamRng) -> Vec<f64> {
        vec![rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0)]
    }

    fn log_density(&self, theta: &[f64]) -> f64 {
        if theta.iter().all(|t| t.abs() < 5.0) {
            0.0
        } else {
            f64::NEG_INFINITY
        }
    }
}

struct Location;

impl Simulator for Location {
    fn simulate(&self, theta: &[f64], m: usize, seed: u64) -> swabc::Result<EmpiricalMeasure> {
        let mut r = seeded(seed);
        let pts = (0..m)
            .flat_map(|_| [theta[0], theta[1]])
            .map(|c| c + r.sample::<f64, _>(StandardNormal))
            .collect();
        EmpiricalMeasure::new(pts, 2)
    }
}

fn main() -> swabc::Result<()> {
    let truth = [1.5, -0.5];
    let observed = Location.simulate(&truth, 200, 99)?;
    let cfg = AbcConfig {
        num_particles: 400,
        max_generations: Some(10),
        seed: 5,
        ..AbcConfig::default()
    };
    let sw = SlicedWassersteinDiscrepancy::new(2, 50, 2.0, 6)?;
    let out = smc_abc(&BoxPrior, &Location, &observed, &sw, &cfg)?;
    let last = out.last();
    let mean = |c: usize| {
        last.particles
            .iter()
            .map(|p| p.weight * p.theta[c])
            .sum::<f64>()
    };
    println!(
        "stopped after generation {} ({:?})",
        last.generation, out.stop
    );
    println!(
        "posterior mean ({:.3}, {:.3}), truth {truth:?}",
        mean(0),
        mean(1)
    );
    Ok(())
}
