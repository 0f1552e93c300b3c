//! Posterior comparison and particle CSV output.

use std::io::Write;

use super::Population;
use crate::distance::{wasserstein_1d_unsorted, weighted_wasserstein_1d};
use crate::error::{Error, Result};

/// `W_1` between two scalar posterior samples.
pub fn posterior_w1(samples_a: &[f64], samples_b: &[f64]) -> Result<f64> {
    if samples_a.is_empty() || samples_b.is_empty() {
        return Err(Error::invalid("posterior_w1 needs nonempty samples"));
    }
    wasserstein_1d_unsorted(samples_a, samples_b, 1.0)
}

/// `W_1` between a weighted particle approximation and an unweighted
/// reference sample.
pub fn posterior_w1_weighted(values: &[f64], weights: &[f64], reference: &[f64]) -> Result<f64> {
    let uniform = vec![1.0; reference.len()];
    weighted_wasserstein_1d(values, weights, reference, &uniform, 1.0)
}

/// One row per particle: `generation,theta_0..theta_{k-1},weight,distance,epsilon`.
pub fn write_particles_csv<W: Write>(populations: &[Population], mut out: W) -> Result<()> {
    let dim = populations
        .iter()
        .flat_map(|p| p.particles.first())
        .map(|p| p.theta.len())
        .next()
        .unwrap_or(1);
    write!(out, "generation")?;
    for k in 0..dim {
        write!(out, ",theta_{k}")?;
    }
    writeln!(out, ",weight,distance,epsilon")?;
    for pop in populations {
        for p in &pop.particles {
            write!(out, "{}", pop.generation)?;
            for v in &p.theta {
                write!(out, ",{v}")?;
            }
            writeln!(out, ",{},{},{}", p.weight, p.distance, pop.epsilon)?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abc::Particle;

    #[test]
    fn w1_examples() {
        assert_eq!(posterior_w1(&[0.0, 1.0], &[0.0, 1.0]).unwrap(), 0.0);
        assert_eq!(posterior_w1(&[0.0, 1.0], &[1.0, 2.0]).unwrap(), 1.0);
        assert!(posterior_w1(&[], &[1.0]).is_err());
    }

    #[test]
    fn particles_csv_layout() {
        let pop = Population {
            generation: 2,
            epsilon: 0.5,
            particles: vec![Particle {
                theta: vec![1.5],
                weight: 1.0,
                distance: 0.25,
            }],
            acceptance_rate: 1.0,
            proposals: 1,
            simulations: 1,
            elapsed_seconds: 0.0,
            degenerate_kernel: false,
        };
        let mut buf = Vec::new();
        write_particles_csv(&[pop], &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "generation,theta_0,weight,distance,epsilon\n2,1.5,1,0.25,0.5\n"
        );
    }
}
