//! Sliced-Wasserstein between two Gaussian samples, against the population
//! value, as the number of projections grows.

use rand::Rng;
use rand_distr::StandardNormal;
use swabc::distance::{gaussian_sw2_oracle, sample_projections, sliced_wasserstein_with};
use swabc::{rng, EmpiricalMeasure};

fn gaussian(n: usize, dim: usize, sd: f64, seed: u64) -> EmpiricalMeasure {
    let mut r = rng::seeded(seed);
    let pts = (0..n * dim)
        .map(|_| sd * r.sample::<f64, _>(StandardNormal))
        .collect();
    EmpiricalMeasure::new(pts, dim).unwrap()
}

fn main() -> swabc::Result<()> {
    let (n, dim) = (1000, 10);
    let a = gaussian(n, dim, 2.0, 1);
    let b = gaussian(n, dim, 1.5, 2);
    let target = gaussian_sw2_oracle(2.0, 1.5, dim)?;
    println!("N(0, 4 I_{dim}) vs N(0, 2.25 I_{dim}), n = {n}; population SW2 = {target}");
    for l in [1, 10, 100, 1000] {
        let dirs = sample_projections(dim, l, 7)?;
        println!(
            "L = {l:>4}: SW2 = {:.4}",
            sliced_wasserstein_with(&a, &b, &dirs, 2.0)?
        );
    }
    Ok(())
}
