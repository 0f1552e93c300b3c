//! Nearest-neighbour estimate of KL(N(0,1) ‖ N(μ,1)) = μ²/2.

use rand::Rng;
use rand_distr::StandardNormal;
use swabc::distance::knn_kl_estimate;
use swabc::{rng, EmpiricalMeasure};

fn main() -> swabc::Result<()> {
    let mut r = rng::seeded(11);
    let mut sample = |mu: f64, n: usize| {
        let v: Vec<f64> = (0..n)
            .map(|_| mu + r.sample::<f64, _>(StandardNormal))
            .collect();
        EmpiricalMeasure::from_scalars(&v).unwrap()
    };
    let a = sample(0.0, 2000);
    for mu in [0.0, 0.5, 1.0, 2.0] {
        let b = sample(mu, 2000);
        let est = knn_kl_estimate(&a, &b, 1)?;
        println!(
            "mu = {mu}: estimate {:+.3}, exact {:.3}",
            est.value,
            mu * mu / 2.0
        );
    }
    Ok(())
}
