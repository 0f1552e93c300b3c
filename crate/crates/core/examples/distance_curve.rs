//! Distances between data at σ⋆² = 4 and models over a σ² grid; every
//! consistent discrepancy should bottom out near 4.

use swabc::experiments::{curve_argmin, distance_curve, DistanceCurveConfig};

fn main() -> swabc::Result<()> {
    for dim in [2, 10] {
        let cfg = DistanceCurveConfig {
            dim,
            n: 500,
            distances: [
                "sliced-wasserstein",
                "hilbert",
                "swapping",
                "knn-kl",
                "analytic-w2",
            ]
            .map(String::from)
            .to_vec(),
            ..DistanceCurveConfig::default()
        };
        let rows = distance_curve(&cfg)?;
        println!("d = {dim}:");
        for name in &cfg.distances {
            println!(
                "  {name:<20} argmin sigma^2 = {:.3}",
                curve_argmin(&rows, name).unwrap()
            );
        }
    }
    Ok(())
}
