//! Adaptive SMC-ABC with several discrepancies on a 10-dimensional Gaussian
//! scale problem.

use swabc::experiments::{gaussian_bench, GaussianBenchConfig};

fn main() -> swabc::Result<()> {
    let cfg = GaussianBenchConfig {
        dim: 10,
        num_particles: 300,
        max_generations: Some(8),
        methods: vec!["sw".into(), "hilbert".into(), "euclidean-summary".into()],
        reference_draws: 20_000,
        seed: 1,
        ..GaussianBenchConfig::default()
    };
    let report = gaussian_bench(&cfg)?;
    println!("true posterior: {:?}", report.posterior);
    println!(
        "{:<18} {:>4} {:>10} {:>10}",
        "method", "gen", "epsilon", "W1"
    );
    for r in &report.rows {
        println!(
            "{:<18} {:>4} {:>10.4} {:>10.4}",
            r.method.name(),
            r.generation,
            r.epsilon,
            r.w1_to_truth
        );
    }
    Ok(())
}
