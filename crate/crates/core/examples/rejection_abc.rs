//! Rejection ABC with the Sliced-Wasserstein discrepancy on the Gaussian
//! scale model, compared with the conjugate posterior as ε shrinks.

use swabc::abc::{posterior_w1, rejection_abc, AbcConfig, SlicedWassersteinDiscrepancy};
use swabc::models::{ig_sample, GaussianScaleModel};

fn main() -> swabc::Result<()> {
    let model = GaussianScaleModel::benchmark(1, 4.0, 0)?;
    let observed = model.observe(100, 1)?;
    let truth = ig_sample(&model.true_posterior(&observed)?, 20_000, 2)?;
    let sw = SlicedWassersteinDiscrepancy::new(1, 1, 2.0, 3)?;
    for eps in [2.0, 1.0, 0.5, 0.25] {
        let cfg = AbcConfig {
            num_particles: 500,
            epsilon: eps,
            seed: 4,
            ..AbcConfig::default()
        };
        let out = rejection_abc(&model.prior, &model, &observed, &sw, &cfg)?;
        let samples = out.scalar_samples();
        let mean = samples.iter().sum::<f64>() / samples.len() as f64;
        println!(
            "eps = {eps:<4}: {} proposals, posterior mean {mean:.3}, W1 to truth {:.3}",
            out.proposals,
            posterior_w1(&samples, &truth)?
        );
    }
    Ok(())
}
