//! Exact one-dimensional Wasserstein distances between samples of different
//! sizes, with and without weights.

use swabc::distance::{wasserstein_1d_unsorted, weighted_wasserstein_1d};

fn main() -> swabc::Result<()> {
    let x = [0.0, 1.0, 3.0];
    let y = [0.5, 2.5];
    for p in [1.0, 2.0] {
        println!("W_{p}(x, y) = {:.6}", wasserstein_1d_unsorted(&x, &y, p)?);
    }
    // a point mass at 0 of weight 3 against a uniform sample
    let w = weighted_wasserstein_1d(
        &[0.0, 1.0],
        &[3.0, 1.0],
        &[0.0, 0.5, 1.0, 1.5],
        &[1.0; 4],
        1.0,
    )?;
    println!("weighted W_1 = {w:.6}");
    Ok(())
}
