//! Matchings between two point clouds: Hilbert-curve order, refined by
//! greedy swapping. Both give upper bounds on the exact W_2.

use rand::Rng;
use rand_distr::StandardNormal;
use swabc::distance::{hilbert_distance, hilbert_index, swapping_matching, DEFAULT_HILBERT_BITS};
use swabc::{rng, EmpiricalMeasure};

fn main() -> swabc::Result<()> {
    println!("order-2 Hilbert curve in 2D:");
    for y in (0..4u64).rev() {
        let row: Vec<String> = (0..4u64)
            .map(|x| format!("{:>2}", hilbert_index(&[x, y], 2).unwrap()))
            .collect();
        println!("  {}", row.join(" "));
    }

    let mut r = rng::seeded(3);
    let mut cloud = |shift: f64| {
        let pts: Vec<f64> = (0..400)
            .map(|_| shift + r.sample::<f64, _>(StandardNormal))
            .collect();
        EmpiricalMeasure::new(pts, 2).unwrap()
    };
    let a = cloud(0.0);
    let b = cloud(1.0);
    let h = hilbert_distance(&a, &b, 2.0, DEFAULT_HILBERT_BITS)?;
    let s = swapping_matching(&a, &b, 2.0, 20)?;
    println!("200 points per cloud, mean shift (1, 1):");
    println!("  hilbert  W2 <= {h:.4}");
    println!(
        "  swapping W2 <= {:.4} ({} swaps in {} sweeps)",
        s.distance, s.swaps, s.sweeps
    );
    println!("  exact value for the populations: {:.4}", 2f64.sqrt());
    Ok(())
}
