//! k-nearest-neighbour estimator of `KL(a ‖ b)` from samples.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::measure::EmpiricalMeasure;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KlEstimate {
    pub value: f64,
    /// Number of zero neighbour distances that had to be floored.
    pub degenerate: usize,
}

#[inline]
fn sq_dist(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum()
}

/// Keeps the `k` smallest values seen so far in ascending order.
fn push_smallest(best: &mut Vec<f64>, k: usize, v: f64) {
    if best.len() == k {
        if v >= best[k - 1] {
            return;
        }
        best.pop();
    }
    let at = best.partition_point(|&b| b <= v);
    best.insert(at, v);
}

struct Neighbours {
    rho: f64,
    nu: f64,
    min_positive: f64,
}

/// `(d/n) Σ_i log(ν_k(i)/ρ_k(i)) + log(m/(n−1))`, where `ρ_k(i)` is the
/// distance from `a_i` to its k-th neighbour in `a \ {a_i}` and `ν_k(i)` to its
/// k-th neighbour in `b`.
///
/// Zero neighbour distances (duplicate points) are replaced by the smallest
/// positive pairwise distance times `1e-6` and counted in
/// [`KlEstimate::degenerate`].
pub fn knn_kl_estimate(a: &EmpiricalMeasure, b: &EmpiricalMeasure, k: usize) -> Result<KlEstimate> {
    a.check_same_dim(b)?;
    let (n, m) = (a.len(), b.len());
    if k == 0 {
        return Err(Error::invalid("k must be >= 1"));
    }
    if n <= k {
        return Err(Error::invalid(format!(
            "need more than k = {k} points in a, got {n}"
        )));
    }
    if m < k {
        return Err(Error::invalid(format!(
            "need at least k = {k} points in b, got {m}"
        )));
    }

    let per_point: Vec<Neighbours> = (0..n)
        .into_par_iter()
        .map(|i| {
            let x = a.point(i);
            let mut within = Vec::with_capacity(k + 1);
            let mut across = Vec::with_capacity(k + 1);
            let mut min_positive = f64::INFINITY;
            for (j, y) in a.rows().enumerate() {
                if j != i {
                    let s = sq_dist(x, y);
                    if s > 0.0 {
                        min_positive = min_positive.min(s);
                    }
                    push_smallest(&mut within, k, s);
                }
            }
            for y in b.rows() {
                let s = sq_dist(x, y);
                if s > 0.0 {
                    min_positive = min_positive.min(s);
                }
                push_smallest(&mut across, k, s);
            }
            Neighbours {
                rho: within[k - 1].sqrt(),
                nu: across[k - 1].sqrt(),
                min_positive: min_positive.sqrt(),
            }
        })
        .collect();

    let floor_base = per_point
        .iter()
        .map(|p| p.min_positive)
        .fold(f64::INFINITY, f64::min);
    let floor = if floor_base.is_finite() {
        floor_base * 1e-6
    } else {
        f64::MIN_POSITIVE
    };

    let mut degenerate = 0;
    let mut sum = 0.0;
    for p in &per_point {
        let mut fix = |v: f64| {
            if v > 0.0 {
                v
            } else {
                degenerate += 1;
                floor
            }
        };
        let (nu, rho) = (fix(p.nu), fix(p.rho));
        sum += (nu / rho).ln();
    }
    let d = a.dim() as f64;
    let value = d / n as f64 * sum + (m as f64 / (n as f64 - 1.0)).ln();
    Ok(KlEstimate { value, degenerate })
}
