#![allow(dead_code)]

use itertools::Itertools;
use rand::Rng;
use rand_distr::StandardNormal;
use swabc::rng::{self, StreamRng};
use swabc::EmpiricalMeasure;

pub fn gaussian(n: usize, dim: usize, sd: f64, seed: u64) -> EmpiricalMeasure {
    let mut r = rng::seeded(seed);
    let pts = (0..n * dim)
        .map(|_| sd * r.sample::<f64, _>(StandardNormal))
        .collect();
    EmpiricalMeasure::new(pts, dim).unwrap()
}

pub fn uniform_measure(r: &mut StreamRng, n: usize, dim: usize, scale: f64) -> EmpiricalMeasure {
    let pts = (0..n * dim)
        .map(|_| r.random_range(-scale..scale))
        .collect();
    EmpiricalMeasure::new(pts, dim).unwrap()
}

/// Exact `W_p` between equal-size uniform empirical measures by enumerating
/// every permutation.
pub fn brute_force_wp(a: &EmpiricalMeasure, b: &EmpiricalMeasure, p: f64) -> f64 {
    let n = a.len();
    let best = (0..n)
        .permutations(n)
        .map(|perm| {
            perm.iter()
                .enumerate()
                .map(|(i, &j)| {
                    let sq: f64 = a
                        .point(i)
                        .iter()
                        .zip(b.point(j))
                        .map(|(x, y)| (x - y) * (x - y))
                        .sum();
                    sq.sqrt().powf(p)
                })
                .sum::<f64>()
        })
        .fold(f64::INFINITY, f64::min);
    (best / n as f64).powf(1.0 / p)
}

pub fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

pub fn median(v: &[f64]) -> f64 {
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    let k = s.len();
    if k % 2 == 1 {
        s[k / 2]
    } else {
        0.5 * (s[k / 2 - 1] + s[k / 2])
    }
}

pub fn corpus_dir() -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("data/corpus")
}

pub const CORPUS: [&str; 5] = ["camera", "coins", "moon", "brick", "grass"];
