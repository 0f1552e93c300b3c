mod common;

use common::{brute_force_wp, gaussian, uniform_measure};
use proptest::prelude::*;
use rand::Rng;
use swabc::distance::{
    gaussian_sw2_oracle, hilbert_distance, hilbert_matching, knn_kl_estimate, sample_projections,
    sliced_wasserstein_with, swapping_distance, swapping_matching, wasserstein_1d,
    wasserstein_1d_unsorted, DEFAULT_HILBERT_BITS,
};
use swabc::{rng, EmpiricalMeasure};

fn measure(rows: &[Vec<f64>]) -> EmpiricalMeasure {
    EmpiricalMeasure::from_rows(rows).unwrap()
}

#[test]
fn one_dimensional_matches_permutation_oracle_for_several_orders() {
    let mut r = rng::seeded(1);
    for _ in 0..100 {
        let n = r.random_range(1..=6usize);
        let a = uniform_measure(&mut r, n, 1, 5.0);
        let b = uniform_measure(&mut r, n, 1, 5.0);
        for p in [1.0, 1.5, 2.0, 3.0] {
            let exact = wasserstein_1d_unsorted(a.as_slice(), b.as_slice(), p).unwrap();
            let oracle = brute_force_wp(&a, &b, p);
            assert!((exact - oracle).abs() < 1e-9, "p={p}: {exact} vs {oracle}");
        }
    }
}

#[test]
fn sorted_and_unsorted_entry_points_agree() {
    let x = [3.0, -1.0, 2.0, 0.5];
    let y = [0.0, 4.0, 1.0];
    let mut xs = x.to_vec();
    let mut ys = y.to_vec();
    xs.sort_by(f64::total_cmp);
    ys.sort_by(f64::total_cmp);
    assert_eq!(
        wasserstein_1d(&xs, &ys, 2.0).unwrap(),
        wasserstein_1d_unsorted(&x, &y, 2.0).unwrap()
    );
    assert!(wasserstein_1d(&x, &ys, 2.0).is_err());
}

#[test]
fn hilbert_bounds_swapping_bounds_exact() {
    let mut r = rng::seeded(2);
    for _ in 0..150 {
        let n = r.random_range(2..=7usize);
        let dim = r.random_range(1..=4usize);
        let a = uniform_measure(&mut r, n, dim, 1.0);
        let b = uniform_measure(&mut r, n, dim, 1.0);
        for p in [1.0, 2.0] {
            let h = hilbert_distance(&a, &b, p, DEFAULT_HILBERT_BITS).unwrap();
            let s = swapping_distance(&a, &b, p, 20).unwrap();
            let w = brute_force_wp(&a, &b, p);
            assert!(h >= s, "hilbert {h} < swapping {s}");
            assert!(s >= w - 1e-12, "swapping {s} < exact {w}");
        }
    }
}

#[test]
fn matchings_are_permutations() {
    let a = gaussian(300, 3, 1.0, 3);
    let b = gaussian(300, 3, 2.0, 4);
    let mut h = hilbert_matching(&a, &b, DEFAULT_HILBERT_BITS).unwrap();
    h.sort_unstable();
    assert_eq!(h, (0..300).collect::<Vec<_>>());
    let mut s = swapping_matching(&a, &b, 2.0, 20).unwrap().assignment;
    s.sort_unstable();
    assert_eq!(s, (0..300).collect::<Vec<_>>());
}

#[test]
fn swapping_is_a_local_optimum_when_converged() {
    let a = gaussian(40, 2, 1.0, 5);
    let b = gaussian(40, 2, 1.0, 6);
    let out = swapping_matching(&a, &b, 2.0, 1000).unwrap();
    assert!(out.sweeps < 1000);
    let cost = |i: usize, j: usize| -> f64 {
        a.point(i)
            .iter()
            .zip(b.point(j))
            .map(|(x, y)| (x - y) * (x - y))
            .sum()
    };
    let pi = &out.assignment;
    for i in 0..40 {
        for j in i + 1..40 {
            let now = cost(i, pi[i]) + cost(j, pi[j]);
            let swapped = cost(i, pi[j]) + cost(j, pi[i]);
            assert!(swapped >= now - 1e-9);
        }
    }
}

#[test]
fn sliced_is_below_exact_wasserstein() {
    // SW_p ≤ W_p for every direction set
    let mut r = rng::seeded(7);
    for t in 0..60 {
        let n = r.random_range(2..=6usize);
        let dim = r.random_range(2..=3usize);
        let a = uniform_measure(&mut r, n, dim, 2.0);
        let b = uniform_measure(&mut r, n, dim, 2.0);
        let dirs = sample_projections(dim, 30, t).unwrap();
        let sw = sliced_wasserstein_with(&a, &b, &dirs, 2.0).unwrap();
        assert!(sw <= brute_force_wp(&a, &b, 2.0) + 1e-12);
    }
}

#[test]
fn sliced_estimate_error_shrinks_like_inverse_sqrt_l() {
    // spread of the Monte Carlo estimate over direction seeds, fixed samples
    let a = gaussian(500, 5, 1.0, 8);
    let b = measure(
        &a.rows()
            .map(|y| y.iter().map(|v| 1.5 * v + 0.3).collect())
            .collect::<Vec<_>>(),
    );
    let spread = |l: usize| {
        let vals: Vec<f64> = (0..40)
            .map(|s| {
                sliced_wasserstein_with(&a, &b, &sample_projections(5, l, s).unwrap(), 2.0).unwrap()
            })
            .collect();
        let m = common::mean(&vals);
        (vals.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / vals.len() as f64).sqrt()
    };
    let ratio = spread(10) / spread(160);
    // ideal ratio is √16 = 4
    assert!((2.5..6.5).contains(&ratio), "ratio {ratio}");
}

#[test]
fn gaussian_sliced_limit_independent_of_dimension() {
    for dim in [1, 4, 16] {
        let a = gaussian(4000, dim, 2.0, 9);
        let b = gaussian(4000, dim, 1.0, 10);
        let sw = sliced_wasserstein_with(&a, &b, &sample_projections(dim, 200, 11).unwrap(), 2.0)
            .unwrap();
        let target = gaussian_sw2_oracle(2.0, 1.0, dim).unwrap();
        assert!((sw - target).abs() < 0.08 * target, "d={dim}: {sw}");
    }
}

#[test]
fn knn_kl_tracks_analytic_gaussian_kl() {
    // KL(N(0, I_2) ‖ N(0, 4 I_2)) = d/2 (σ₀²/σ₁² − 1 + ln(σ₁²/σ₀²))
    let a = gaussian(3000, 2, 1.0, 12);
    let b = gaussian(3000, 2, 2.0, 13);
    let exact = (0.25 - 1.0 + 4f64.ln()) * 2.0 / 2.0;
    let est = knn_kl_estimate(&a, &b, 1).unwrap();
    assert!((est.value - exact).abs() < 0.1, "{} vs {exact}", est.value);
    assert_eq!(est.degenerate, 0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sliced_is_a_pseudometric(
        pts in proptest::collection::vec(-10.0f64..10.0, 3 * 2 * 5),
        seed in 0u64..1000,
    ) {
        let (a, rest) = pts.split_at(10);
        let (b, c) = rest.split_at(10);
        let m = |v: &[f64]| EmpiricalMeasure::new(v.to_vec(), 2).unwrap();
        let (a, b, c) = (m(a), m(b), m(c));
        let dirs = sample_projections(2, 16, seed).unwrap();
        let d = |x: &EmpiricalMeasure, y: &EmpiricalMeasure| sliced_wasserstein_with(x, y, &dirs, 2.0).unwrap();
        prop_assert_eq!(d(&a, &b), d(&b, &a));
        prop_assert!(d(&a, &c) <= d(&a, &b) + d(&b, &c) + 1e-9);
        prop_assert_eq!(d(&a, &a), 0.0);
    }

    #[test]
    fn translation_shifts_one_dimensional_distance(
        xs in proptest::collection::vec(-5.0f64..5.0, 1..20),
        shift in -3.0f64..3.0,
    ) {
        let ys: Vec<f64> = xs.iter().map(|x| x + shift).collect();
        let w = wasserstein_1d_unsorted(&xs, &ys, 2.0).unwrap();
        prop_assert!((w - shift.abs()).abs() < 1e-9);
    }
}
