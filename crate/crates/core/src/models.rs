//! Multivariate Gaussian scale benchmark: `y_i ~ N(m⋆, σ² I_d)` with an
//! inverse-gamma prior on `σ²` and its exact conjugate posterior.

use rand::Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::abc::{Prior, Simulator};
use crate::error::{Error, Result};
use crate::measure::EmpiricalMeasure;
use crate::rng::{self, StreamRng};

/// Inverse gamma distribution with density `∝ x^{-a-1} e^{-b/x}` on `x > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InverseGamma {
    pub shape: f64,
    pub rate: f64,
}

impl InverseGamma {
    pub fn new(shape: f64, rate: f64) -> Result<Self> {
        if !(shape > 0.0 && rate > 0.0) || !shape.is_finite() || !rate.is_finite() {
            return Err(Error::invalid(format!(
                "inverse gamma needs positive shape and rate, got ({shape}, {rate})"
            )));
        }
        Ok(Self { shape, rate })
    }

    /// `b / (a − 1)`, infinite when `a ≤ 1`.
    pub fn mean(&self) -> f64 {
        if self.shape > 1.0 {
            self.rate / (self.shape - 1.0)
        } else {
            f64::INFINITY
        }
    }

    pub fn variance(&self) -> f64 {
        if self.shape > 2.0 {
            let a = self.shape;
            self.rate * self.rate / ((a - 1.0) * (a - 1.0) * (a - 2.0))
        } else {
            f64::INFINITY
        }
    }

    pub fn mode(&self) -> f64 {
        self.rate / (self.shape + 1.0)
    }

    pub fn ln_pdf(&self, x: f64) -> f64 {
        if !(x > 0.0) {
            return f64::NEG_INFINITY;
        }
        let (a, b) = (self.shape, self.rate);
        a * b.ln() - ln_gamma(a) - (a + 1.0) * x.ln() - b / x
    }

    pub fn draw(&self, rng: &mut StreamRng) -> f64 {
        let gamma = Gamma::new(self.shape, 1.0 / self.rate).expect("validated parameters");
        loop {
            let g: f64 = gamma.sample(rng);
            if g > 0.0 {
                return 1.0 / g;
            }
        }
    }
}

/// `count` i.i.d. draws from `ig`, as reciprocals of `Gamma(a, rate b)` draws.
pub fn ig_sample(ig: &InverseGamma, count: usize, seed: u64) -> Result<Vec<f64>> {
    let ig = InverseGamma::new(ig.shape, ig.rate)?;
    let mut r = rng::seeded(seed);
    Ok((0..count).map(|_| ig.draw(&mut r)).collect())
}

impl Prior for InverseGamma {
    fn dim(&self) -> usize {
        1
    }

    fn sample(&self, rng: &mut StreamRng) -> Vec<f64> {
        vec![self.draw(rng)]
    }

    fn log_density(&self, theta: &[f64]) -> f64 {
        self.ln_pdf(theta[0])
    }
}

/// Lanczos approximation (g = 7, n = 9), accurate to ~1e-15 for `x > 0`.
pub(crate) fn ln_gamma(x: f64) -> f64 {
    const COEF: [f64; 9] = [
        0.999_999_999_999_809_9,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_1,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let t = x + 7.5;
    let mut a = COEF[0];
    for (i, c) in COEF.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + a.ln()
}

/// `N(m⋆, σ² I_d)` with unknown scale `θ = σ²` and known mean `m⋆`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussianScaleModel {
    pub dim: usize,
    pub mean: Vec<f64>,
    pub sigma_star_sq: f64,
    pub prior: InverseGamma,
}

impl GaussianScaleModel {
    pub fn new(mean: Vec<f64>, sigma_star_sq: f64, prior: InverseGamma) -> Result<Self> {
        if mean.is_empty() {
            return Err(Error::invalid("model dimension must be >= 1"));
        }
        if mean.iter().any(|m| !m.is_finite()) {
            return Err(Error::invalid("model mean must be finite"));
        }
        if !(sigma_star_sq > 0.0) || !sigma_star_sq.is_finite() {
            return Err(Error::invalid("sigma_star_sq must be positive"));
        }
        Ok(Self {
            dim: mean.len(),
            mean,
            sigma_star_sq,
            prior,
        })
    }

    /// Benchmark setup: `m⋆ ~ N(0, I_d)` drawn from `seed`, prior `IG(1, 1)`.
    pub fn benchmark(dim: usize, sigma_star_sq: f64, seed: u64) -> Result<Self> {
        let mut r = rng::stream(seed, &[0x6d65_616e]);
        let mean = (0..dim).map(|_| r.sample(StandardNormal)).collect();
        Self::new(mean, sigma_star_sq, InverseGamma::new(1.0, 1.0)?)
    }

    /// `m` i.i.d. draws from `N(m⋆, θ I_d)`.
    pub fn simulate_scale(&self, theta: f64, m: usize, seed: u64) -> Result<EmpiricalMeasure> {
        if !(theta > 0.0) || !theta.is_finite() {
            return Err(Error::invalid(format!(
                "variance must be positive, got {theta}"
            )));
        }
        if m == 0 {
            return Err(Error::invalid("need at least one simulated point"));
        }
        let sd = theta.sqrt();
        let mut r = rng::seeded(seed);
        let mut pts = Vec::with_capacity(m * self.dim);
        for _ in 0..m {
            for &mu in &self.mean {
                pts.push(mu + sd * r.sample::<f64, _>(StandardNormal));
            }
        }
        EmpiricalMeasure::new(pts, self.dim)
    }

    /// Observed dataset at the true scale.
    pub fn observe(&self, n: usize, seed: u64) -> Result<EmpiricalMeasure> {
        self.simulate_scale(self.sigma_star_sq, n, seed)
    }

    /// Conjugate posterior `IG(a + n·d/2, b + ½ Σ ‖y_i − m⋆‖²)`.
    pub fn true_posterior(&self, observed: &EmpiricalMeasure) -> Result<InverseGamma> {
        if observed.dim() != self.dim {
            return Err(Error::invalid(format!(
                "observed dimension {} does not match model dimension {}",
                observed.dim(),
                self.dim
            )));
        }
        let ss: f64 = observed
            .rows()
            .map(|y| {
                y.iter()
                    .zip(&self.mean)
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
            })
            .sum();
        let n = observed.len() as f64;
        InverseGamma::new(
            self.prior.shape + n * self.dim as f64 / 2.0,
            self.prior.rate + 0.5 * ss,
        )
    }
}

impl Simulator for GaussianScaleModel {
    fn simulate(&self, theta: &[f64], m: usize, seed: u64) -> Result<EmpiricalMeasure> {
        self.simulate_scale(theta[0], m, seed)
    }
}

/// Pooled sample variance `(1/(n·d)) Σ_i ‖y_i − ȳ‖²`.
pub fn sample_variance(data: &EmpiricalMeasure) -> f64 {
    let d = data.dim();
    let n = data.len() as f64;
    let mut mean = vec![0.0; d];
    for row in data.rows() {
        for (m, v) in mean.iter_mut().zip(row) {
            *m += v;
        }
    }
    mean.iter_mut().for_each(|m| *m /= n);
    let ss: f64 = data
        .rows()
        .map(|row| {
            row.iter()
                .zip(&mean)
                .map(|(v, m)| (v - m) * (v - m))
                .sum::<f64>()
        })
        .sum();
    ss / (n * d as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ig_mean_matches_closed_form() {
        let ig = InverseGamma::new(3.0, 2.0).unwrap();
        let draws = ig_sample(&ig, 1_000_000, 5).unwrap();
        assert!(draws.iter().all(|&x| x > 0.0));
        let mean = draws.iter().sum::<f64>() / draws.len() as f64;
        assert!((mean - 1.0).abs() < 0.01, "mean {mean}");
    }

    #[test]
    fn ig_sampling_is_reproducible() {
        let ig = InverseGamma::new(1.0, 1.0).unwrap();
        assert_eq!(
            ig_sample(&ig, 20, 9).unwrap(),
            ig_sample(&ig, 20, 9).unwrap()
        );
        assert_ne!(
            ig_sample(&ig, 20, 9).unwrap(),
            ig_sample(&ig, 20, 10).unwrap()
        );
    }

    #[test]
    fn ig_rejects_bad_parameters() {
        assert!(InverseGamma::new(0.0, 1.0).is_err());
        assert!(InverseGamma::new(1.0, -1.0).is_err());
        assert!(ig_sample(
            &InverseGamma {
                shape: -1.0,
                rate: 1.0
            },
            3,
            0
        )
        .is_err());
    }

    #[test]
    fn ln_gamma_known_values() {
        assert!(ln_gamma(1.0).abs() < 1e-13);
        assert!(ln_gamma(2.0).abs() < 1e-13);
        assert!((ln_gamma(5.0) - 24f64.ln()).abs() < 1e-12);
        assert!((ln_gamma(0.5) - std::f64::consts::PI.sqrt().ln()).abs() < 1e-12);
        assert!((ln_gamma(101.0) - 363.739_375_555_563_5).abs() < 1e-9);
    }

    #[test]
    fn ig_density_integrates_to_one() {
        let ig = InverseGamma::new(3.0, 2.0).unwrap();
        let h = 1e-4;
        let s: f64 = (1..500_000)
            .map(|k| ig.ln_pdf(k as f64 * h).exp() * h)
            .sum();
        assert!((s - 1.0).abs() < 1e-4, "{s}");
    }

    #[test]
    fn simulator_moments() {
        let model = GaussianScaleModel::benchmark(10, 4.0, 3).unwrap();
        let m = 100_000;
        let data = model.simulate_scale(4.0, m, 8).unwrap();
        for c in 0..10 {
            let col: Vec<f64> = data.rows().map(|r| r[c]).collect();
            let mean = col.iter().sum::<f64>() / m as f64;
            let var = col.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (m as f64 - 1.0);
            assert!((var - 4.0).abs() < 0.03 * 4.0, "coord {c} var {var}");
            assert!((mean - model.mean[c]).abs() < 3.0 * 2.0 / (m as f64).sqrt());
        }
    }

    #[test]
    fn single_point_shape_and_bad_scale() {
        let model = GaussianScaleModel::benchmark(3, 4.0, 0).unwrap();
        let one = model.simulate_scale(1.0, 1, 0).unwrap();
        assert_eq!((one.len(), one.dim()), (1, 3));
        assert!(model.simulate_scale(0.0, 5, 0).is_err());
        assert!(model.simulate_scale(-2.0, 5, 0).is_err());
    }

    #[test]
    fn posterior_hand_computation() {
        let model =
            GaussianScaleModel::new(vec![0.0], 4.0, InverseGamma::new(1.0, 1.0).unwrap()).unwrap();
        let y = EmpiricalMeasure::from_scalars(&[1.0, -1.0]).unwrap();
        assert_eq!(
            model.true_posterior(&y).unwrap(),
            InverseGamma::new(2.0, 2.0).unwrap()
        );
        let bad = EmpiricalMeasure::from_rows(&[[1.0, 2.0]]).unwrap();
        assert!(model.true_posterior(&bad).is_err());
    }

    #[test]
    fn posterior_mean_concentrates_on_truth() {
        let model = GaussianScaleModel::benchmark(2, 4.0, 17).unwrap();
        let y = model.observe(2000, 18).unwrap();
        let post = model.true_posterior(&y).unwrap();
        assert!((post.mean() - 4.0).abs() < 0.05 * 4.0, "{}", post.mean());
    }

    /// Grid quadrature of likelihood × prior on (0, 50] as an independent
    /// check of the conjugate update.
    #[test]
    fn conjugacy_matches_quadrature() {
        let model = GaussianScaleModel::benchmark(1, 4.0, 21).unwrap();
        let y = model.observe(30, 22).unwrap();
        let post = model.true_posterior(&y).unwrap();
        let m0 = model.mean[0];
        let ss: f64 = y.as_slice().iter().map(|v| (v - m0) * (v - m0)).sum();
        let n = y.len() as f64;
        let log_unnorm = |s2: f64| -0.5 * n * s2.ln() - ss / (2.0 * s2) + model.prior.ln_pdf(s2);
        let grid = 100_000;
        let h = 50.0 / grid as f64;
        let xs: Vec<f64> = (1..=grid).map(|k| k as f64 * h).collect();
        let logs: Vec<f64> = xs.iter().map(|&x| log_unnorm(x)).collect();
        let top = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let w: Vec<f64> = logs.iter().map(|l| (l - top).exp()).collect();
        let z: f64 = w.iter().sum();
        let mean: f64 = xs.iter().zip(&w).map(|(x, w)| x * w).sum::<f64>() / z;
        let var: f64 = xs
            .iter()
            .zip(&w)
            .map(|(x, w)| (x - mean).powi(2) * w)
            .sum::<f64>()
            / z;
        let rel = |a: f64, b: f64| ((a - b) / b).abs();
        assert!(rel(mean, post.mean()) < 5e-4, "{mean} vs {}", post.mean());
        assert!(
            rel(var, post.variance()) < 5e-4,
            "{var} vs {}",
            post.variance()
        );
    }

    #[test]
    fn pooled_variance() {
        let y = EmpiricalMeasure::from_rows(&[[1.0, 0.0], [-1.0, 0.0], [0.0, 2.0], [0.0, -2.0]])
            .unwrap();
        assert!((sample_variance(&y) - 10.0 / 8.0).abs() < 1e-12);
    }
}
