//! Multivariate Gaussian perturbation kernel.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::rng::StreamRng;

const FALLBACK_VARIANCE: f64 = 1e-6;

#[derive(Debug, Clone)]
pub(crate) struct GaussianKernel {
    dim: usize,
    /// Lower-triangular Cholesky factor, row-major.
    chol: Vec<f64>,
    log_norm: f64,
    pub(crate) degenerate: bool,
}

fn cholesky(cov: &[f64], dim: usize) -> Option<Vec<f64>> {
    let mut l = vec![0.0; dim * dim];
    for i in 0..dim {
        for j in 0..=i {
            let mut s = cov[i * dim + j];
            for k in 0..j {
                s -= l[i * dim + k] * l[j * dim + k];
            }
            if i == j {
                if !(s > 1e-300) || !s.is_finite() {
                    return None;
                }
                l[i * dim + i] = s.sqrt();
            } else {
                l[i * dim + j] = s / l[j * dim + j];
            }
        }
    }
    Some(l)
}

impl GaussianKernel {
    /// Kernel with covariance `scale × Σ_w`, the weighted covariance of
    /// `thetas`. Falls back to `1e-6 · I` when that matrix is singular.
    pub(crate) fn fit(thetas: &[Vec<f64>], weights: &[f64], scale: f64) -> Self {
        let dim = thetas[0].len();
        let mut mean = vec![0.0; dim];
        for (t, &w) in thetas.iter().zip(weights) {
            for (m, v) in mean.iter_mut().zip(t) {
                *m += w * v;
            }
        }
        let mut cov = vec![0.0; dim * dim];
        for (t, &w) in thetas.iter().zip(weights) {
            for i in 0..dim {
                for j in 0..dim {
                    cov[i * dim + j] += w * (t[i] - mean[i]) * (t[j] - mean[j]);
                }
            }
        }
        cov.iter_mut().for_each(|c| *c *= scale);
        let (chol, degenerate) = match cholesky(&cov, dim) {
            Some(l) => (l, false),
            None => {
                let mut l = vec![0.0; dim * dim];
                for i in 0..dim {
                    l[i * dim + i] = FALLBACK_VARIANCE.sqrt();
                }
                (l, true)
            }
        };
        let log_det: f64 = (0..dim).map(|i| 2.0 * chol[i * dim + i].ln()).sum();
        let log_norm = -0.5 * (dim as f64 * (2.0 * std::f64::consts::PI).ln() + log_det);
        Self {
            dim,
            chol,
            log_norm,
            degenerate,
        }
    }

    pub(crate) fn perturb(&self, center: &[f64], rng: &mut StreamRng) -> Vec<f64> {
        let z: Vec<f64> = (0..self.dim).map(|_| rng.sample(StandardNormal)).collect();
        (0..self.dim)
            .map(|i| {
                center[i]
                    + (0..=i)
                        .map(|k| self.chol[i * self.dim + k] * z[k])
                        .sum::<f64>()
            })
            .collect()
    }

    pub(crate) fn log_density(&self, x: &[f64], center: &[f64]) -> f64 {
        // solve L y = x − center by forward substitution
        let d = self.dim;
        let mut y = vec![0.0; d];
        let mut quad = 0.0;
        for i in 0..d {
            let mut s = x[i] - center[i];
            for k in 0..i {
                s -= self.chol[i * d + k] * y[k];
            }
            y[i] = s / self.chol[i * d + i];
            quad += y[i] * y[i];
        }
        self.log_norm - 0.5 * quad
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_dimensional_density() {
        let thetas = vec![vec![0.0], vec![2.0]];
        let k = GaussianKernel::fit(&thetas, &[0.5, 0.5], 2.0);
        // weighted variance 1, kernel variance 2
        let expected = -0.5 * (2.0 * std::f64::consts::PI * 2.0).ln() - 0.25;
        assert!((k.log_density(&[1.0], &[0.0]) - expected).abs() < 1e-12);
        assert!(!k.degenerate);
    }

    #[test]
    fn identical_ancestors_fall_back() {
        let thetas = vec![vec![3.0, 1.0]; 4];
        let k = GaussianKernel::fit(&thetas, &[0.25; 4], 2.0);
        assert!(k.degenerate);
        let expected =
            -0.5 * (2.0 * (2.0 * std::f64::consts::PI).ln() + 2.0 * FALLBACK_VARIANCE.ln());
        assert!((k.log_density(&[3.0, 1.0], &[3.0, 1.0]) - expected).abs() < 1e-9);
    }

    #[test]
    fn correlated_covariance_sampling() {
        let thetas = vec![
            vec![0.0, 0.0],
            vec![1.0, 1.0],
            vec![2.0, 1.5],
            vec![-1.0, -0.5],
        ];
        let k = GaussianKernel::fit(&thetas, &[0.25; 4], 2.0);
        let mut r = crate::rng::seeded(1);
        let n = 200_000;
        let mut s = [0.0; 3];
        for _ in 0..n {
            let x = k.perturb(&[0.0, 0.0], &mut r);
            s[0] += x[0] * x[0];
            s[1] += x[0] * x[1];
            s[2] += x[1] * x[1];
        }
        // weighted covariance [[1.25, 0.875], [0.875, 0.625]], doubled
        let expected = [2.5, 1.75, 1.25];
        for (got, want) in s.iter().map(|v| v / n as f64).zip(expected) {
            assert!((got - want).abs() < 0.03 * want, "{got} vs {want}");
        }
    }
}
