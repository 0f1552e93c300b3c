//! Classical NL-means: per-patch weighted averages over a search window.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::patch::{sq_distance, PatchTable};
use super::{reconstruct, GrayImage};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct NlMeansParams {
    pub radius: usize,
    pub search_window: usize,
    pub sigma: f64,
    /// Filtering parameter of the weight kernel; `None` means `sigma`.
    pub h: Option<f64>,
}

impl Default for NlMeansParams {
    fn default() -> Self {
        Self {
            radius: 3,
            search_window: 10,
            sigma: 20.0,
            h: None,
        }
    }
}

impl NlMeansParams {
    pub fn h(&self) -> f64 {
        self.h.unwrap_or(self.sigma)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sigma > 0.0) || !self.sigma.is_finite() {
            return Err(Error::invalid("sigma must be finite and > 0"));
        }
        if !(self.h() > 0.0) || !self.h().is_finite() {
            return Err(Error::invalid("h must be finite and > 0"));
        }
        Ok(())
    }
}

/// Restores every patch as `Σ_i w_ij P_i / Σ_i w_ij` over the search window
/// around `j`, `w_ij = exp(−‖P_i − P_j‖² / (2h²))`, then averages the
/// `(2r+1)²` restored patches covering each pixel. Output is clamped to
/// `[0, 255]`.
pub fn nlmeans_classic(v: &GrayImage, params: &NlMeansParams) -> Result<GrayImage> {
    params.validate()?;
    let table = PatchTable::new(v, params.radius);
    let dim = table.len;
    let w = params.search_window as isize;
    let inv = 1.0 / (2.0 * params.h() * params.h());
    let mut restored = vec![0.0; v.len() * dim];
    restored
        .par_chunks_mut(dim)
        .enumerate()
        .for_each(|(j, out)| {
            let pj = table.get(j);
            let c = v.pos_of(j);
            let mut total = 0.0;
            for dr in -w..=w {
                for dc in -w..=w {
                    let i = v.index_of(v.wrap(c.row as isize + dr, c.col as isize + dc));
                    let pi = table.get(i);
                    let wt = (-sq_distance(pi, pj) * inv).exp();
                    if wt > 0.0 {
                        total += wt;
                        for (o, &x) in out.iter_mut().zip(pi) {
                            *o += wt * x;
                        }
                    }
                }
            }
            // the self-weight is 1, so total >= 1
            out.iter_mut().for_each(|o| *o /= total);
        });
    Ok(reconstruct(v.width(), v.height(), params.radius, |j| {
        &restored[j * dim..(j + 1) * dim]
    })
    .clamped())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::denoise::psnr;

    #[test]
    fn constant_image_is_fixed() {
        let img = GrayImage::filled(12, 9, 42.0).unwrap();
        let out = nlmeans_classic(&img, &NlMeansParams::default()).unwrap();
        assert!(out.pixels().iter().all(|&p| (p - 42.0).abs() < 1e-9));
    }

    #[test]
    fn small_h_returns_input() {
        let img = GrayImage::from_fn(16, 16, |r, c| ((r * 37 + c * 11) % 256) as f64).unwrap();
        let p = NlMeansParams {
            h: Some(1e-3),
            ..NlMeansParams::default()
        };
        let out = nlmeans_classic(&img, &p).unwrap();
        for (a, b) in out.pixels().iter().zip(img.pixels()) {
            assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn checkerboard_improves() {
        let clean = GrayImage::from_fn(64, 64, |r, c| {
            if (r / 8 + c / 8) % 2 == 0 {
                60.0
            } else {
                190.0
            }
        })
        .unwrap();
        let noisy = clean.with_gaussian_noise(20.0, 3).unwrap();
        let out = nlmeans_classic(
            &noisy,
            &NlMeansParams {
                sigma: 20.0,
                ..Default::default()
            },
        )
        .unwrap();
        let before = psnr(&clean, &noisy).unwrap();
        let after = psnr(&clean, &out).unwrap();
        assert!(after > before, "{after} <= {before}");
    }

    #[test]
    fn rejects_nonpositive_sigma() {
        let img = GrayImage::filled(4, 4, 0.0).unwrap();
        for s in [0.0, -1.0, f64::NAN] {
            let p = NlMeansParams {
                sigma: s,
                ..Default::default()
            };
            assert!(nlmeans_classic(&img, &p).is_err());
        }
    }
}
