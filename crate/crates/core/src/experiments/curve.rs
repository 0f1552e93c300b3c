use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::distance::{
    gaussian_sw2_oracle, gaussian_w2_analytic, hilbert_distance, knn_kl_estimate,
    sample_projections, sliced_wasserstein_with, swapping_distance, DEFAULT_HILBERT_BITS,
    DEFAULT_MAX_SWEEPS,
};
use crate::error::{Error, Result};
use crate::measure::EmpiricalMeasure;
use crate::rng;

/// Columns of `curve.csv`.
pub const CURVE_HEADER: &str = "sigma_sq,distance_name,value";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CurveDistance {
    SlicedWasserstein,
    Hilbert,
    Swapping,
    KnnKl,
    AnalyticW2,
    AnalyticSw2,
}

impl CurveDistance {
    pub const ALL: [CurveDistance; 6] = [
        CurveDistance::SlicedWasserstein,
        CurveDistance::Hilbert,
        CurveDistance::Swapping,
        CurveDistance::KnnKl,
        CurveDistance::AnalyticW2,
        CurveDistance::AnalyticSw2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CurveDistance::SlicedWasserstein => "sliced-wasserstein",
            CurveDistance::Hilbert => "hilbert",
            CurveDistance::Swapping => "swapping",
            CurveDistance::KnnKl => "knn-kl",
            CurveDistance::AnalyticW2 => "analytic-w2",
            CurveDistance::AnalyticSw2 => "analytic-sw2",
        }
    }

    pub fn valid_names() -> String {
        Self::ALL.map(Self::name).join(", ")
    }
}

impl fmt::Display for CurveDistance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CurveDistance {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|d| d.name() == s)
            .ok_or_else(|| {
                Error::Usage(format!(
                    "unknown distance '{s}'; valid names: {}",
                    Self::valid_names()
                ))
            })
    }
}

/// `count` equispaced values in `[start, end]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub start: f64,
    pub end: f64,
    pub count: usize,
}

impl Default for Grid {
    fn default() -> Self {
        Self {
            start: 0.1,
            end: 9.0,
            count: 100,
        }
    }
}

impl Grid {
    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let step = (self.end - self.start) / (self.count - 1) as f64;
        (0..self.count)
            .map(|k| self.start + step * k as f64)
            .collect()
    }

    pub fn step(&self) -> f64 {
        if self.count > 1 {
            (self.end - self.start) / (self.count - 1) as f64
        } else {
            0.0
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DistanceCurveConfig {
    pub dim: usize,
    /// Points per measure, observed and synthetic alike.
    pub n: usize,
    pub sigma_star_sq: f64,
    pub grid: Grid,
    /// Names from [`CurveDistance`]; empty means all.
    pub distances: Vec<String>,
    pub num_projections: usize,
    pub order_p: f64,
    /// Neighbour rank of the KL estimator.
    pub knn_k: usize,
    /// Reuse one standard-normal sample across the grid, scaled by `σ`.
    pub common_random_numbers: bool,
    pub seed: u64,
}

impl Default for DistanceCurveConfig {
    fn default() -> Self {
        Self {
            dim: 2,
            n: 1000,
            sigma_star_sq: 4.0,
            grid: Grid::default(),
            distances: Vec::new(),
            num_projections: 100,
            order_p: 2.0,
            knn_k: 1,
            common_random_numbers: true,
            seed: 0,
        }
    }
}

impl DistanceCurveConfig {
    pub fn selected(&self) -> Result<Vec<CurveDistance>> {
        if self.distances.is_empty() {
            return Ok(CurveDistance::ALL.to_vec());
        }
        self.distances.iter().map(|s| s.parse()).collect()
    }

    fn validate(&self) -> Result<()> {
        if self.dim == 0 || self.n < 2 {
            return Err(Error::invalid("distance curve needs dim >= 1 and n >= 2"));
        }
        if self.grid.count == 0 || !(self.grid.start > 0.0) || !(self.grid.end >= self.grid.start) {
            return Err(Error::invalid(
                "grid must be nonempty with 0 < start <= end",
            ));
        }
        if !(self.sigma_star_sq > 0.0) {
            return Err(Error::invalid("sigma_star_sq must be > 0"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveRow {
    pub sigma_sq: f64,
    pub distance: String,
    pub value: f64,
}

fn gaussian_sample(
    dim: usize,
    n: usize,
    scale: f64,
    seed: u64,
    coords: &[u64],
) -> Result<EmpiricalMeasure> {
    let mut r = rng::stream(seed, coords);
    let pts = (0..n * dim)
        .map(|_| scale * r.sample::<f64, _>(StandardNormal))
        .collect();
    EmpiricalMeasure::new(pts, dim)
}

/// Distances between one observed sample of `N(0, σ⋆² I_d)` and synthetic
/// samples of `N(0, σ² I_d)` over the grid. Rows are ordered by grid value,
/// then by distance in the requested order.
pub fn distance_curve(cfg: &DistanceCurveConfig) -> Result<Vec<CurveRow>> {
    cfg.validate()?;
    let selected = cfg.selected()?;
    let observed = gaussian_sample(cfg.dim, cfg.n, cfg.sigma_star_sq.sqrt(), cfg.seed, &[1])?;
    let base = gaussian_sample(cfg.dim, cfg.n, 1.0, cfg.seed, &[2])?;
    let projections = sample_projections(
        cfg.dim,
        cfg.num_projections,
        rng::derive_seed(cfg.seed, &[3]),
    )?;
    let sigma_star = cfg.sigma_star_sq.sqrt();

    let grid = cfg.grid.values();
    let per_point: Vec<Result<Vec<CurveRow>>> = grid
        .par_iter()
        .enumerate()
        .map(|(g, &s2)| {
            let sigma = s2.sqrt();
            let synthetic = if cfg.common_random_numbers {
                EmpiricalMeasure::new(base.as_slice().iter().map(|x| sigma * x).collect(), cfg.dim)?
            } else {
                gaussian_sample(cfg.dim, cfg.n, sigma, cfg.seed, &[4, g as u64])?
            };
            selected
                .iter()
                .map(|&d| {
                    let value = match d {
                        CurveDistance::SlicedWasserstein => sliced_wasserstein_with(
                            &observed,
                            &synthetic,
                            &projections,
                            cfg.order_p,
                        )?,
                        CurveDistance::Hilbert => hilbert_distance(
                            &observed,
                            &synthetic,
                            cfg.order_p,
                            DEFAULT_HILBERT_BITS,
                        )?,
                        CurveDistance::Swapping => swapping_distance(
                            &observed,
                            &synthetic,
                            cfg.order_p,
                            DEFAULT_MAX_SWEEPS,
                        )?,
                        CurveDistance::KnnKl => {
                            knn_kl_estimate(&observed, &synthetic, cfg.knn_k)?.value
                        }
                        CurveDistance::AnalyticW2 => {
                            gaussian_w2_analytic(sigma_star, sigma, cfg.dim)?
                        }
                        CurveDistance::AnalyticSw2 => {
                            gaussian_sw2_oracle(sigma_star, sigma, cfg.dim)?
                        }
                    };
                    Ok(CurveRow {
                        sigma_sq: s2,
                        distance: d.name().to_string(),
                        value,
                    })
                })
                .collect()
        })
        .collect();
    let mut rows = Vec::with_capacity(grid.len() * selected.len());
    for r in per_point {
        rows.extend(r?);
    }
    Ok(rows)
}

pub fn write_curve_csv<W: Write>(rows: &[CurveRow], mut out: W) -> Result<()> {
    writeln!(out, "{CURVE_HEADER}")?;
    for r in rows {
        writeln!(out, "{},{},{}", r.sigma_sq, r.distance, r.value)?;
    }
    Ok(())
}

/// Grid value minimizing `name`'s column; the first one on ties.
pub fn curve_argmin(rows: &[CurveRow], name: &str) -> Option<f64> {
    rows.iter()
        .filter(|r| r.distance == name)
        .fold(None, |best: Option<&CurveRow>, r| match best {
            Some(b) if b.value <= r.value => Some(b),
            _ => Some(r),
        })
        .map(|r| r.sigma_sq)
}
