//! NL-means with the patch posterior replaced by a sliced-Wasserstein ABC
//! posterior over source positions.

use rand::seq::index;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::patch::{build_dictionary, PatchDictionary, PatchTable};
use super::{reconstruct, GrayImage, Pos};
use crate::distance::{sample_projections, sliced_wasserstein_projected_pow, ProjectionSet};
use crate::error::{Error, Result};
use crate::rng;

const STREAM_DICTIONARY: u64 = 1;
const STREAM_PROJECTIONS: u64 = 2;
const STREAM_ENTRY: u64 = 3;

/// Parameters of the SW-ABC denoiser.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DenoiseParams {
    pub radius: usize,
    /// Half-width of the square prior support around each anchor.
    pub search_window: usize,
    pub dict_size: usize,
    /// Accepted candidates per dictionary entry (`T`).
    pub accepted: usize,
    /// Cluster positions drawn per dictionary entry (`S`).
    pub cluster_draws: usize,
    /// Patches per observed and per synthetic set (`m`).
    pub patches_per_set: usize,
    /// `None` means `(2r+1)²`.
    pub epsilon: Option<f64>,
    pub sigma: f64,
    pub num_projections: usize,
    pub sw_order: f64,
    /// Compare `SW_p^p` to `ε` instead of `SW_p`.
    pub threshold_on_power: bool,
    /// Proposals per entry, as a multiple of `accepted`.
    pub proposal_cap_factor: usize,
    pub seed: u64,
}

impl Default for DenoiseParams {
    fn default() -> Self {
        Self {
            radius: 3,
            search_window: 10,
            dict_size: 1000,
            accepted: 10,
            cluster_draws: 10,
            patches_per_set: 10,
            epsilon: None,
            sigma: 20.0,
            num_projections: 100,
            sw_order: 2.0,
            threshold_on_power: false,
            proposal_cap_factor: 50,
            seed: 0,
        }
    }
}

impl DenoiseParams {
    pub fn epsilon(&self) -> f64 {
        self.epsilon
            .unwrap_or(((2 * self.radius + 1) * (2 * self.radius + 1)) as f64)
    }

    pub fn proposal_cap(&self) -> usize {
        self.proposal_cap_factor * self.accepted
    }

    pub fn validate(&self) -> Result<()> {
        let counts = [
            ("dict_size", self.dict_size),
            ("accepted", self.accepted),
            ("cluster_draws", self.cluster_draws),
            ("patches_per_set", self.patches_per_set),
            ("num_projections", self.num_projections),
            ("proposal_cap_factor", self.proposal_cap_factor),
        ];
        for (name, v) in counts {
            if v == 0 {
                return Err(Error::invalid(format!("{name} must be >= 1")));
            }
        }
        if !(self.epsilon() > 0.0) {
            return Err(Error::invalid("epsilon must be > 0"));
        }
        if !(self.sigma > 0.0) || !self.sigma.is_finite() {
            return Err(Error::invalid("sigma must be finite and > 0"));
        }
        if !(self.sw_order >= 1.0) || !self.sw_order.is_finite() {
            return Err(Error::invalid("sw_order must be finite and >= 1"));
        }
        Ok(())
    }
}

/// Posterior patch estimate for one dictionary entry.
#[derive(Debug, Clone, PartialEq)]
pub struct EntryEstimate {
    pub patch: Vec<f64>,
    /// Accepted source positions; the anchor alone after a fallback.
    pub sources: Vec<Pos>,
    pub proposals: usize,
    pub fallback: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SwAbcOutput {
    /// Clamped to `[0, 255]`.
    pub image: GrayImage,
    pub fallback_count: usize,
    pub sw_evaluations: usize,
    /// Dictionary entries with a nonempty cluster.
    pub active_entries: usize,
}

/// Dictionary, nearest-patch map and projections for one noisy image.
pub struct SwAbcDenoiser<'a> {
    image: &'a GrayImage,
    params: DenoiseParams,
    table: PatchTable,
    dictionary: PatchDictionary,
    phi: Vec<usize>,
    clusters: Vec<Vec<usize>>,
    projections: ProjectionSet,
}

impl<'a> SwAbcDenoiser<'a> {
    pub fn new(image: &'a GrayImage, params: &DenoiseParams) -> Result<Self> {
        let dictionary = build_dictionary(
            image,
            params.dict_size,
            params.radius,
            rng::derive_seed(params.seed, &[STREAM_DICTIONARY]),
        )?;
        Self::with_dictionary(image, params, dictionary)
    }

    /// Uses a caller-supplied dictionary, whose patches must have the
    /// parameters' radius.
    pub fn with_dictionary(
        image: &'a GrayImage,
        params: &DenoiseParams,
        dictionary: PatchDictionary,
    ) -> Result<Self> {
        params.validate()?;
        if dictionary.is_empty() {
            return Err(Error::invalid("dictionary is empty"));
        }
        if dictionary.patches.iter().any(|p| p.radius != params.radius) {
            return Err(Error::invalid(
                "dictionary patch radius does not match params",
            ));
        }
        let table = PatchTable::new(image, params.radius);
        let phi = dictionary.assign_all(&table, image.len());
        let mut clusters = vec![Vec::new(); dictionary.len()];
        for (i, &k) in phi.iter().enumerate() {
            clusters[k].push(i);
        }
        let projections = sample_projections(
            table.len,
            params.num_projections,
            rng::derive_seed(params.seed, &[STREAM_PROJECTIONS]),
        )?;
        Ok(Self {
            image,
            params: params.clone(),
            table,
            dictionary,
            phi,
            clusters,
            projections,
        })
    }

    pub fn dictionary(&self) -> &PatchDictionary {
        &self.dictionary
    }

    /// Dictionary index of `φ(i)` for every pixel, in linear order.
    pub fn phi(&self) -> &[usize] {
        &self.phi
    }

    /// `φ⁻¹(D_k)` as linear pixel indices, increasing.
    pub fn cluster(&self, k: usize) -> &[usize] {
        &self.clusters[k]
    }

    fn patch_at(&self, p: Pos) -> &[f64] {
        self.table.get(self.image.index_of(p))
    }

    fn shifted(&self, base: Pos, by: (isize, isize)) -> Pos {
        self.image
            .wrap(base.row as isize + by.0, base.col as isize + by.1)
    }

    /// ABC posterior estimate for dictionary entry `k`; `None` when its
    /// cluster is empty.
    pub fn estimate(&self, k: usize) -> Option<EntryEstimate> {
        let cluster = &self.clusters[k];
        if cluster.is_empty() {
            return None;
        }
        let prm = &self.params;
        let anchor = self.dictionary.positions[k];
        let dim = self.table.len;
        let mut r = rng::stream(prm.seed, &[STREAM_ENTRY, k as u64]);

        let n_obs = prm.patches_per_set.min(cluster.len());
        let mut observed = Vec::with_capacity(n_obs * dim);
        for s in index::sample(&mut r, cluster.len(), n_obs) {
            observed.extend_from_slice(self.table.get(cluster[s]));
        }
        let observed = self.projections.project_flat(&observed);

        let w = prm.search_window as i64;
        let eps = prm.epsilon();
        let mut sources = Vec::with_capacity(prm.accepted);
        let mut proposals = 0;
        let mut synthetic = vec![0.0; prm.patches_per_set * dim];
        while sources.len() < prm.accepted && proposals < prm.proposal_cap() {
            proposals += 1;
            let cand = self.shifted(
                anchor,
                (
                    r.random_range(-w..=w) as isize,
                    r.random_range(-w..=w) as isize,
                ),
            );
            let source = self.patch_at(cand);
            for row in synthetic.chunks_exact_mut(dim) {
                for (y, &x) in row.iter_mut().zip(source) {
                    *y = x + prm.sigma * r.sample::<f64, _>(StandardNormal);
                }
            }
            let projected = self.projections.project_flat(&synthetic);
            let pow = sliced_wasserstein_projected_pow(&observed, &projected, prm.sw_order);
            let stat = if prm.threshold_on_power {
                pow
            } else {
                pow.powf(1.0 / prm.sw_order)
            };
            if stat <= eps {
                sources.push(cand);
            }
        }
        let fallback = sources.is_empty();
        if fallback {
            sources.push(anchor);
        }

        let mut patch = vec![0.0; dim];
        let draws: Vec<Pos> = (0..prm.cluster_draws)
            .map(|_| self.image.pos_of(cluster[r.random_range(0..cluster.len())]))
            .collect();
        for &i in &sources {
            for &l in &draws {
                let offset = (
                    l.row as isize - anchor.row as isize,
                    l.col as isize - anchor.col as isize,
                );
                for (acc, &v) in patch.iter_mut().zip(self.patch_at(self.shifted(i, offset))) {
                    *acc += v;
                }
            }
        }
        let norm = (sources.len() * draws.len()) as f64;
        patch.iter_mut().for_each(|v| *v /= norm);
        Some(EntryEstimate {
            patch,
            sources,
            proposals,
            fallback,
        })
    }

    pub fn run(&self) -> SwAbcOutput {
        let estimates: Vec<Option<EntryEstimate>> = (0..self.dictionary.len())
            .into_par_iter()
            .map(|k| self.estimate(k))
            .collect();
        let empty: Vec<f64> = Vec::new();
        let patches: Vec<&[f64]> = estimates
            .iter()
            .map(|e| e.as_ref().map_or(&empty[..], |e| &e.patch[..]))
            .collect();
        let image = reconstruct(
            self.image.width(),
            self.image.height(),
            self.params.radius,
            |x| patches[self.phi[x]],
        )
        .clamped();
        let active: Vec<&EntryEstimate> = estimates.iter().flatten().collect();
        SwAbcOutput {
            image,
            fallback_count: active.iter().filter(|e| e.fallback).count(),
            sw_evaluations: active.iter().map(|e| e.proposals).sum(),
            active_entries: active.len(),
        }
    }
}

/// Denoises `v` with the SW-ABC patch posterior.
pub fn swabc_denoise(v: &GrayImage, params: &DenoiseParams) -> Result<SwAbcOutput> {
    Ok(SwAbcDenoiser::new(v, params)?.run())
}
