use std::path::PathBuf;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::denoise::{
    nlmeans_classic, pgm_read, psnr, swabc_denoise, DenoiseParams, GrayImage, NlMeansParams,
};
use crate::error::{Error, Result};
use crate::rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DenoiseMethod {
    Nlmeans,
    Swabc,
}

impl std::str::FromStr for DenoiseMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "nlmeans" => Ok(Self::Nlmeans),
            "swabc" => Ok(Self::Swabc),
            _ => Err(Error::Usage(format!(
                "unknown method '{s}'; valid names: nlmeans, swabc"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DenoiseRunConfig {
    pub input: PathBuf,
    /// Clean reference for PSNR; with `add_noise` the input itself is used
    /// when absent.
    pub clean: Option<PathBuf>,
    /// Corrupt the input with `N(0, σ²)` noise before denoising.
    pub add_noise: bool,
    pub report_psnr: bool,
    pub method: DenoiseMethod,
    pub sigma: f64,
    /// NL-means filtering parameter; `None` means `sigma`.
    pub h: Option<f64>,
    /// SW-ABC parameters; `sigma` and `seed` are taken from this struct.
    pub params: DenoiseParams,
    pub seed: u64,
}

impl Default for DenoiseRunConfig {
    fn default() -> Self {
        Self {
            input: PathBuf::new(),
            clean: None,
            add_noise: false,
            report_psnr: false,
            method: DenoiseMethod::Swabc,
            sigma: 20.0,
            h: None,
            params: DenoiseParams::default(),
            seed: 0,
        }
    }
}

impl DenoiseRunConfig {
    pub fn effective_params(&self) -> DenoiseParams {
        DenoiseParams {
            sigma: self.sigma,
            seed: rng::derive_seed(self.seed, &[0x6465_6e6f]),
            ..self.params.clone()
        }
    }

    pub fn nlmeans_params(&self) -> NlMeansParams {
        NlMeansParams {
            radius: self.params.radius,
            search_window: self.params.search_window,
            sigma: self.sigma,
            h: self.h,
        }
    }

    pub fn noise_seed(&self) -> u64 {
        rng::derive_seed(self.seed, &[0x6e6f_6973])
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DenoiseMetrics {
    pub psnr_noisy: Option<f64>,
    pub psnr_denoised: Option<f64>,
    pub wall_clock_seconds: f64,
    pub method: DenoiseMethod,
    pub params: serde_json::Value,
    pub seed: u64,
    pub fallback_count: usize,
    pub sw_evaluations: usize,
}

#[derive(Debug, Clone)]
pub struct DenoiseRun {
    pub noisy: GrayImage,
    /// Rounded and clamped, as written to `denoised.pgm`.
    pub denoised: GrayImage,
    pub metrics: DenoiseMetrics,
}

/// Denoises an in-memory image, scoring against `clean` when given.
pub fn denoise_image(
    noisy: &GrayImage,
    clean: Option<&GrayImage>,
    cfg: &DenoiseRunConfig,
) -> Result<DenoiseRun> {
    if !(cfg.sigma > 0.0) || !cfg.sigma.is_finite() {
        return Err(Error::invalid("sigma must be finite and > 0"));
    }
    let started = Instant::now();
    let (out, fallback_count, sw_evaluations, params) = match cfg.method {
        DenoiseMethod::Nlmeans => {
            let p = cfg.nlmeans_params();
            (nlmeans_classic(noisy, &p)?, 0, 0, serde_json::to_value(&p)?)
        }
        DenoiseMethod::Swabc => {
            let p = cfg.effective_params();
            let r = swabc_denoise(noisy, &p)?;
            (
                r.image,
                r.fallback_count,
                r.sw_evaluations,
                serde_json::to_value(&p)?,
            )
        }
    };
    let wall_clock_seconds = started.elapsed().as_secs_f64();
    let denoised = out.quantized();
    let (psnr_noisy, psnr_denoised) = match clean {
        Some(c) => (Some(psnr(c, noisy)?), Some(psnr(c, &denoised)?)),
        None => (None, None),
    };
    Ok(DenoiseRun {
        noisy: noisy.clone(),
        denoised,
        metrics: DenoiseMetrics {
            psnr_noisy,
            psnr_denoised,
            wall_clock_seconds,
            method: cfg.method,
            params,
            seed: cfg.seed,
            fallback_count,
            sw_evaluations,
        },
    })
}

/// Reads the input (and reference), optionally adds noise, and denoises.
pub fn denoise_files(cfg: &DenoiseRunConfig) -> Result<DenoiseRun> {
    let input = pgm_read(&cfg.input)?;
    let clean = match &cfg.clean {
        Some(p) => Some(pgm_read(p)?),
        None if cfg.add_noise => Some(input.clone()),
        None => None,
    };
    if cfg.report_psnr && clean.is_none() {
        return Err(Error::Usage(
            "--report-psnr needs --clean or --add-noise".into(),
        ));
    }
    let noisy = if cfg.add_noise {
        input.with_gaussian_noise(cfg.sigma, cfg.noise_seed())?
    } else {
        input
    };
    denoise_image(&noisy, clean.as_ref(), cfg)
}

/// PSNR between two PGM files, formatted with two decimals or `inf`.
pub fn psnr_files(a: &std::path::Path, b: &std::path::Path) -> Result<String> {
    let (a, b) = (pgm_read(a)?, pgm_read(b)?);
    if !a.same_shape(&b) {
        return Err(Error::Usage(format!(
            "image sizes differ: {}x{} vs {}x{}",
            a.width(),
            a.height(),
            b.width(),
            b.height()
        )));
    }
    Ok(format_psnr(psnr(&a, &b)?))
}

pub fn format_psnr(db: f64) -> String {
    if db.is_infinite() {
        "inf".to_string()
    } else {
        // values that round to zero print without a sign
        let s = format!("{db:.2}");
        if s == "-0.00" {
            "0.00".to_string()
        } else {
            s
        }
    }
}
