use std::fmt;
use std::io::Write;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::abc::{
    posterior_w1_weighted, smc_abc, AbcConfig, Discrepancy, HilbertDiscrepancy, KlDiscrepancy,
    SlicedWassersteinDiscrepancy, SmcOutput, StopReason, SummaryDiscrepancy, SwappingDiscrepancy,
};
use crate::error::{Error, Result};
use crate::measure::EmpiricalMeasure;
use crate::models::{ig_sample, GaussianScaleModel, InverseGamma};
use crate::rng;

/// Columns of `bench.csv`.
pub const BENCH_HEADER: &str = "method,generation,epsilon,w1_to_truth,elapsed_seconds";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BenchMethod {
    Sw,
    Hilbert,
    Swapping,
    Kl,
    EuclideanSummary,
}

impl BenchMethod {
    pub const ALL: [BenchMethod; 5] = [
        BenchMethod::Sw,
        BenchMethod::Hilbert,
        BenchMethod::Swapping,
        BenchMethod::Kl,
        BenchMethod::EuclideanSummary,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BenchMethod::Sw => "sw",
            BenchMethod::Hilbert => "hilbert",
            BenchMethod::Swapping => "swapping",
            BenchMethod::Kl => "kl",
            BenchMethod::EuclideanSummary => "euclidean-summary",
        }
    }

    pub fn valid_names() -> String {
        Self::ALL.map(Self::name).join(", ")
    }
}

impl fmt::Display for BenchMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BenchMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| {
                Error::Usage(format!(
                    "unknown method '{s}'; valid names: {}",
                    Self::valid_names()
                ))
            })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GaussianBenchConfig {
    pub dim: usize,
    /// Observed and synthetic sample size.
    pub n: usize,
    pub num_particles: usize,
    pub sigma_star_sq: f64,
    /// Names from [`BenchMethod`]; empty means all.
    pub methods: Vec<String>,
    /// Wall-clock budget per method.
    pub time_budget_seconds: Option<f64>,
    pub max_generations: Option<usize>,
    pub max_total_simulations: Option<u64>,
    pub quantile_alpha: f64,
    pub num_projections: usize,
    pub order_p: f64,
    /// Draws from the analytic posterior used as the W₁ reference.
    pub reference_draws: usize,
    pub seed: u64,
}

impl Default for GaussianBenchConfig {
    fn default() -> Self {
        Self {
            dim: 2,
            n: 100,
            num_particles: 1000,
            sigma_star_sq: 4.0,
            methods: Vec::new(),
            time_budget_seconds: Some(300.0),
            max_generations: Some(20),
            max_total_simulations: None,
            quantile_alpha: 0.5,
            num_projections: 100,
            order_p: 2.0,
            reference_draws: 100_000,
            seed: 0,
        }
    }
}

impl GaussianBenchConfig {
    pub fn selected(&self) -> Result<Vec<BenchMethod>> {
        if self.methods.is_empty() {
            return Ok(BenchMethod::ALL.to_vec());
        }
        self.methods.iter().map(|s| s.parse()).collect()
    }

    /// Sampler settings for `method`; each method gets its own seed.
    pub fn abc_config(&self, method: BenchMethod) -> AbcConfig {
        AbcConfig {
            num_particles: self.num_particles,
            quantile_alpha: self.quantile_alpha,
            synthetic_size: Some(self.n),
            max_generations: self.max_generations,
            max_total_simulations: self.max_total_simulations,
            time_budget_seconds: self.time_budget_seconds,
            seed: self.method_seed(method),
            ..AbcConfig::default()
        }
    }

    pub fn method_seed(&self, method: BenchMethod) -> u64 {
        rng::derive_seed(self.seed, &[0x6265_6e63, method as u64])
    }
}

/// One generation of one method.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub method: BenchMethod,
    pub generation: usize,
    pub epsilon: f64,
    pub w1_to_truth: f64,
    pub elapsed_seconds: f64,
    pub simulations: u64,
    pub proposals: u64,
    pub acceptance_rate: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MethodRun {
    pub method: BenchMethod,
    pub seed: u64,
    pub stop: StopReason,
    pub total_simulations: u64,
    #[serde(skip)]
    pub output: Option<SmcOutput>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BenchReport {
    pub config: GaussianBenchConfig,
    pub true_mean: Vec<f64>,
    pub posterior: InverseGamma,
    pub rows: Vec<BenchRow>,
    pub runs: Vec<MethodRun>,
}

impl BenchReport {
    pub fn budget_exhausted(&self) -> bool {
        self.runs.iter().any(|r| r.stop.is_budget_exhausted())
    }

    /// `w1_to_truth` of the last generation of `method`.
    pub fn final_w1(&self, method: BenchMethod) -> Option<f64> {
        self.rows
            .iter()
            .rev()
            .find(|r| r.method == method)
            .map(|r| r.w1_to_truth)
    }
}

/// Observed data, model and analytic posterior for a benchmark seed.
pub fn bench_problem(
    cfg: &GaussianBenchConfig,
) -> Result<(GaussianScaleModel, EmpiricalMeasure, InverseGamma)> {
    let model = GaussianScaleModel::benchmark(cfg.dim, cfg.sigma_star_sq, cfg.seed)?;
    let observed = model.observe(cfg.n, rng::derive_seed(cfg.seed, &[0x6f6273]))?;
    let posterior = model.true_posterior(&observed)?;
    Ok((model, observed, posterior))
}

/// Runs SMC-ABC with every selected discrepancy on the Gaussian scale
/// problem and scores each generation against the analytic posterior.
pub fn gaussian_bench(cfg: &GaussianBenchConfig) -> Result<BenchReport> {
    let methods = cfg.selected()?;
    if cfg.reference_draws == 0 {
        return Err(Error::invalid("reference_draws must be >= 1"));
    }
    let (model, observed, posterior) = bench_problem(cfg)?;
    let reference = ig_sample(
        &posterior,
        cfg.reference_draws,
        rng::derive_seed(cfg.seed, &[0x726566]),
    )?;

    let mut rows = Vec::new();
    let mut runs = Vec::new();
    for method in methods {
        let abc = cfg.abc_config(method);
        let out = run_method(method, cfg, &model, &observed, &abc)?;
        for pop in &out.populations {
            rows.push(BenchRow {
                method,
                generation: pop.generation,
                epsilon: pop.epsilon,
                w1_to_truth: posterior_w1_weighted(&pop.thetas(0), &pop.weights(), &reference)?,
                elapsed_seconds: pop.elapsed_seconds,
                simulations: pop.simulations,
                proposals: pop.proposals,
                acceptance_rate: pop.acceptance_rate,
            });
        }
        runs.push(MethodRun {
            method,
            seed: abc.seed,
            stop: out.stop,
            total_simulations: out.total_simulations,
            output: Some(out),
        });
    }
    Ok(BenchReport {
        config: cfg.clone(),
        true_mean: model.mean.clone(),
        posterior,
        rows,
        runs,
    })
}

fn run_method(
    method: BenchMethod,
    cfg: &GaussianBenchConfig,
    model: &GaussianScaleModel,
    observed: &EmpiricalMeasure,
    abc: &AbcConfig,
) -> Result<SmcOutput> {
    let prior = &model.prior;
    let go = |d: &dyn Discrepancy| smc_abc(prior, model, observed, d, abc);
    match method {
        BenchMethod::Sw => go(&SlicedWassersteinDiscrepancy::new(
            cfg.dim,
            cfg.num_projections,
            cfg.order_p,
            rng::derive_seed(abc.seed, &[0x7072_6f6a]),
        )?),
        BenchMethod::Hilbert => go(&HilbertDiscrepancy {
            order_p: cfg.order_p,
            ..Default::default()
        }),
        BenchMethod::Swapping => go(&SwappingDiscrepancy {
            order_p: cfg.order_p,
            ..Default::default()
        }),
        BenchMethod::Kl => go(&KlDiscrepancy::default()),
        BenchMethod::EuclideanSummary => {
            // mean squared deviation from the known mean: sufficient for θ
            let mean = model.mean.clone();
            let summary = move |z: &EmpiricalMeasure| {
                let ss: f64 = z
                    .rows()
                    .map(|y| {
                        y.iter()
                            .zip(&mean)
                            .map(|(a, b)| (a - b) * (a - b))
                            .sum::<f64>()
                    })
                    .sum();
                vec![ss / (z.len() * z.dim()) as f64]
            };
            go(&SummaryDiscrepancy::new(summary))
        }
    }
}

pub fn write_bench_csv<W: Write>(rows: &[BenchRow], mut out: W) -> Result<()> {
    writeln!(out, "{BENCH_HEADER}")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{}",
            r.method, r.generation, r.epsilon, r.w1_to_truth, r.elapsed_seconds
        )?;
    }
    Ok(())
}
