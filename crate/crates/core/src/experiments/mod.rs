//! The experiment runs behind the `swabc` binary, usable as a library.
//!
//! Each run is described by a [`RunConfig`], serializable to JSON, and writes
//! fixed-name artifacts into an output directory:
//!
//! | Command | Artifacts |
//! |---------|-----------|
//! | `distance-curve` | `curve.csv` (`sigma_sq,distance_name,value`), `run.json` |
//! | `gaussian-bench` | `bench.csv` (`method,generation,epsilon,w1_to_truth,elapsed_seconds`), `run.json`, `particles_<method>.csv` |
//! | `denoise` | `denoised.pgm`, `metrics.json` |
//! | `psnr` | none; prints the value |
//!
//! `run.json` and `metrics.json` hold the effective configuration.

mod bench;
mod curve;
mod denoise_run;

pub use bench::{
    bench_problem, gaussian_bench, write_bench_csv, BenchMethod, BenchReport, BenchRow,
    GaussianBenchConfig, MethodRun, BENCH_HEADER,
};
pub use curve::{
    curve_argmin, distance_curve, write_curve_csv, CurveDistance, CurveRow, DistanceCurveConfig,
    Grid, CURVE_HEADER,
};
pub use denoise_run::{
    denoise_files, denoise_image, format_psnr, psnr_files, DenoiseMethod, DenoiseMetrics,
    DenoiseRun, DenoiseRunConfig,
};

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::abc::write_particles_csv;
use crate::denoise::pgm_write;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PsnrConfig {
    pub a: PathBuf,
    pub b: PathBuf,
}

/// A complete, reproducible description of one command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum RunConfig {
    DistanceCurve(DistanceCurveConfig),
    GaussianBench(GaussianBenchConfig),
    Denoise(DenoiseRunConfig),
    Psnr(PsnrConfig),
}

impl RunConfig {
    pub fn from_json_file(path: impl AsRef<Path>) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }
}

/// Whether a run finished or was cut short by a budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunStatus {
    Complete,
    BudgetExhausted,
}

/// Process exit code: 0 success, 2 usage error, 3 budget exhausted with
/// partial output, 1 anything else.
pub fn exit_code(result: &Result<RunStatus>) -> i32 {
    match result {
        Ok(RunStatus::Complete) => 0,
        Ok(RunStatus::BudgetExhausted) => 3,
        Err(Error::Usage(_)) => 2,
        Err(_) => 1,
    }
}

#[derive(Serialize)]
struct Sidecar<'a, T: Serialize> {
    config: &'a RunConfig,
    #[serde(flatten)]
    extra: T,
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut f = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut f, value)?;
    writeln!(f)?;
    f.flush()?;
    Ok(())
}

fn create(path: PathBuf) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path)?))
}

/// Executes `cfg`, writing artifacts under `out` (created if missing).
/// The `psnr` command prints to `stdout` instead.
pub fn run(cfg: &RunConfig, out: &Path, stdout: &mut dyn Write) -> Result<RunStatus> {
    if !matches!(cfg, RunConfig::Psnr(_)) {
        fs::create_dir_all(out)?;
    }
    match cfg {
        RunConfig::DistanceCurve(c) => {
            let rows = distance_curve(c)?;
            let mut f = create(out.join("curve.csv"))?;
            write_curve_csv(&rows, &mut f)?;
            f.flush()?;
            #[derive(Serialize)]
            struct Extra {
                grid_step: f64,
            }
            write_json(
                &out.join("run.json"),
                &Sidecar {
                    config: cfg,
                    extra: Extra {
                        grid_step: c.grid.step(),
                    },
                },
            )?;
            Ok(RunStatus::Complete)
        }
        RunConfig::GaussianBench(c) => {
            let report = gaussian_bench(c)?;
            let mut f = create(out.join("bench.csv"))?;
            write_bench_csv(&report.rows, &mut f)?;
            f.flush()?;
            for r in &report.runs {
                if let Some(o) = &r.output {
                    let mut f = create(out.join(format!("particles_{}.csv", r.method)))?;
                    write_particles_csv(&o.populations, &mut f)?;
                    f.flush()?;
                }
            }
            #[derive(Serialize)]
            struct Extra<'a> {
                true_mean: &'a [f64],
                posterior: &'a crate::models::InverseGamma,
                methods: &'a [MethodRun],
                generations: &'a [BenchRow],
            }
            write_json(
                &out.join("run.json"),
                &Sidecar {
                    config: cfg,
                    extra: Extra {
                        true_mean: &report.true_mean,
                        posterior: &report.posterior,
                        methods: &report.runs,
                        generations: &report.rows,
                    },
                },
            )?;
            Ok(if report.budget_exhausted() {
                RunStatus::BudgetExhausted
            } else {
                RunStatus::Complete
            })
        }
        RunConfig::Denoise(c) => {
            let result = denoise_files(c)?;
            pgm_write(&result.denoised, out.join("denoised.pgm"))?;
            write_json(
                &out.join("metrics.json"),
                &Sidecar {
                    config: cfg,
                    extra: &result.metrics,
                },
            )?;
            Ok(RunStatus::Complete)
        }
        RunConfig::Psnr(c) => {
            writeln!(stdout, "{}", psnr_files(&c.a, &c.b)?)?;
            Ok(RunStatus::Complete)
        }
    }
}
