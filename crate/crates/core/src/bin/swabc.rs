//! Command-line front end; see `swabc --help`.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use swabc::experiments::{
    exit_code, run, DenoiseMethod, DenoiseRunConfig, DistanceCurveConfig, GaussianBenchConfig,
    PsnrConfig, RunConfig,
};
use swabc::{Error, Result};

/// Sliced-Wasserstein ABC experiments and denoiser.
///
/// Exit codes: 0 success, 2 usage error, 3 budget exhausted (partial output
/// written), 1 other failure. SWABC_THREADS caps the worker threads.
#[derive(Parser)]
#[command(version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// JSON run configuration; flags given here override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, default_value = "out", global = true)]
    out: PathBuf,
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Distances between N(0, 4 I_d) data and N(0, σ² I_d) over a σ² grid.
    /// Writes curve.csv with columns sigma_sq,distance_name,value.
    DistanceCurve {
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        grid_start: Option<f64>,
        #[arg(long)]
        grid_end: Option<f64>,
        #[arg(long)]
        grid_count: Option<usize>,
        /// Comma-separated: sliced-wasserstein, hilbert, swapping, knn-kl,
        /// analytic-w2, analytic-sw2.
        #[arg(long, value_delimiter = ',')]
        distances: Option<Vec<String>>,
        #[arg(long)]
        num_projections: Option<usize>,
        /// Draw fresh synthetic noise at every grid point.
        #[arg(long)]
        independent_draws: bool,
        #[command(flatten)]
        common: Common,
    },
    /// SMC-ABC on the Gaussian scale model against the analytic posterior.
    /// Writes bench.csv with columns
    /// method,generation,epsilon,w1_to_truth,elapsed_seconds.
    GaussianBench {
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        particles: Option<usize>,
        /// Comma-separated: sw, hilbert, swapping, kl, euclidean-summary.
        #[arg(long, value_delimiter = ',')]
        methods: Option<Vec<String>>,
        /// Seconds per method.
        #[arg(long)]
        time_budget: Option<f64>,
        #[arg(long)]
        max_generations: Option<usize>,
        #[arg(long)]
        max_simulations: Option<u64>,
        #[arg(long)]
        reference_draws: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Denoises a binary PGM; writes denoised.pgm and metrics.json.
    Denoise {
        input: Option<PathBuf>,
        #[arg(long)]
        sigma: Option<f64>,
        /// nlmeans or swabc.
        #[arg(long)]
        method: Option<String>,
        /// Corrupt the input with seeded Gaussian noise of level sigma first.
        #[arg(long)]
        add_noise: bool,
        /// Clean reference image for PSNR.
        #[arg(long)]
        clean: Option<PathBuf>,
        /// Fail unless a clean reference is available.
        #[arg(long)]
        report_psnr: bool,
        /// NL-means filtering parameter (default: sigma).
        #[arg(long)]
        h: Option<f64>,
        #[arg(long)]
        radius: Option<usize>,
        #[arg(long)]
        dict_size: Option<usize>,
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long)]
        num_projections: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Prints the PSNR between two PGM images (two decimals, or "inf").
    Psnr { a: PathBuf, b: PathBuf },
}

fn set<T>(slot: &mut T, v: Option<T>) {
    if let Some(v) = v {
        *slot = v;
    }
}

fn load(common: Option<&Common>) -> Result<Option<RunConfig>> {
    match common.and_then(|c| c.config.as_ref()) {
        Some(p) => RunConfig::from_json_file(p).map(Some),
        None => Ok(None),
    }
}

fn mismatch(name: &str) -> Error {
    Error::Usage(format!("--config file does not describe a {name} run"))
}

fn build(cmd: Command) -> Result<(RunConfig, PathBuf)> {
    match cmd {
        Command::DistanceCurve {
            dim,
            n,
            grid_start,
            grid_end,
            grid_count,
            distances,
            num_projections,
            independent_draws,
            common,
        } => {
            let mut c = match load(Some(&common))? {
                Some(RunConfig::DistanceCurve(c)) => c,
                Some(_) => return Err(mismatch("distance-curve")),
                None => DistanceCurveConfig::default(),
            };
            set(&mut c.dim, dim);
            set(&mut c.n, n);
            set(&mut c.grid.start, grid_start);
            set(&mut c.grid.end, grid_end);
            set(&mut c.grid.count, grid_count);
            set(&mut c.distances, distances);
            set(&mut c.num_projections, num_projections);
            set(&mut c.seed, common.seed);
            if independent_draws {
                c.common_random_numbers = false;
            }
            c.selected()?;
            Ok((RunConfig::DistanceCurve(c), common.out))
        }
        Command::GaussianBench {
            dim,
            n,
            particles,
            methods,
            time_budget,
            max_generations,
            max_simulations,
            reference_draws,
            common,
        } => {
            let mut c = match load(Some(&common))? {
                Some(RunConfig::GaussianBench(c)) => c,
                Some(_) => return Err(mismatch("gaussian-bench")),
                None => GaussianBenchConfig::default(),
            };
            set(&mut c.dim, dim);
            set(&mut c.n, n);
            set(&mut c.num_particles, particles);
            set(&mut c.methods, methods);
            set(&mut c.time_budget_seconds, time_budget.map(Some));
            set(&mut c.max_generations, max_generations.map(Some));
            set(&mut c.max_total_simulations, max_simulations.map(Some));
            set(&mut c.reference_draws, reference_draws);
            set(&mut c.seed, common.seed);
            c.selected()?;
            Ok((RunConfig::GaussianBench(c), common.out))
        }
        Command::Denoise {
            input,
            sigma,
            method,
            add_noise,
            clean,
            report_psnr,
            h,
            radius,
            dict_size,
            epsilon,
            num_projections,
            common,
        } => {
            let mut c = match load(Some(&common))? {
                Some(RunConfig::Denoise(c)) => c,
                Some(_) => return Err(mismatch("denoise")),
                None => DenoiseRunConfig::default(),
            };
            set(&mut c.input, input);
            if c.input.as_os_str().is_empty() {
                return Err(Error::Usage("denoise needs an input PGM".into()));
            }
            set(&mut c.sigma, sigma);
            set(
                &mut c.method,
                method.map(|m| m.parse::<DenoiseMethod>()).transpose()?,
            );
            c.add_noise |= add_noise;
            c.report_psnr |= report_psnr;
            set(&mut c.clean, clean.map(Some));
            set(&mut c.h, h.map(Some));
            set(&mut c.params.radius, radius);
            set(&mut c.params.dict_size, dict_size);
            set(&mut c.params.epsilon, epsilon.map(Some));
            set(&mut c.params.num_projections, num_projections);
            set(&mut c.seed, common.seed);
            Ok((RunConfig::Denoise(c), common.out))
        }
        Command::Psnr { a, b } => Ok((RunConfig::Psnr(PsnrConfig { a, b }), PathBuf::new())),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Ok(v) = std::env::var("SWABC_THREADS") {
        match v.parse::<usize>() {
            Ok(n) if n > 0 => {
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global();
            }
            _ => {
                eprintln!("error: SWABC_THREADS must be a positive integer, got '{v}'");
                return ExitCode::from(2);
            }
        }
    }
    let result = build(cli.command).and_then(|(cfg, out)| run(&cfg, &out, &mut std::io::stdout()));
    if let Err(e) = &result {
        eprintln!("error: {e}");
    }
    ExitCode::from(exit_code(&result) as u8)
}
