//! Likelihood-free inference with optimal-transport discrepancies.
//!
//! * [`distance`]: exact 1D Wasserstein, Sliced-Wasserstein, Hilbert and
//!   swapping matchings, and a k-NN KL estimator.
//! * [`abc`]: rejection and sequential Monte Carlo ABC, generic over prior,
//!   simulator, and discrepancy.
//! * [`models`]: the Gaussian scale benchmark with its conjugate posterior.
//! * [`denoise`]: NL-means and the Sliced-Wasserstein ABC patch denoiser, PGM
//!   I/O and PSNR.
//! * [`experiments`]: the runs behind the `swabc` binary.

pub mod abc;
pub mod denoise;
pub mod distance;
pub mod error;
pub mod experiments;
pub mod measure;
pub mod models;
pub mod rng;

pub use error::{Error, Result};
pub use measure::EmpiricalMeasure;
