//! Likelihood-free posterior samplers.
//!
//! Both samplers are generic over a [`Prior`], a [`Simulator`] and a
//! [`Discrepancy`]; Sliced-Wasserstein ABC, Wasserstein-ABC with Hilbert or
//! swapping matchings, KL-ABC and summary-statistic ABC differ only in the
//! discrepancy plugged in.
//!
//! Proposals are evaluated in parallel. Proposal `k` of generation `t` draws
//! from an RNG stream derived from `(seed, t, k)` and outcomes are consumed
//! in index order, so a run is bit-reproducible whatever the thread count
//! (unless a wall-clock budget fires).

mod batch;
mod config;
mod discrepancy;
mod kernel;
mod output;
mod rejection;
mod smc;
mod traits;

pub use config::{AbcConfig, StopReason};
pub use discrepancy::{
    HilbertDiscrepancy, KlDiscrepancy, SlicedWassersteinDiscrepancy, SummaryDiscrepancy,
    SwappingDiscrepancy,
};
pub use output::{posterior_w1, posterior_w1_weighted, write_particles_csv};
pub use rejection::{rejection_abc, RejectionOutput};
pub use smc::{smc_abc, Particle, Population, SmcOutput};
pub use traits::{Discrepancy, Prior, Simulator};
