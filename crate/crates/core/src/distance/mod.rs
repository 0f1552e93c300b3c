//! Discrepancies between empirical measures.
//!
//! | Function | Cost | Notes |
//! |----------|------|-------|
//! | [`wasserstein_1d`] | O((n+m) log) | exact, any sample sizes |
//! | [`sliced_wasserstein`] | O(L·n·(d + log n)) | Monte Carlo over `L` directions |
//! | [`hilbert_distance`] | O(n log n · d) | equal sizes, upper bound on `W_p` |
//! | [`swapping_distance`] | O(n²) per sweep | equal sizes, refines Hilbert |
//! | [`knn_kl_estimate`] | O(n (n+m) d) | brute-force neighbours |
//!
//! Every distance returns the order-`p` root, never its `p`-th power.

mod gaussian;
mod hilbert;
mod knn_kl;
mod projection;
mod sliced;
mod swapping;
mod wasserstein1d;

pub use gaussian::{gaussian_sw2_oracle, gaussian_w2_analytic};
pub use hilbert::{
    hilbert_distance, hilbert_index, hilbert_key, hilbert_matching, HilbertKey,
    DEFAULT_HILBERT_BITS,
};
pub use knn_kl::{knn_kl_estimate, KlEstimate};
pub use projection::{sample_projections, ProjectedMeasure, ProjectionSet};
pub use sliced::{
    sliced_wasserstein, sliced_wasserstein_projected, sliced_wasserstein_projected_pow,
    sliced_wasserstein_with, DistanceConfig,
};
pub use swapping::{swapping_distance, swapping_matching, SwapOutcome, DEFAULT_MAX_SWEEPS};
pub use wasserstein1d::{wasserstein_1d, wasserstein_1d_unsorted, weighted_wasserstein_1d};
