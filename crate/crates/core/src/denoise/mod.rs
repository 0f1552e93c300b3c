//! Patch-based denoising of gray-level images.
//!
//! Images extend to `Z²` by periodicity, so every patch exists. Both
//! denoisers estimate one patch per pixel (directly for NL-means, through
//! the nearest dictionary entry for SW-ABC) and share [`reconstruct`].

mod image;
mod nlmeans;
mod patch;
mod pgm;
mod swabc;

pub use image::{psnr, GrayImage, Pos};
pub use nlmeans::{nlmeans_classic, NlMeansParams};
pub use patch::{build_dictionary, extract_patch, phi_map, Patch, PatchDictionary};
pub use pgm::{pgm_decode, pgm_encode, pgm_read, pgm_write};
pub use swabc::{swabc_denoise, DenoiseParams, EntryEstimate, SwAbcDenoiser, SwAbcOutput};

use rayon::prelude::*;

/// `û(x) = Σ_{‖k−x‖∞ ≤ r} P̂_k(x − k) / (2r+1)²`, where `patch_of(k)` returns
/// the flattened estimate attached to linear pixel index `k`.
pub fn reconstruct<'p, F>(width: usize, height: usize, radius: usize, patch_of: F) -> GrayImage
where
    F: Fn(usize) -> &'p [f64] + Sync,
{
    let shape = GrayImage::filled(width, height, 0.0).expect("nonempty shape");
    let r = radius as isize;
    let side = 2 * r + 1;
    let norm = (side * side) as f64;
    let pixels: Vec<f64> = (0..width * height)
        .into_par_iter()
        .map(|x| {
            let p = shape.pos_of(x);
            let mut s = 0.0;
            for or in -r..=r {
                for oc in -r..=r {
                    // k = x − o, so x − k = o
                    let k = shape.index_of(shape.wrap(p.row as isize - or, p.col as isize - oc));
                    s += patch_of(k)[((or + r) * side + oc + r) as usize];
                }
            }
            s / norm
        })
        .collect();
    GrayImage::new(width, height, pixels).expect("finite reconstruction")
}
