//! Corrupts a bundled image with Gaussian noise and restores it with both
//! denoisers.
//!
//! ```text
//! cargo run --release --example denoise_image -- [image.pgm] [sigma]
//! ```

use std::time::Instant;

use swabc::denoise::{
    nlmeans_classic, pgm_read, psnr, swabc_denoise, DenoiseParams, NlMeansParams,
};

fn main() -> swabc::Result<()> {
    let mut args = std::env::args().skip(1);
    let path = args.next().unwrap_or_else(|| {
        concat!(env!("CARGO_MANIFEST_DIR"), "/data/corpus/camera.pgm").to_string()
    });
    let sigma: f64 = args
        .next()
        .map_or(Ok(20.0), |s| s.parse())
        .expect("sigma must be a number");

    let clean = pgm_read(&path)?;
    let noisy = clean.with_gaussian_noise(sigma, 1)?;
    println!(
        "{path}: {}x{}, sigma {sigma}",
        clean.width(),
        clean.height()
    );
    println!("noisy     {:6.2} dB", psnr(&clean, &noisy)?);

    let t = Instant::now();
    let nl = nlmeans_classic(
        &noisy,
        &NlMeansParams {
            sigma,
            ..Default::default()
        },
    )?;
    println!(
        "nl-means  {:6.2} dB  ({:.1}s)",
        psnr(&clean, &nl)?,
        t.elapsed().as_secs_f64()
    );

    let t = Instant::now();
    let out = swabc_denoise(
        &noisy,
        &DenoiseParams {
            sigma,
            ..Default::default()
        },
    )?;
    println!(
        "sw-abc    {:6.2} dB  ({:.1}s, {} fallbacks, {} SW evaluations)",
        psnr(&clean, &out.image)?,
        t.elapsed().as_secs_f64(),
        out.fallback_count,
        out.sw_evaluations
    );
    Ok(())
}
