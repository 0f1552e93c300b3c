mod common;

use std::time::Instant;

use common::mean;
use swabc::denoise::{
    build_dictionary, extract_patch, phi_map, psnr, reconstruct, swabc_denoise, DenoiseParams,
    GrayImage, Pos, SwAbcDenoiser,
};

fn texture(width: usize, height: usize) -> GrayImage {
    GrayImage::from_fn(width, height, |r, c| {
        let (x, y) = (c as f64, r as f64);
        128.0 + 60.0 * (x / 5.0).sin() * (y / 7.0).cos() + 30.0 * ((x + y) / 11.0).sin()
    })
    .unwrap()
}

#[test]
fn full_dictionary_reconstruction_is_identity() {
    let img = texture(20, 14).with_gaussian_noise(15.0, 1).unwrap();
    let dict = build_dictionary(&img, img.len(), 2, 0).unwrap();
    let patches: Vec<_> = (0..img.len())
        .map(|i| {
            let p = img.pos_of(i);
            // D = I with distinct noisy patches, so φ is the identity
            assert_eq!(phi_map(p, &dict, &img, 2).unwrap(), p);
            extract_patch(&img, p, 2)
        })
        .collect();
    let out = reconstruct(20, 14, 2, |k| &patches[k].values);
    for (a, b) in out.pixels().iter().zip(img.pixels()) {
        assert!((a - b).abs() < 1e-9);
    }
}

#[test]
fn constant_image_output_within_envelope() {
    let c = 77.0;
    let img = GrayImage::filled(40, 30, c).unwrap();
    let p = DenoiseParams {
        sigma: 20.0,
        dict_size: 50,
        ..DenoiseParams::default()
    };
    let out = swabc_denoise(&img, &p).unwrap();
    let envelope = p.sigma / ((p.accepted * p.cluster_draws * p.patches_per_set) as f64).sqrt();
    assert!(out
        .image
        .pixels()
        .iter()
        .all(|&v| (v - c).abs() <= envelope));
}

#[test]
fn infinite_epsilon_recovers_window_average() {
    let img = texture(48, 40).with_gaussian_noise(10.0, 2).unwrap();
    let dict = build_dictionary(&img, 40, 3, 9).unwrap();
    let base = DenoiseParams {
        epsilon: Some(f64::INFINITY),
        sigma: 10.0,
        ..DenoiseParams::default()
    };
    let first = SwAbcDenoiser::with_dictionary(&img, &base, dict.clone()).unwrap();
    let k = (0..dict.len())
        .max_by_key(|&k| first.cluster(k).len())
        .unwrap();
    let cluster: Vec<Pos> = first.cluster(k).iter().map(|&i| img.pos_of(i)).collect();

    // E[P̂] averages P_{l + o} over l in the cluster and o in the window
    let w = base.search_window as isize;
    let mut expected = Vec::new();
    for &l in &cluster {
        for dr in -w..=w {
            for dc in -w..=w {
                let q = img.pos_of(img.index_of(Pos::new(
                    (l.row as isize + dr).rem_euclid(40) as usize,
                    (l.col as isize + dc).rem_euclid(48) as usize,
                )));
                expected.push(mean(&extract_patch(&img, q, 3).values));
            }
        }
    }
    let expected = mean(&expected);

    let estimates: Vec<f64> = (0..50)
        .map(|seed| {
            let p = DenoiseParams {
                seed,
                ..base.clone()
            };
            let den = SwAbcDenoiser::with_dictionary(&img, &p, dict.clone()).unwrap();
            let e = den.estimate(k).unwrap();
            assert_eq!(e.sources.len(), p.accepted);
            assert_eq!(e.proposals, p.accepted);
            mean(&e.patch)
        })
        .collect();
    let got = mean(&estimates);
    assert!((got - expected).abs() <= 2.0, "{got} vs {expected}");
}

#[test]
fn deterministic_across_thread_counts() {
    let img = texture(64, 48).with_gaussian_noise(20.0, 3).unwrap();
    let p = DenoiseParams {
        sigma: 20.0,
        dict_size: 200,
        seed: 4,
        ..DenoiseParams::default()
    };
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| swabc_denoise(&img, &p).unwrap())
    };
    let a = run(1);
    let b = run(4);
    assert_eq!(a, b);
    assert!(a.image.pixels().iter().all(|&v| (0.0..=255.0).contains(&v)));
    assert!(a.sw_evaluations <= p.dict_size * p.proposal_cap());
}

#[test]
fn denoiser_improves_a_noisy_texture() {
    let clean = texture(96, 96);
    let noisy = clean.with_gaussian_noise(30.0, 5).unwrap();
    let out = swabc_denoise(
        &noisy,
        &DenoiseParams {
            sigma: 30.0,
            ..Default::default()
        },
    )
    .unwrap();
    assert!(psnr(&clean, &out.image).unwrap() > psnr(&clean, &noisy).unwrap());
}

#[test]
fn full_size_image_runs_within_a_minute() {
    let noisy = texture(481, 321).with_gaussian_noise(20.0, 6).unwrap();
    let started = Instant::now();
    let out = swabc_denoise(
        &noisy,
        &DenoiseParams {
            sigma: 20.0,
            ..Default::default()
        },
    )
    .unwrap();
    let t = started.elapsed().as_secs_f64();
    println!(
        "321x481 SW-ABC denoise: {t:.1}s, {} SW evaluations",
        out.sw_evaluations
    );
    assert!(t < 60.0, "{t}s");
}
