//! Synthetic plaintexts shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;
use std::path::Path;

use lsic::{Key256, PlaneImage};
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_key(rng: &mut impl RngCore) -> Key256 {
    let mut k = [0u8; 32];
    rng.fill_bytes(&mut k);
    Key256::from_bytes(k)
}

pub fn random_plane(rng: &mut impl RngCore, n: usize) -> Vec<u8> {
    let mut v = vec![0u8; n];
    rng.fill_bytes(&mut v);
    v
}

pub fn random_image(rng: &mut impl RngCore, w: u32, h: u32, channels: usize) -> PlaneImage {
    let n = w as usize * h as usize;
    let planes = (0..channels).map(|_| random_plane(rng, n)).collect();
    PlaneImage::new(w, h, planes).unwrap()
}

/// `P(r, c) = (r + c) mod 256`.
pub fn ramp(w: u32, h: u32) -> PlaneImage {
    gray_from_fn(w, h, |r, c| ((r + c) & 0xFF) as u8)
}

pub fn gray_from_fn(w: u32, h: u32, f: impl Fn(usize, usize) -> u8) -> PlaneImage {
    let (wu, hu) = (w as usize, h as usize);
    let data = (0..hu)
        .flat_map(|r| (0..wu).map(move |c| (r, c)))
        .map(|(r, c)| f(r, c))
        .collect();
    PlaneImage::gray(w, h, data).unwrap()
}

fn box_blur(src: &[f64], w: usize, h: usize, radius: usize) -> Vec<f64> {
    let mut out = vec![0.0; src.len()];
    for r in 0..h {
        for c in 0..w {
            let (r0, r1) = (r.saturating_sub(radius), (r + radius).min(h - 1));
            let (c0, c1) = (c.saturating_sub(radius), (c + radius).min(w - 1));
            let mut s = 0.0;
            for y in r0..=r1 {
                s += src[y * w + c0..=y * w + c1].iter().sum::<f64>();
            }
            out[r * w + c] = s / ((r1 - r0 + 1) * (c1 - c0 + 1)) as f64;
        }
    }
    out
}

/// Smooth, strongly correlated images standing in for photographs.
pub fn natural_like(w: u32, h: u32) -> Vec<(&'static str, PlaneImage)> {
    let (wu, hu) = (w as usize, h as usize);
    let mut r = rng(0x5EED);
    let white: Vec<f64> = (0..wu * hu).map(|_| r.random::<f64>()).collect();
    let clouds = box_blur(&box_blur(&white, wu, hu, 6), wu, hu, 6);
    let (lo, hi) = clouds
        .iter()
        .fold((f64::MAX, f64::MIN), |(a, b), &v| (a.min(v), b.max(v)));
    let cx = wu as f64 / 2.0;
    let cy = hu as f64 / 2.0;
    vec![
        ("ramp", ramp(w, h)),
        ("flat", gray_from_fn(w, h, |_, _| 128)),
        (
            "radial",
            gray_from_fn(w, h, |r, c| {
                let d = ((r as f64 - cy).powi(2) + (c as f64 - cx).powi(2)).sqrt();
                (255.0 * (1.0 - d / (cx.hypot(cy)))).clamp(0.0, 255.0) as u8
            }),
        ),
        (
            "waves",
            gray_from_fn(w, h, |r, c| {
                let v = (2.0 * PI * c as f64 / 37.0).sin() + (2.0 * PI * r as f64 / 53.0).cos();
                (127.5 + 63.0 * v) as u8
            }),
        ),
        (
            "clouds",
            gray_from_fn(w, h, |row, col| {
                (255.0 * (clouds[row * wu + col] - lo) / (hi - lo)) as u8
            }),
        ),
        // sparse dark strokes on a flat background, like a scanned drawing
        (
            "strokes",
            gray_from_fn(w, h, |r, c| {
                if (r * 7 + c * 3) % 97 < 2 || (r + 2 * c) % 131 == 0 {
                    30
                } else {
                    230
                }
            }),
        ),
    ]
}

/// Extra grayscale images from `$LSIC_TEST_IMAGES`, if set.
pub fn local_images() -> Vec<(String, PlaneImage)> {
    let Some(dir) = std::env::var_os("LSIC_TEST_IMAGES") else {
        return Vec::new();
    };
    let mut out = Vec::new();
    let Ok(entries) = std::fs::read_dir(Path::new(&dir)) else {
        return out;
    };
    for e in entries.flatten() {
        let p = e.path();
        if matches!(p.extension().and_then(|x| x.to_str()), Some("pgm" | "ppm")) {
            if let Ok(img) = lsic::imageio::load_image(&p) {
                out.push((p.file_name().unwrap().to_string_lossy().into_owned(), img));
            }
        }
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}
