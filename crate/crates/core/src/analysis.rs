//! Statistical evaluation of ciphertexts: entropy, adjacent-pixel
//! correlation, NPCR/UACI, and drivers for the diffusion, key-sensitivity and
//! noise-robustness experiments.
//!
//! UACI normalises by 255, the largest intensity difference, so an ideal
//! random pair scores about 33.4635%.

use std::collections::BTreeMap;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::Value;

use crate::cipher::{
    decrypt_image_with_schedule, decrypt_padded, encrypt_image_with_schedule, EncryptOptions,
    PlaneImage, BLOCK,
};
use crate::error::{Error, Result};
use crate::keyschedule::{derive_schedule, Key256};

pub const MAX_INTENSITY: f64 = 255.0;

pub fn histogram(x: &[u8]) -> [u64; 256] {
    let mut h = [0u64; 256];
    for &v in x {
        h[v as usize] += 1;
    }
    h
}

fn entropy_of_histogram(h: &[u64; 256]) -> f64 {
    let total: u64 = h.iter().sum();
    let t = total as f64;
    -h.iter()
        .filter(|&&n| n > 0)
        .map(|&n| {
            let p = n as f64 / t;
            p * p.log2()
        })
        .sum::<f64>()
}

/// Shannon entropy in bits per symbol over the 256-bin histogram.
pub fn entropy(x: &[u8]) -> Result<f64> {
    if x.is_empty() {
        return Err(Error::EmptyPlane);
    }
    Ok(entropy_of_histogram(&histogram(x)))
}

/// Entropy of every complete 256x256 tile of a `width x height` plane.
pub fn block_entropies(plane: &[u8], width: usize, height: usize) -> Result<Vec<f64>> {
    if plane.len() != width * height {
        return Err(Error::SizeMismatch(plane.len(), width * height));
    }
    let mut out = Vec::new();
    for ty in 0..height / BLOCK {
        for tx in 0..width / BLOCK {
            let mut h = [0u64; 256];
            for r in 0..BLOCK {
                let start = (ty * BLOCK + r) * width + tx * BLOCK;
                for &v in &plane[start..start + BLOCK] {
                    h[v as usize] += 1;
                }
            }
            out.push(entropy_of_histogram(&h));
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Horizontal,
    Vertical,
    /// Down-right neighbour, offset (1, 1).
    Diagonal,
}

impl Direction {
    pub const ALL: [Direction; 3] = [
        Direction::Horizontal,
        Direction::Vertical,
        Direction::Diagonal,
    ];

    fn offset(self) -> (usize, usize) {
        match self {
            Direction::Horizontal => (0, 1),
            Direction::Vertical => (1, 0),
            Direction::Diagonal => (1, 1),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ApcMode {
    AllPairs,
    /// `pairs` positions drawn uniformly without replacement.
    Sampled {
        pairs: usize,
        seed: u64,
    },
}

/// Pearson correlation between each pixel and its neighbour in `dir`.
pub fn apc(x: &[u8], width: usize, height: usize, dir: Direction, mode: ApcMode) -> Result<f64> {
    if x.len() != width * height {
        return Err(Error::SizeMismatch(x.len(), width * height));
    }
    let (dr, dc) = dir.offset();
    let (rows, cols) = (height.saturating_sub(dr), width.saturating_sub(dc));
    let available = rows * cols;
    let at = |k: usize| {
        let (r, c) = (k / cols, k % cols);
        (x[r * width + c] as f64, x[(r + dr) * width + c + dc] as f64)
    };
    let pairs: Vec<(f64, f64)> = match mode {
        ApcMode::AllPairs => (0..available).map(at).collect(),
        ApcMode::Sampled { pairs, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            index::sample(&mut rng, available, pairs.min(available))
                .into_iter()
                .map(at)
                .collect()
        }
    };
    if pairs.len() < 2 {
        return Err(Error::TooFewPairs(pairs.len()));
    }
    let n = pairs.len() as f64;
    let (mx, my) = pairs
        .iter()
        .fold((0.0, 0.0), |(a, b), (u, v)| (a + u, b + v));
    let (mx, my) = (mx / n, my / n);
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (u, v) in &pairs {
        let (du, dv) = (u - mx, v - my);
        sxy += du * dv;
        sxx += du * du;
        syy += dv * dv;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::ZeroVariance);
    }
    Ok(sxy / (sxx.sqrt() * syy.sqrt()))
}

fn check_pair(a: &[u8], b: &[u8]) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::SizeMismatch(a.len(), b.len()));
    }
    if a.is_empty() {
        return Err(Error::EmptyPlane);
    }
    Ok(())
}

/// Percentage of positions where the planes differ.
pub fn npcr(a: &[u8], b: &[u8]) -> Result<f64> {
    check_pair(a, b)?;
    let changed = a.iter().zip(b).filter(|(x, y)| x != y).count();
    Ok(100.0 * changed as f64 / a.len() as f64)
}

/// Mean absolute difference as a percentage of 255.
pub fn uaci(a: &[u8], b: &[u8]) -> Result<f64> {
    check_pair(a, b)?;
    let sum: u64 = a.iter().zip(b).map(|(&x, &y)| x.abs_diff(y) as u64).sum();
    Ok(100.0 * sum as f64 / (MAX_INTENSITY * a.len() as f64))
}

/// `|a - b|` per pixel.
pub fn difference_plane(a: &[u8], b: &[u8]) -> Result<Vec<u8>> {
    check_pair(a, b)?;
    Ok(a.iter().zip(b).map(|(&x, &y)| x.abs_diff(y)).collect())
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalysisReport {
    pub entropy: f64,
    pub apc_h: Option<f64>,
    pub apc_v: Option<f64>,
    pub apc_d: Option<f64>,
    pub npcr: Option<f64>,
    pub uaci: Option<f64>,
    pub histogram: Vec<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub per_channel: Option<Vec<AnalysisReport>>,
    #[serde(flatten)]
    pub metadata: BTreeMap<String, Value>,
}

impl AnalysisReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn apc_or_none(x: &[u8], w: usize, h: usize, dir: Direction) -> Option<f64> {
    apc(x, w, h, dir, ApcMode::AllPairs).ok()
}

fn plane_report(x: &[u8], w: usize, h: usize, pair: Option<&[u8]>) -> Result<AnalysisReport> {
    Ok(AnalysisReport {
        entropy: entropy(x)?,
        apc_h: apc_or_none(x, w, h, Direction::Horizontal),
        apc_v: apc_or_none(x, w, h, Direction::Vertical),
        apc_d: apc_or_none(x, w, h, Direction::Diagonal),
        npcr: pair.map(|p| npcr(x, p)).transpose()?,
        uaci: pair.map(|p| uaci(x, p)).transpose()?,
        histogram: histogram(x).to_vec(),
        per_channel: None,
        metadata: BTreeMap::new(),
    })
}

/// Full report for an image. APC is `None` where a plane has zero variance.
///
/// For color images the top-level entropy and histogram pool all channels,
/// APC is the channel mean, and NPCR/UACI cover all channels together; the
/// per-channel breakdown is attached.
pub fn analyze(img: &PlaneImage, pair: Option<&PlaneImage>) -> Result<AnalysisReport> {
    if let Some(p) = pair {
        if (p.width(), p.height(), p.channels()) != (img.width(), img.height(), img.channels()) {
            return Err(Error::InvalidArgument(format!(
                "pair is {}x{}x{}, image is {}x{}x{}",
                p.width(),
                p.height(),
                p.channels(),
                img.width(),
                img.height(),
                img.channels()
            )));
        }
    }
    let (w, h) = (img.width() as usize, img.height() as usize);
    let mut meta = BTreeMap::new();
    meta.insert("width".into(), Value::from(w));
    meta.insert("height".into(), Value::from(h));
    meta.insert("channels".into(), Value::from(img.channels()));
    if img.channels() == 1 {
        let mut r = plane_report(img.plane(0), w, h, pair.map(|p| p.plane(0)))?;
        r.metadata = meta;
        return Ok(r);
    }
    let per: Vec<AnalysisReport> = (0..img.channels())
        .map(|ch| plane_report(img.plane(ch), w, h, pair.map(|p| p.plane(ch))))
        .collect::<Result<_>>()?;
    let mean = |f: fn(&AnalysisReport) -> Option<f64>| -> Option<f64> {
        let v: Option<Vec<f64>> = per.iter().map(f).collect();
        v.map(|v| v.iter().sum::<f64>() / v.len() as f64)
    };
    let pooled: Vec<u8> = img.planes().concat();
    let pooled_pair = pair.map(|p| p.planes().concat());
    Ok(AnalysisReport {
        entropy: entropy(&pooled)?,
        apc_h: mean(|r| r.apc_h),
        apc_v: mean(|r| r.apc_v),
        apc_d: mean(|r| r.apc_d),
        npcr: pooled_pair
            .as_deref()
            .map(|p| npcr(&pooled, p))
            .transpose()?,
        uaci: pooled_pair
            .as_deref()
            .map(|p| uaci(&pooled, p))
            .transpose()?,
        histogram: histogram(&pooled).to_vec(),
        per_channel: Some(per),
        metadata: meta,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct DiffusionReport {
    pub npcr: f64,
    pub uaci: f64,
    pub pixel: (usize, usize),
    pub delta: u8,
    pub key_fingerprint: String,
    /// `|C1 - C2|` over the padded ciphertext planes.
    #[serde(skip)]
    pub difference: PlaneImage,
}

/// Encrypts `img` and a copy with `delta` added (mod 256) to channel 0 at
/// `pixel`, noise off, and compares the ciphertexts.
pub fn diffusion_experiment(
    img: &PlaneImage,
    key: &Key256,
    pixel: (usize, usize),
    delta: u8,
) -> Result<DiffusionReport> {
    let (r, c) = pixel;
    if r >= img.height() as usize || c >= img.width() as usize {
        return Err(Error::InvalidArgument(format!(
            "pixel ({r},{c}) outside {}x{} image",
            img.width(),
            img.height()
        )));
    }
    let mut modified = img.clone();
    let w = img.width() as usize;
    let v = &mut modified.plane_mut(0)[r * w + c];
    *v = v.wrapping_add(delta);

    let schedule = derive_schedule(key);
    let opts = EncryptOptions::deterministic();
    let c1 = encrypt_image_with_schedule(img, &schedule, &opts)?;
    let c2 = encrypt_image_with_schedule(&modified, &schedule, &opts)?;
    let (a, b) = (c1.planes().concat(), c2.planes().concat());
    let diff_planes = c1
        .planes()
        .iter()
        .zip(c2.planes())
        .map(|(x, y)| difference_plane(x, y))
        .collect::<Result<_>>()?;
    Ok(DiffusionReport {
        npcr: npcr(&a, &b)?,
        uaci: uaci(&a, &b)?,
        pixel,
        delta,
        key_fingerprint: key.fingerprint(),
        difference: PlaneImage::new(c1.padded_width(), c1.padded_height(), diff_planes)?,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct KeySensitivityReport {
    pub bit: usize,
    /// Ciphertexts of the same plaintext under the key and the flipped key.
    pub npcr: f64,
    pub uaci: f64,
    /// Entropy of `C(K)` decrypted under the flipped key.
    pub wrong_key_entropy: f64,
    /// Lowest per-tile entropy of that wrong-key decryption (padded planes).
    pub wrong_key_min_block_entropy: f64,
    pub key_fingerprint: String,
    pub flipped_key_fingerprint: String,
}

pub fn key_sensitivity_experiment(
    img: &PlaneImage,
    key: &Key256,
    bit: usize,
) -> Result<KeySensitivityReport> {
    let flipped = key.flip_bit(bit)?;
    let (s1, s2) = (derive_schedule(key), derive_schedule(&flipped));
    let opts = EncryptOptions::deterministic();
    let c1 = encrypt_image_with_schedule(img, &s1, &opts)?;
    let c2 = encrypt_image_with_schedule(img, &s2, &opts)?;
    let (a, b) = (c1.planes().concat(), c2.planes().concat());

    let wrong = decrypt_image_with_schedule(&c1, &s2)?;
    let wrong_padded = decrypt_padded(&c1, &s2)?;
    let (pw, ph) = (c1.padded_width() as usize, c1.padded_height() as usize);
    let mut min_block = f64::INFINITY;
    for p in &wrong_padded {
        for e in block_entropies(p, pw, ph)? {
            min_block = min_block.min(e);
        }
    }
    Ok(KeySensitivityReport {
        bit,
        npcr: npcr(&a, &b)?,
        uaci: uaci(&a, &b)?,
        wrong_key_entropy: entropy(&wrong.planes().concat())?,
        wrong_key_min_block_entropy: min_block,
        key_fingerprint: key.fingerprint(),
        flipped_key_fingerprint: flipped.fingerprint(),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct NoiseRobustnessReport {
    pub ratio: f64,
    pub seed: u64,
    pub total_bytes: usize,
    pub corrupted_bytes: usize,
    pub differing_pixels: usize,
    pub differing_fraction: f64,
    /// `256 * corrupted_bytes`, capped at the payload size.
    pub bound: usize,
    pub key_fingerprint: String,
    /// `|clean - corrupted|` over the padded decrypted planes.
    #[serde(skip)]
    pub difference: PlaneImage,
}

/// Encrypts with noise off, replaces `ceil(ratio * T)` randomly chosen
/// ciphertext bytes with different values, and compares the decryption with
/// the clean one over the padded planes (`T` = total ciphertext bytes).
pub fn noise_robustness_experiment(
    img: &PlaneImage,
    key: &Key256,
    ratio: f64,
    seed: u64,
) -> Result<NoiseRobustnessReport> {
    if !(0.0..=1.0).contains(&ratio) {
        return Err(Error::InvalidArgument(format!(
            "ratio {ratio} outside [0, 1]"
        )));
    }
    let schedule = derive_schedule(key);
    let ct = encrypt_image_with_schedule(img, &schedule, &EncryptOptions::deterministic())?;
    let plane_len = ct.planes()[0].len();
    let total = plane_len * ct.channels();
    let k = ((ratio * total as f64).ceil() as usize).min(total);

    let mut noisy = ct.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for pos in index::sample(&mut rng, total, k) {
        let flip: u8 = rng.random_range(1..=255);
        noisy.plane_mut(pos / plane_len)[pos % plane_len] ^= flip;
    }

    let clean = decrypt_padded(&ct, &schedule)?;
    let dirty = decrypt_padded(&noisy, &schedule)?;
    let (a, b) = (clean.concat(), dirty.concat());
    let differing = a.iter().zip(&b).filter(|(x, y)| x != y).count();
    let diff_planes = clean
        .iter()
        .zip(&dirty)
        .map(|(x, y)| difference_plane(x, y))
        .collect::<Result<_>>()?;
    Ok(NoiseRobustnessReport {
        ratio,
        seed,
        total_bytes: total,
        corrupted_bytes: k,
        differing_pixels: differing,
        differing_fraction: differing as f64 / total as f64,
        bound: (BLOCK * k).min(total),
        key_fingerprint: key.fingerprint(),
        difference: PlaneImage::new(ct.padded_width(), ct.padded_height(), diff_planes)?,
    })
}
