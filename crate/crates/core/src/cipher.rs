//! Block encryption and decryption, LSB noise embedding, and image tiling.
//!
//! A block is a 256x256 byte plane. Encryption runs eight rounds of
//! whitening, a row or column S-box (row on even rounds, column on odd ones)
//! and the Latin square P-box, followed by a final whitening with the ninth
//! square. Images are zero-padded to multiples of 256 in both directions and
//! every tile of every channel is encrypted independently under one schedule.

use rand::TryRngCore;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::keyschedule::{derive_schedule, prng_next, Key256, KeySchedule, SCHEDULE_SQUARES};
use crate::primitives::{
    lscs_decrypt, lscs_encrypt, lsp_decrypt, lsp_encrypt, lsrs_decrypt, lsrs_encrypt,
    whiten_decrypt, whiten_encrypt, SymbolBlock,
};

pub const BLOCK: usize = 256;
pub const ROUNDS: usize = SCHEDULE_SQUARES - 1;

// Separates the noise stream from key-derived LCG streams.
const NOISE_DOMAIN: u64 = 0x4C53_4943_4E4F_4953;
const TILE_STRIDE: u64 = 0x9E37_79B9_7F4A_7C15;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EncryptOptions {
    pub embed_noise: bool,
    /// Seed for the noise bit-plane; `None` draws from the OS.
    pub noise_seed: Option<u64>,
}

impl Default for EncryptOptions {
    fn default() -> Self {
        Self {
            embed_noise: true,
            noise_seed: None,
        }
    }
}

impl EncryptOptions {
    /// Noise off: the cipher becomes a deterministic function of key and plaintext.
    pub fn deterministic() -> Self {
        Self {
            embed_noise: false,
            noise_seed: None,
        }
    }

    pub fn seeded(seed: u64) -> Self {
        Self {
            embed_noise: true,
            noise_seed: Some(seed),
        }
    }
}

/// Source of LSB noise bits. Never derived from the key.
#[derive(Debug)]
pub enum NoiseSource {
    Seeded { state: u64 },
    Os,
}

impl NoiseSource {
    /// Independent stream for tile `tile` of an image.
    pub fn for_tile(seed: Option<u64>, tile: u64) -> Self {
        match seed {
            Some(s) => NoiseSource::Seeded {
                state: s ^ NOISE_DOMAIN ^ tile.wrapping_mul(TILE_STRIDE),
            },
            None => NoiseSource::Os,
        }
    }

    /// Fills `bits` with values in {0, 1}.
    pub fn fill_bits(&mut self, bits: &mut [u8]) -> Result<()> {
        match self {
            NoiseSource::Seeded { state } => {
                for chunk in bits.chunks_mut(32) {
                    *state = prng_next(*state);
                    // high half of an LCG output is the well-mixed part
                    let word = (*state >> 32) as u32;
                    for (i, b) in chunk.iter_mut().enumerate() {
                        *b = ((word >> (31 - i)) & 1) as u8;
                    }
                }
            }
            NoiseSource::Os => {
                let mut raw = vec![0u8; bits.len().div_ceil(8)];
                rand::rngs::OsRng
                    .try_fill_bytes(&mut raw)
                    .map_err(|e| Error::Io(std::io::Error::other(e)))?;
                for (i, b) in bits.iter_mut().enumerate() {
                    *b = (raw[i / 8] >> (i % 8)) & 1;
                }
            }
        }
        Ok(())
    }
}

fn check_block(b: &SymbolBlock) -> Result<()> {
    if b.order() != BLOCK {
        return Err(Error::BlockOrder(b.order()));
    }
    Ok(())
}

/// XORs one random bit into bit 0 of every pixel.
pub fn lsb_noise_embed(p: &SymbolBlock, noise: &mut NoiseSource) -> Result<SymbolBlock> {
    check_block(p)?;
    let mut bits = vec![0u8; BLOCK * BLOCK];
    noise.fill_bits(&mut bits)?;
    let data = p.as_slice().iter().zip(&bits).map(|(x, b)| x ^ b).collect();
    SymbolBlock::new(BLOCK, data)
}

fn encrypt_spn(mut x: SymbolBlock, s: &KeySchedule) -> Result<SymbolBlock> {
    for n in 0..ROUNDS {
        let l = s.square(n);
        x = whiten_encrypt(l, &x, s.rotation(n))?;
        x = if n % 2 != 0 {
            lscs_encrypt(l, &x)?
        } else {
            lsrs_encrypt(l, &x)?
        };
        x = lsp_encrypt(l, &x)?;
    }
    whiten_encrypt(s.square(ROUNDS), &x, s.rotation(ROUNDS))
}

/// Encrypts one block with an explicit noise source (`None` = no noise).
pub fn encrypt_block_with(
    p: &SymbolBlock,
    s: &KeySchedule,
    noise: Option<&mut NoiseSource>,
) -> Result<SymbolBlock> {
    check_block(p)?;
    let x = match noise {
        Some(src) => lsb_noise_embed(p, src)?,
        None => p.clone(),
    };
    encrypt_spn(x, s)
}

pub fn encrypt_block(
    p: &SymbolBlock,
    s: &KeySchedule,
    opts: &EncryptOptions,
) -> Result<SymbolBlock> {
    if opts.embed_noise {
        let mut src = NoiseSource::for_tile(opts.noise_seed, 0);
        encrypt_block_with(p, s, Some(&mut src))
    } else {
        encrypt_block_with(p, s, None)
    }
}

pub fn decrypt_block(c: &SymbolBlock, s: &KeySchedule) -> Result<SymbolBlock> {
    check_block(c)?;
    let mut x = whiten_decrypt(s.square(ROUNDS), c, s.rotation(ROUNDS))?;
    for n in (0..ROUNDS).rev() {
        let l = s.square(n);
        x = lsp_decrypt(l, &x)?;
        x = if n % 2 != 0 {
            lscs_decrypt(l, &x)?
        } else {
            lsrs_decrypt(l, &x)?
        };
        x = whiten_decrypt(l, &x, s.rotation(n))?;
    }
    Ok(x)
}

/// An 8-bit image as separate channel planes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlaneImage {
    width: u32,
    height: u32,
    planes: Vec<Vec<u8>>,
}

impl PlaneImage {
    pub fn new(width: u32, height: u32, planes: Vec<Vec<u8>>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidImage(format!(
                "empty dimensions {width}x{height}"
            )));
        }
        if planes.len() != 1 && planes.len() != 3 {
            return Err(Error::InvalidImage(format!(
                "{} channels; expected 1 or 3",
                planes.len()
            )));
        }
        let len = width as usize * height as usize;
        if let Some(p) = planes.iter().find(|p| p.len() != len) {
            return Err(Error::InvalidImage(format!(
                "plane has {} bytes; expected {len}",
                p.len()
            )));
        }
        Ok(Self {
            width,
            height,
            planes,
        })
    }

    pub fn gray(width: u32, height: u32, data: Vec<u8>) -> Result<Self> {
        Self::new(width, height, vec![data])
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn channels(&self) -> usize {
        self.planes.len()
    }

    pub fn planes(&self) -> &[Vec<u8>] {
        &self.planes
    }

    pub fn plane(&self, ch: usize) -> &[u8] {
        &self.planes[ch]
    }

    pub fn plane_mut(&mut self, ch: usize) -> &mut [u8] {
        &mut self.planes[ch]
    }

    pub fn into_planes(self) -> Vec<Vec<u8>> {
        self.planes
    }
}

pub fn padded_dim(d: u32) -> u32 {
    d.div_ceil(BLOCK as u32) * BLOCK as u32
}

/// Encrypted image: true dimensions plus one padded ciphertext plane per channel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CipherContainer {
    width: u32,
    height: u32,
    noise_embedded: bool,
    planes: Vec<Vec<u8>>,
}

impl CipherContainer {
    pub fn new(
        width: u32,
        height: u32,
        noise_embedded: bool,
        planes: Vec<Vec<u8>>,
    ) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::Container(format!(
                "empty dimensions {width}x{height}"
            )));
        }
        if planes.len() != 1 && planes.len() != 3 {
            return Err(Error::Container(format!(
                "{} channels; expected 1 or 3",
                planes.len()
            )));
        }
        let len = padded_dim(width) as usize * padded_dim(height) as usize;
        if planes.iter().any(|p| p.len() != len) {
            return Err(Error::Container(format!(
                "plane length differs from padded size {len}"
            )));
        }
        Ok(Self {
            width,
            height,
            noise_embedded,
            planes,
        })
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn padded_width(&self) -> u32 {
        padded_dim(self.width)
    }

    pub fn padded_height(&self) -> u32 {
        padded_dim(self.height)
    }

    pub fn channels(&self) -> usize {
        self.planes.len()
    }

    pub fn noise_embedded(&self) -> bool {
        self.noise_embedded
    }

    pub fn planes(&self) -> &[Vec<u8>] {
        &self.planes
    }

    pub fn plane_mut(&mut self, ch: usize) -> &mut [u8] {
        &mut self.planes[ch]
    }

    pub fn tiles_x(&self) -> usize {
        self.padded_width() as usize / BLOCK
    }

    pub fn tiles_y(&self) -> usize {
        self.padded_height() as usize / BLOCK
    }
}

/// Position of one 256x256 tile within a padded plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TileId {
    pub channel: usize,
    pub row: usize,
    pub col: usize,
}

/// Tile containing padded pixel `(r, c)`.
pub fn tile_of(channel: usize, r: usize, c: usize) -> TileId {
    TileId {
        channel,
        row: r / BLOCK,
        col: c / BLOCK,
    }
}

fn pad_plane(src: &[u8], w: usize, h: usize, pw: usize, ph: usize) -> Vec<u8> {
    let mut out = vec![0u8; pw * ph];
    for r in 0..h {
        out[r * pw..r * pw + w].copy_from_slice(&src[r * w..(r + 1) * w]);
    }
    out
}

fn crop_plane(src: &[u8], w: usize, h: usize, pw: usize) -> Vec<u8> {
    let mut out = Vec::with_capacity(w * h);
    for r in 0..h {
        out.extend_from_slice(&src[r * pw..r * pw + w]);
    }
    out
}

fn extract_tile(plane: &[u8], pw: usize, ty: usize, tx: usize) -> SymbolBlock {
    let mut data = Vec::with_capacity(BLOCK * BLOCK);
    for r in 0..BLOCK {
        let start = (ty * BLOCK + r) * pw + tx * BLOCK;
        data.extend_from_slice(&plane[start..start + BLOCK]);
    }
    SymbolBlock::new(BLOCK, data).expect("byte symbols always fit order 256")
}

fn store_tile(plane: &mut [u8], pw: usize, ty: usize, tx: usize, tile: &SymbolBlock) {
    for (r, row) in tile.as_slice().chunks_exact(BLOCK).enumerate() {
        let start = (ty * BLOCK + r) * pw + tx * BLOCK;
        plane[start..start + BLOCK].copy_from_slice(row);
    }
}

/// Applies `f(tile_index, tile)` to every tile of every plane, in parallel.
/// Tile indices run channel-major, then row-major within a plane.
fn map_tiles<F>(planes: &[Vec<u8>], pw: usize, ph: usize, f: F) -> Result<Vec<Vec<u8>>>
where
    F: Fn(u64, &SymbolBlock) -> Result<SymbolBlock> + Sync,
{
    let (tx_n, ty_n) = (pw / BLOCK, ph / BLOCK);
    let per_plane = tx_n * ty_n;
    let results: Vec<SymbolBlock> = (0..planes.len() * per_plane)
        .into_par_iter()
        .map(|t| {
            let (ch, rem) = (t / per_plane, t % per_plane);
            let tile = extract_tile(&planes[ch], pw, rem / tx_n, rem % tx_n);
            f(t as u64, &tile)
        })
        .collect::<Result<_>>()?;
    let mut out = vec![vec![0u8; pw * ph]; planes.len()];
    for (t, tile) in results.iter().enumerate() {
        let (ch, rem) = (t / per_plane, t % per_plane);
        store_tile(&mut out[ch], pw, rem / tx_n, rem % tx_n, tile);
    }
    Ok(out)
}

pub fn encrypt_image_with_schedule(
    img: &PlaneImage,
    s: &KeySchedule,
    opts: &EncryptOptions,
) -> Result<CipherContainer> {
    let (w, h) = (img.width as usize, img.height as usize);
    let (pw, ph) = (
        padded_dim(img.width) as usize,
        padded_dim(img.height) as usize,
    );
    let padded: Vec<Vec<u8>> = img
        .planes
        .iter()
        .map(|p| pad_plane(p, w, h, pw, ph))
        .collect();
    let planes = map_tiles(&padded, pw, ph, |t, tile| {
        if opts.embed_noise {
            let mut src = NoiseSource::for_tile(opts.noise_seed, t);
            encrypt_block_with(tile, s, Some(&mut src))
        } else {
            encrypt_block_with(tile, s, None)
        }
    })?;
    CipherContainer::new(img.width, img.height, opts.embed_noise, planes)
}

pub fn encrypt_image(
    img: &PlaneImage,
    key: &Key256,
    opts: &EncryptOptions,
) -> Result<CipherContainer> {
    encrypt_image_with_schedule(img, &derive_schedule(key), opts)
}

/// Decrypts every tile, keeping the padding.
pub fn decrypt_padded(ct: &CipherContainer, s: &KeySchedule) -> Result<Vec<Vec<u8>>> {
    let (pw, ph) = (ct.padded_width() as usize, ct.padded_height() as usize);
    map_tiles(&ct.planes, pw, ph, |_, tile| decrypt_block(tile, s))
}

pub fn decrypt_image_with_schedule(ct: &CipherContainer, s: &KeySchedule) -> Result<PlaneImage> {
    let (w, h, pw) = (
        ct.width as usize,
        ct.height as usize,
        ct.padded_width() as usize,
    );
    let planes = decrypt_padded(ct, s)?
        .iter()
        .map(|p| crop_plane(p, w, h, pw))
        .collect();
    PlaneImage::new(ct.width, ct.height, planes)
}

/// No integrity check: a wrong key decrypts to noise.
pub fn decrypt_image(ct: &CipherContainer, key: &Key256) -> Result<PlaneImage> {
    decrypt_image_with_schedule(ct, &derive_schedule(key))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_block(rng: &mut ChaCha8Rng) -> SymbolBlock {
        let mut data = vec![0u8; BLOCK * BLOCK];
        rng.fill(&mut data[..]);
        SymbolBlock::new(BLOCK, data).unwrap()
    }

    fn random_key(rng: &mut ChaCha8Rng) -> Key256 {
        Key256::from_bytes(rng.random())
    }

    #[test]
    fn noise_only_touches_lsb_and_is_seeded() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let p = random_block(&mut rng);
        let a = lsb_noise_embed(&p, &mut NoiseSource::for_tile(Some(9), 0)).unwrap();
        let b = lsb_noise_embed(&p, &mut NoiseSource::for_tile(Some(9), 0)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, p);
        assert!(a
            .as_slice()
            .iter()
            .zip(p.as_slice())
            .all(|(x, y)| (x ^ y) & 0xFE == 0));
        let back = lsb_noise_embed(&a, &mut NoiseSource::for_tile(Some(9), 0)).unwrap();
        assert_eq!(back, p);
        let c = lsb_noise_embed(&p, &mut NoiseSource::for_tile(Some(9), 1)).unwrap();
        assert_ne!(a, c);
        // roughly half the bits flip
        let flips = a
            .as_slice()
            .iter()
            .zip(p.as_slice())
            .filter(|(x, y)| x != y)
            .count();
        assert!((30_000..35_536).contains(&flips), "{flips}");
    }

    #[test]
    fn os_noise_differs_between_calls() {
        let p = SymbolBlock::filled(BLOCK, 100).unwrap();
        let a = lsb_noise_embed(&p, &mut NoiseSource::Os).unwrap();
        let b = lsb_noise_embed(&p, &mut NoiseSource::Os).unwrap();
        assert_ne!(a, b);
    }

    #[test]
    fn block_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..4 {
            let s = derive_schedule(&random_key(&mut rng));
            let p = random_block(&mut rng);
            let c = encrypt_block(&p, &s, &EncryptOptions::deterministic()).unwrap();
            assert_ne!(c, p);
            assert_eq!(decrypt_block(&c, &s).unwrap(), p);
        }
    }

    #[test]
    fn noisy_encryption_is_probabilistic() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let s = derive_schedule(&random_key(&mut rng));
        let p = random_block(&mut rng);
        let c1 = encrypt_block(&p, &s, &EncryptOptions::default()).unwrap();
        let c2 = encrypt_block(&p, &s, &EncryptOptions::default()).unwrap();
        assert_ne!(c1, c2);
        for c in [c1, c2] {
            let d = decrypt_block(&c, &s).unwrap();
            assert!(d
                .as_slice()
                .iter()
                .zip(p.as_slice())
                .all(|(x, y)| (x ^ y) & 0xFE == 0));
        }
    }

    #[test]
    fn wrong_block_order_rejected() {
        let s = derive_schedule(&Key256::default());
        let small = SymbolBlock::filled(16, 0).unwrap();
        assert!(matches!(
            encrypt_block(&small, &s, &EncryptOptions::deterministic()),
            Err(Error::BlockOrder(16))
        ));
        assert!(decrypt_block(&small, &s).is_err());
        assert!(lsb_noise_embed(&small, &mut NoiseSource::Os).is_err());
    }

    #[test]
    fn zero_key_ramp_matches_reference_model() {
        let s = derive_schedule(&Key256::default());
        let p = SymbolBlock::from_fn(BLOCK, |r, c| (r + c) as u8).unwrap();
        let c = encrypt_block(&p, &s, &EncryptOptions::deterministic()).unwrap();
        assert_eq!(&c.as_slice()[..8], &[20, 157, 243, 134, 80, 57, 93, 156]);
    }

    #[test]
    fn image_shapes() {
        let img = PlaneImage::gray(300, 200, vec![7; 300 * 200]).unwrap();
        let ct = encrypt_image(&img, &Key256::default(), &EncryptOptions::deterministic()).unwrap();
        assert_eq!((ct.padded_width(), ct.padded_height()), (512, 256));
        assert_eq!((ct.tiles_x(), ct.tiles_y()), (2, 1));
        assert_eq!(ct.planes()[0].len(), 512 * 256);
        assert_eq!(decrypt_image(&ct, &Key256::default()).unwrap(), img);
    }

    #[test]
    fn color_planes_share_schedule() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let mut plane = vec![0u8; 256 * 256];
        rng.fill(&mut plane[..]);
        let img = PlaneImage::new(256, 256, vec![plane.clone(), plane.clone(), plane]).unwrap();
        let ct = encrypt_image(&img, &Key256::default(), &EncryptOptions::deterministic()).unwrap();
        assert_eq!(ct.planes()[0], ct.planes()[1]);
        assert_eq!(ct.planes()[1], ct.planes()[2]);
    }

    #[test]
    fn bad_images_rejected() {
        assert!(PlaneImage::gray(0, 4, vec![]).is_err());
        assert!(PlaneImage::gray(2, 2, vec![0; 3]).is_err());
        assert!(PlaneImage::new(1, 1, vec![vec![0], vec![0]]).is_err());
        assert!(CipherContainer::new(1, 1, false, vec![vec![0; 10]]).is_err());
    }
}
