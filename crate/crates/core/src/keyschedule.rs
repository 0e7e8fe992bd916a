//! Key translation: a 256-bit key becomes nine keyed order-256 Latin squares.
//!
//! The key is split into eight big-endian 32-bit subkeys. Each subkey seeds a
//! 64-step run of a 64-bit LCG; the first halves of the eight runs form one
//! sequence and the second halves the other, and the pair feeds [`lsg`]. The
//! low words of the last outputs become the key for the next square.

use std::fmt;
use std::str::FromStr;

use rand::TryRngCore;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::latin::{lsg, LatinSquare};

pub const KEY_BYTES: usize = 32;
pub const SUBKEYS: usize = 8;
pub const SEQUENCE_LEN: usize = 256;
/// Squares in a schedule: one per round plus the final whitening square.
pub const SCHEDULE_SQUARES: usize = 9;

const STREAM_LEN: usize = 64;
const HALF: usize = STREAM_LEN / 2;

pub const LCG_MULTIPLIER: u64 = 6364136223846793005;
pub const LCG_INCREMENT: u64 = 1442695040888963407;

/// One step of the 64-bit linear congruential generator.
#[inline]
pub fn prng_next(state: u64) -> u64 {
    state
        .wrapping_mul(LCG_MULTIPLIER)
        .wrapping_add(LCG_INCREMENT)
}

/// 256-bit cipher key.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Key256([u8; KEY_BYTES]);

impl Key256 {
    pub const fn from_bytes(bytes: [u8; KEY_BYTES]) -> Self {
        Self(bytes)
    }

    pub fn as_bytes(&self) -> &[u8; KEY_BYTES] {
        &self.0
    }

    /// Parses 64 hex characters (either case).
    pub fn from_hex(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.len() != 2 * KEY_BYTES {
            return Err(Error::InvalidKey(format!(
                "expected {} hex characters, got {}",
                2 * KEY_BYTES,
                s.len()
            )));
        }
        let mut bytes = [0u8; KEY_BYTES];
        hex::decode_to_slice(s, &mut bytes).map_err(|e| Error::InvalidKey(e.to_string()))?;
        Ok(Self(bytes))
    }

    pub fn to_hex(&self) -> String {
        hex::encode_upper(self.0)
    }

    /// Fresh key from the operating system's entropy source.
    pub fn generate() -> Result<Self> {
        let mut bytes = [0u8; KEY_BYTES];
        rand::rngs::OsRng
            .try_fill_bytes(&mut bytes)
            .map_err(|e| Error::Io(std::io::Error::other(e)))?;
        Ok(Self(bytes))
    }

    /// Flips bit `bit`, counted from the most significant bit of byte 0, so
    /// bit 255 is the last bit of the hex form.
    pub fn flip_bit(&self, bit: usize) -> Result<Self> {
        if bit >= 8 * KEY_BYTES {
            return Err(Error::KeyBitOutOfRange(bit));
        }
        let mut bytes = self.0;
        bytes[bit / 8] ^= 0x80 >> (bit % 8);
        Ok(Self(bytes))
    }

    /// Short, non-reversible identifier for reports.
    pub fn fingerprint(&self) -> String {
        let digest = Sha256::digest(self.0);
        hex::encode(&digest[..8])
    }
}

impl fmt::Debug for Key256 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Key256({})", self.fingerprint())
    }
}

impl FromStr for Key256 {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::from_hex(s)
    }
}

impl From<[u8; KEY_BYTES]> for Key256 {
    fn from(bytes: [u8; KEY_BYTES]) -> Self {
        Self(bytes)
    }
}

/// Eight 32-bit subkeys.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SubKeys(pub [u32; SUBKEYS]);

impl SubKeys {
    pub fn to_key(&self) -> Key256 {
        let mut bytes = [0u8; KEY_BYTES];
        for (chunk, w) in bytes.chunks_exact_mut(4).zip(self.0) {
            chunk.copy_from_slice(&w.to_be_bytes());
        }
        Key256(bytes)
    }
}

pub fn subkey_div(key: &Key256) -> SubKeys {
    let mut words = [0u32; SUBKEYS];
    for (w, chunk) in words.iter_mut().zip(key.0.chunks_exact(4)) {
        *w = u32::from_be_bytes(chunk.try_into().expect("4-byte chunk"));
    }
    SubKeys(words)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequencePair {
    pub q1: Vec<u64>,
    pub q2: Vec<u64>,
}

/// Key-dependent sequence generator: `m + 1` sequence pairs of 256 values.
pub fn kdsg(key: &Key256, m: usize) -> Vec<SequencePair> {
    let mut out = Vec::with_capacity(m + 1);
    let mut round_key = *key;
    for _ in 0..=m {
        let subkeys = subkey_div(&round_key);
        let mut q1 = Vec::with_capacity(SEQUENCE_LEN);
        let mut q2 = Vec::with_capacity(SEQUENCE_LEN);
        let mut next = [0u32; SUBKEYS];
        for (i, &k) in subkeys.0.iter().enumerate() {
            let mut stream = [0u64; STREAM_LEN];
            stream[0] = prng_next(u64::from(k));
            for j in 1..STREAM_LEN {
                stream[j] = prng_next(stream[j - 1]);
            }
            q1.extend_from_slice(&stream[..HALF]);
            q2.extend_from_slice(&stream[HALF..]);
            next[i] = stream[STREAM_LEN - 1] as u32;
        }
        out.push(SequencePair { q1, q2 });
        round_key = SubKeys(next).to_key();
    }
    out
}

/// The nine keyed squares and their rotation parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KeySchedule {
    squares: Vec<LatinSquare>,
    rotations: [u8; SCHEDULE_SQUARES],
}

impl KeySchedule {
    pub fn squares(&self) -> &[LatinSquare] {
        &self.squares
    }

    pub fn square(&self, n: usize) -> &LatinSquare {
        &self.squares[n]
    }

    /// `D_n = L_n(0, 0)`.
    pub fn rotation(&self, n: usize) -> u8 {
        self.rotations[n]
    }

    pub fn rotations(&self) -> &[u8; SCHEDULE_SQUARES] {
        &self.rotations
    }
}

pub fn derive_schedule(key: &Key256) -> KeySchedule {
    let squares: Vec<LatinSquare> = kdsg(key, SCHEDULE_SQUARES - 1)
        .iter()
        .map(|p| lsg(&p.q1, &p.q2).expect("256-element sequences always generate a square"))
        .collect();
    let mut rotations = [0u8; SCHEDULE_SQUARES];
    for (d, sq) in rotations.iter_mut().zip(&squares) {
        *d = sq.get(0, 0);
    }
    KeySchedule { squares, rotations }
}
