//! Latin square image cipher.
//!
//! A symmetric-key cipher for 8-bit images that works on 256x256 blocks. A
//! 256-bit key expands into nine keyed Latin squares of order 256; each of
//! eight rounds whitens the block with one square, substitutes pixels through
//! the square's row or column bijections, and permutes pixel positions with
//! the same square. Random noise in the least significant bit-plane makes
//! encryption probabilistic.
//!
//! ```
//! use lsic::{decrypt_image, encrypt_image, EncryptOptions, Key256, PlaneImage};
//!
//! let key = Key256::from_hex(&"0f".repeat(32)).unwrap();
//! let img = PlaneImage::gray(300, 200, vec![128; 300 * 200]).unwrap();
//! let ct = encrypt_image(&img, &key, &EncryptOptions::deterministic()).unwrap();
//! assert_eq!(decrypt_image(&ct, &key).unwrap(), img);
//! ```

pub mod analysis;
pub mod cipher;
pub mod cli;
pub mod error;
pub mod imageio;
pub mod keyschedule;
pub mod latin;
pub mod primitives;

pub use cipher::{
    decrypt_block, decrypt_image, encrypt_block, encrypt_image, CipherContainer, EncryptOptions,
    PlaneImage,
};
pub use error::{Error, Result};
pub use keyschedule::{derive_schedule, Key256, KeySchedule};
pub use latin::{lsg, LatinSquare};
pub use primitives::SymbolBlock;
