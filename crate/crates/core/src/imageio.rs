//! Binary PGM (P5) / PPM (P6) codec and the ciphertext container format.
//!
//! Container layout, all integers big-endian:
//!
//! ```text
//! offset  size  field
//!      0     4  magic "LSIC"
//!      4     1  version (1)
//!      5     1  flags (bit 0: noise embedded; other bits zero)
//!      6     1  channels (1 or 3)
//!      7     1  reserved (0)
//!      8     4  width
//!     12     4  height
//!     16     -  per channel: padded plane, row-major
//! ```

use std::fs;
use std::path::Path;

use crate::cipher::{padded_dim, CipherContainer, PlaneImage};
use crate::error::{Error, Result};

pub const CONTAINER_MAGIC: [u8; 4] = *b"LSIC";
pub const CONTAINER_VERSION: u8 = 1;
pub const CONTAINER_HEADER_LEN: usize = 16;
const FLAG_NOISE: u8 = 0x01;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RasterFormat {
    /// Binary graymap, one channel.
    Pgm,
    /// Binary pixmap, three interleaved channels.
    Ppm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RasterHeader {
    pub format: RasterFormat,
    pub width: u32,
    pub height: u32,
    pub maxval: u32,
}

fn parse_err(offset: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        offset,
        message: message.into(),
    }
}

struct HeaderCursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl HeaderCursor<'_> {
    fn skip_space_and_comments(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b == b'#' {
                while let Some(&b) = self.bytes.get(self.pos) {
                    self.pos += 1;
                    if b == b'\n' || b == b'\r' {
                        break;
                    }
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn number(&mut self, what: &str) -> Result<u32> {
        self.skip_space_and_comments();
        let start = self.pos;
        while self.bytes.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(parse_err(start, format!("expected {what}")));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .expect("ascii digits")
            .parse()
            .map_err(|_| parse_err(start, format!("{what} out of range")))
    }
}

/// Parses the header, returning it with the offset of the first payload byte.
pub fn read_header(bytes: &[u8]) -> Result<(RasterHeader, usize)> {
    let format = match bytes.get(..2) {
        Some(b"P5") => RasterFormat::Pgm,
        Some(b"P6") => RasterFormat::Ppm,
        _ => return Err(parse_err(0, "bad magic; expected P5 or P6")),
    };
    let mut cur = HeaderCursor { bytes, pos: 2 };
    let width = cur.number("width")?;
    let height = cur.number("height")?;
    let maxval = cur.number("maxval")?;
    if width == 0 || height == 0 {
        return Err(parse_err(2, format!("empty dimensions {width}x{height}")));
    }
    if maxval != 255 {
        return Err(Error::UnsupportedDepth(maxval));
    }
    match bytes.get(cur.pos) {
        Some(b) if b.is_ascii_whitespace() => cur.pos += 1,
        _ => return Err(parse_err(cur.pos, "expected whitespace after maxval")),
    }
    Ok((
        RasterHeader {
            format,
            width,
            height,
            maxval,
        },
        cur.pos,
    ))
}

pub fn read_image(bytes: &[u8]) -> Result<PlaneImage> {
    let (hdr, start) = read_header(bytes)?;
    let pixels = hdr.width as usize * hdr.height as usize;
    let channels = match hdr.format {
        RasterFormat::Pgm => 1,
        RasterFormat::Ppm => 3,
    };
    let need = pixels * channels;
    let payload = &bytes[start..];
    if payload.len() < need {
        return Err(parse_err(
            bytes.len(),
            format!("truncated payload: {} of {need} bytes", payload.len()),
        ));
    }
    let payload = &payload[..need];
    let planes = if channels == 1 {
        vec![payload.to_vec()]
    } else {
        (0..3)
            .map(|ch| payload.iter().skip(ch).step_by(3).copied().collect())
            .collect()
    };
    PlaneImage::new(hdr.width, hdr.height, planes)
}

/// Canonical P5/P6 encoding: `P5\n<w> <h>\n255\n` followed by the payload.
pub fn write_image(img: &PlaneImage) -> Vec<u8> {
    let magic = if img.channels() == 1 { "P5" } else { "P6" };
    let mut out = format!("{magic}\n{} {}\n255\n", img.width(), img.height()).into_bytes();
    if img.channels() == 1 {
        out.extend_from_slice(img.plane(0));
    } else {
        out.reserve(img.plane(0).len() * 3);
        for i in 0..img.plane(0).len() {
            out.extend(img.planes().iter().map(|p| p[i]));
        }
    }
    out
}

pub fn write_container(ct: &CipherContainer) -> Vec<u8> {
    let plane_len = ct.padded_width() as usize * ct.padded_height() as usize;
    let mut out = Vec::with_capacity(CONTAINER_HEADER_LEN + ct.channels() * plane_len);
    out.extend_from_slice(&CONTAINER_MAGIC);
    out.push(CONTAINER_VERSION);
    out.push(if ct.noise_embedded() { FLAG_NOISE } else { 0 });
    out.push(ct.channels() as u8);
    out.push(0);
    out.extend_from_slice(&ct.width().to_be_bytes());
    out.extend_from_slice(&ct.height().to_be_bytes());
    for p in ct.planes() {
        out.extend_from_slice(p);
    }
    out
}

pub fn is_container(bytes: &[u8]) -> bool {
    bytes.starts_with(&CONTAINER_MAGIC)
}

pub fn read_container(bytes: &[u8]) -> Result<CipherContainer> {
    if bytes.len() < CONTAINER_HEADER_LEN {
        return Err(Error::Container(format!(
            "{} bytes is shorter than the {CONTAINER_HEADER_LEN}-byte header",
            bytes.len()
        )));
    }
    if !is_container(bytes) {
        return Err(Error::Container("bad magic".into()));
    }
    if bytes[4] != CONTAINER_VERSION {
        return Err(Error::Container(format!(
            "unsupported version {}",
            bytes[4]
        )));
    }
    let flags = bytes[5];
    if flags & !FLAG_NOISE != 0 {
        return Err(Error::Container(format!(
            "reserved flag bits set: {flags:#04x}"
        )));
    }
    let channels = bytes[6] as usize;
    if channels != 1 && channels != 3 {
        return Err(Error::Container(format!(
            "{channels} channels; expected 1 or 3"
        )));
    }
    if bytes[7] != 0 {
        return Err(Error::Container("reserved byte is not zero".into()));
    }
    let width = u32::from_be_bytes(bytes[8..12].try_into().expect("4 bytes"));
    let height = u32::from_be_bytes(bytes[12..16].try_into().expect("4 bytes"));
    if width == 0 || height == 0 {
        return Err(Error::Container(format!(
            "empty dimensions {width}x{height}"
        )));
    }
    let plane_len = padded_dim(width) as usize * padded_dim(height) as usize;
    let expected = CONTAINER_HEADER_LEN + channels * plane_len;
    if bytes.len() != expected {
        return Err(Error::Container(format!(
            "size {} does not match header (expected {expected})",
            bytes.len()
        )));
    }
    let planes = bytes[CONTAINER_HEADER_LEN..]
        .chunks_exact(plane_len)
        .map(<[u8]>::to_vec)
        .collect();
    CipherContainer::new(width, height, flags & FLAG_NOISE != 0, planes)
}

pub fn load_image(path: impl AsRef<Path>) -> Result<PlaneImage> {
    read_image(&fs::read(path)?)
}

pub fn save_image(path: impl AsRef<Path>, img: &PlaneImage) -> Result<()> {
    fs::write(path, write_image(img))?;
    Ok(())
}

pub fn load_container(path: impl AsRef<Path>) -> Result<CipherContainer> {
    read_container(&fs::read(path)?)
}

pub fn save_container(path: impl AsRef<Path>, ct: &CipherContainer) -> Result<()> {
    fs::write(path, write_container(ct))?;
    Ok(())
}
