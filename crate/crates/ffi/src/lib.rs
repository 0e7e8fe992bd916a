//! C ABI for the Latin square image cipher.
//!
//! Every entry point returns an [`LsicStatus`]; results come back through
//! out-pointers. Objects are opaque handles created by `*_new` / producer
//! functions and released with the matching `*_free`. Panics never cross the
//! boundary; they surface as `LSIC_STATUS_INTERNAL`.
//!
//! Images cross the boundary as channel-major planes: all of channel 0
//! row-major, then channel 1, then channel 2.

use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use lsic::analysis;
use lsic::cipher::{
    decrypt_block, decrypt_image_with_schedule, encrypt_block, encrypt_image_with_schedule, BLOCK,
};
use lsic::imageio;
use lsic::{EncryptOptions, Error, Key256, KeySchedule, PlaneImage, SymbolBlock};

/// Bytes in one 256x256 cipher block.
pub const LSIC_BLOCK_BYTES: usize = 65536;
const _: () = assert!(LSIC_BLOCK_BYTES == BLOCK * BLOCK);
/// Bytes in a raw key.
pub const LSIC_KEY_BYTES: usize = 32;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LsicStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidKey = 2,
    InvalidArgument = 3,
    InvalidImage = 4,
    Parse = 5,
    Container = 6,
    Io = 7,
    Internal = 99,
}

impl From<&Error> for LsicStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::InvalidKey(_) | Error::KeyBitOutOfRange(_) => LsicStatus::InvalidKey,
            Error::InvalidImage(_) | Error::BlockOrder(_) | Error::EmptyPlane => {
                LsicStatus::InvalidImage
            }
            Error::Parse { .. } | Error::UnsupportedDepth(_) => LsicStatus::Parse,
            Error::Container(_) => LsicStatus::Container,
            Error::Io(_) => LsicStatus::Io,
            _ => LsicStatus::InvalidArgument,
        }
    }
}

/// Derived key schedule; reuse it to avoid re-deriving per call.
pub struct LsicSchedule(KeySchedule);

/// Decoded image with one to three channel planes.
pub struct LsicImage(PlaneImage);

/// Owned byte buffer returned by the library.
pub struct LsicBuffer(Vec<u8>);

fn guard(f: impl FnOnce() -> Result<(), LsicStatus>) -> LsicStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => LsicStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => LsicStatus::Internal,
    }
}

fn status(e: Error) -> LsicStatus {
    LsicStatus::from(&e)
}

unsafe fn bytes<'a>(data: *const u8, len: usize) -> Result<&'a [u8], LsicStatus> {
    if len == 0 {
        return Ok(&[]);
    }
    if data.is_null() {
        return Err(LsicStatus::NullPointer);
    }
    Ok(slice::from_raw_parts(data, len))
}

unsafe fn put<T>(out: *mut *mut T, value: T) -> Result<(), LsicStatus> {
    if out.is_null() {
        return Err(LsicStatus::NullPointer);
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn handle<'a, T>(p: *const T) -> Result<&'a T, LsicStatus> {
    p.as_ref().ok_or(LsicStatus::NullPointer)
}

fn options(embed_noise: bool, use_seed: bool, noise_seed: u64) -> EncryptOptions {
    EncryptOptions {
        embed_noise,
        noise_seed: use_seed.then_some(noise_seed),
    }
}

/// Static, NUL-terminated description of a status code.
#[no_mangle]
pub extern "C" fn lsic_status_message(status: LsicStatus) -> *const c_char {
    let s: &'static CStr = match status {
        LsicStatus::Ok => c"ok",
        LsicStatus::NullPointer => c"null pointer argument",
        LsicStatus::InvalidKey => c"invalid key",
        LsicStatus::InvalidArgument => c"invalid argument",
        LsicStatus::InvalidImage => c"invalid image",
        LsicStatus::Parse => c"malformed image data",
        LsicStatus::Container => c"malformed ciphertext container",
        LsicStatus::Io => c"i/o error",
        LsicStatus::Internal => c"internal error",
    };
    s.as_ptr()
}

/// Derives a schedule from 32 raw key bytes.
///
/// # Safety
/// `key` must point to 32 readable bytes; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lsic_schedule_new(
    key: *const u8,
    out: *mut *mut LsicSchedule,
) -> LsicStatus {
    guard(|| {
        let raw = bytes(key, LSIC_KEY_BYTES)?;
        let key = Key256::from_bytes(raw.try_into().expect("32 bytes"));
        put(out, LsicSchedule(lsic::derive_schedule(&key)))
    })
}

/// Derives a schedule from a NUL-terminated 64-character hex key.
///
/// # Safety
/// `hex` must be a valid C string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lsic_schedule_from_hex(
    hex: *const c_char,
    out: *mut *mut LsicSchedule,
) -> LsicStatus {
    guard(|| {
        if hex.is_null() {
            return Err(LsicStatus::NullPointer);
        }
        let s = CStr::from_ptr(hex)
            .to_str()
            .map_err(|_| LsicStatus::InvalidKey)?;
        let key = Key256::from_hex(s).map_err(status)?;
        put(out, LsicSchedule(lsic::derive_schedule(&key)))
    })
}

/// # Safety
/// `schedule` must come from this library and not be used afterwards. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn lsic_schedule_free(schedule: *mut LsicSchedule) {
    if !schedule.is_null() {
        drop(Box::from_raw(schedule));
    }
}

/// Copies `channels` planes of `width * height` bytes each (channel-major)
/// into a new image. `channels` must be 1 or 3.
///
/// # Safety
/// `data` must point to `len` readable bytes; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lsic_image_new(
    width: u32,
    height: u32,
    channels: u32,
    data: *const u8,
    len: usize,
    out: *mut *mut LsicImage,
) -> LsicStatus {
    guard(|| {
        let src = bytes(data, len)?;
        let plane = width as usize * height as usize;
        if channels == 0 || src.len() != plane * channels as usize {
            return Err(LsicStatus::InvalidImage);
        }
        let planes = src.chunks_exact(plane.max(1)).map(<[u8]>::to_vec).collect();
        let img = PlaneImage::new(width, height, planes).map_err(status)?;
        put(out, LsicImage(img))
    })
}

/// Decodes a binary PGM or PPM file held in memory.
///
/// # Safety
/// `data` must point to `len` readable bytes; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lsic_image_decode(
    data: *const u8,
    len: usize,
    out: *mut *mut LsicImage,
) -> LsicStatus {
    guard(|| {
        let img = imageio::read_image(bytes(data, len)?).map_err(status)?;
        put(out, LsicImage(img))
    })
}

/// Encodes an image as canonical PGM (1 channel) or PPM (3 channels).
///
/// # Safety
/// `image` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lsic_image_encode(
    image: *const LsicImage,
    out: *mut *mut LsicBuffer,
) -> LsicStatus {
    guard(|| {
        let img = handle(image)?;
        put(out, LsicBuffer(imageio::write_image(&img.0)))
    })
}

/// Writes width, height and channel count. Any out-pointer may be NULL.
///
/// # Safety
/// `image` must be a live handle; non-NULL out-pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn lsic_image_info(
    image: *const LsicImage,
    width: *mut u32,
    height: *mut u32,
    channels: *mut u32,
) -> LsicStatus {
    guard(|| {
        let img = &handle(image)?.0;
        if !width.is_null() {
            *width = img.width();
        }
        if !height.is_null() {
            *height = img.height();
        }
        if !channels.is_null() {
            *channels = img.channels() as u32;
        }
        Ok(())
    })
}

/// Borrows one channel plane. The pointer stays valid until the image is freed.
///
/// # Safety
/// `image` must be a live handle; `data` and `len` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lsic_image_plane(
    image: *const LsicImage,
    channel: u32,
    data: *mut *const u8,
    len: *mut usize,
) -> LsicStatus {
    guard(|| {
        let img = &handle(image)?.0;
        if data.is_null() || len.is_null() {
            return Err(LsicStatus::NullPointer);
        }
        let plane = img
            .planes()
            .get(channel as usize)
            .ok_or(LsicStatus::InvalidArgument)?;
        *data = plane.as_ptr();
        *len = plane.len();
        Ok(())
    })
}

/// # Safety
/// `image` must come from this library and not be used afterwards. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn lsic_image_free(image: *mut LsicImage) {
    if !image.is_null() {
        drop(Box::from_raw(image));
    }
}

/// Encrypts an image into serialized container bytes. With `embed_noise`
/// set, noise comes from `noise_seed` when `use_seed` is true and from the
/// OS otherwise.
///
/// # Safety
/// Handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lsic_encrypt_image(
    schedule: *const LsicSchedule,
    image: *const LsicImage,
    embed_noise: bool,
    use_seed: bool,
    noise_seed: u64,
    out: *mut *mut LsicBuffer,
) -> LsicStatus {
    guard(|| {
        let s = &handle(schedule)?.0;
        let img = &handle(image)?.0;
        let ct = encrypt_image_with_schedule(img, s, &options(embed_noise, use_seed, noise_seed))
            .map_err(status)?;
        put(out, LsicBuffer(imageio::write_container(&ct)))
    })
}

/// Parses container bytes and decrypts them into a new image.
///
/// # Safety
/// `schedule` must be live; `data` must point to `len` readable bytes; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lsic_decrypt_image(
    schedule: *const LsicSchedule,
    data: *const u8,
    len: usize,
    out: *mut *mut LsicImage,
) -> LsicStatus {
    guard(|| {
        let s = &handle(schedule)?.0;
        let ct = imageio::read_container(bytes(data, len)?).map_err(status)?;
        let img = decrypt_image_with_schedule(&ct, s).map_err(status)?;
        put(out, LsicImage(img))
    })
}

/// Encrypts one 256x256 block (`LSIC_BLOCK_BYTES` bytes, row-major).
/// `input` and `output` may alias.
///
/// # Safety
/// `input` must be readable and `output` writable for `LSIC_BLOCK_BYTES` bytes.
#[no_mangle]
pub unsafe extern "C" fn lsic_encrypt_block(
    schedule: *const LsicSchedule,
    input: *const u8,
    output: *mut u8,
    embed_noise: bool,
    use_seed: bool,
    noise_seed: u64,
) -> LsicStatus {
    guard(|| {
        let s = &handle(schedule)?.0;
        let block =
            SymbolBlock::new(BLOCK, bytes(input, LSIC_BLOCK_BYTES)?.to_vec()).map_err(status)?;
        let c = encrypt_block(&block, s, &options(embed_noise, use_seed, noise_seed))
            .map_err(status)?;
        if output.is_null() {
            return Err(LsicStatus::NullPointer);
        }
        ptr::copy(c.as_slice().as_ptr(), output, LSIC_BLOCK_BYTES);
        Ok(())
    })
}

/// Decrypts one 256x256 block. `input` and `output` may alias.
///
/// # Safety
/// `input` must be readable and `output` writable for `LSIC_BLOCK_BYTES` bytes.
#[no_mangle]
pub unsafe extern "C" fn lsic_decrypt_block(
    schedule: *const LsicSchedule,
    input: *const u8,
    output: *mut u8,
) -> LsicStatus {
    guard(|| {
        let s = &handle(schedule)?.0;
        let block =
            SymbolBlock::new(BLOCK, bytes(input, LSIC_BLOCK_BYTES)?.to_vec()).map_err(status)?;
        let p = decrypt_block(&block, s).map_err(status)?;
        if output.is_null() {
            return Err(LsicStatus::NullPointer);
        }
        ptr::copy(p.as_slice().as_ptr(), output, LSIC_BLOCK_BYTES);
        Ok(())
    })
}

/// # Safety
/// `buffer` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn lsic_buffer_data(buffer: *const LsicBuffer) -> *const u8 {
    buffer.as_ref().map_or(ptr::null(), |b| b.0.as_ptr())
}

/// # Safety
/// `buffer` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn lsic_buffer_len(buffer: *const LsicBuffer) -> usize {
    buffer.as_ref().map_or(0, |b| b.0.len())
}

/// # Safety
/// `buffer` must come from this library and not be used afterwards. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn lsic_buffer_free(buffer: *mut LsicBuffer) {
    if !buffer.is_null() {
        drop(Box::from_raw(buffer));
    }
}

/// Shannon entropy (bits per byte) of `len` bytes.
///
/// # Safety
/// `data` must point to `len` readable bytes; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lsic_entropy(data: *const u8, len: usize, out: *mut f64) -> LsicStatus {
    guard(|| {
        let v = analysis::entropy(bytes(data, len)?).map_err(status)?;
        out.as_mut().map(|o| *o = v).ok_or(LsicStatus::NullPointer)
    })
}

/// NPCR in percent between two equal-length byte arrays.
///
/// # Safety
/// `a` and `b` must each point to `len` readable bytes; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lsic_npcr(
    a: *const u8,
    b: *const u8,
    len: usize,
    out: *mut f64,
) -> LsicStatus {
    guard(|| {
        let v = analysis::npcr(bytes(a, len)?, bytes(b, len)?).map_err(status)?;
        out.as_mut().map(|o| *o = v).ok_or(LsicStatus::NullPointer)
    })
}

/// UACI in percent (normalised by 255) between two equal-length byte arrays.
///
/// # Safety
/// `a` and `b` must each point to `len` readable bytes; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lsic_uaci(
    a: *const u8,
    b: *const u8,
    len: usize,
    out: *mut f64,
) -> LsicStatus {
    guard(|| {
        let v = analysis::uaci(bytes(a, len)?, bytes(b, len)?).map_err(status)?;
        out.as_mut().map(|o| *o = v).ok_or(LsicStatus::NullPointer)
    })
}
