#ifndef LSIC_H
#define LSIC_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

// Bytes in one 256x256 cipher block.
#define LSIC_BLOCK_BYTES 65536

// Bytes in a raw key.
#define LSIC_KEY_BYTES 32

typedef enum LsicStatus {
  LSIC_STATUS_OK = 0,
  LSIC_STATUS_NULL_POINTER = 1,
  LSIC_STATUS_INVALID_KEY = 2,
  LSIC_STATUS_INVALID_ARGUMENT = 3,
  LSIC_STATUS_INVALID_IMAGE = 4,
  LSIC_STATUS_PARSE = 5,
  LSIC_STATUS_CONTAINER = 6,
  LSIC_STATUS_IO = 7,
  LSIC_STATUS_INTERNAL = 99,
} LsicStatus;

// Owned byte buffer returned by the library.
typedef struct LsicBuffer LsicBuffer;

// Decoded image with one to three channel planes.
typedef struct LsicImage LsicImage;

// Derived key schedule; reuse it to avoid re-deriving per call.
typedef struct LsicSchedule LsicSchedule;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Static, NUL-terminated description of a status code.
const char *lsic_status_message(enum LsicStatus status);

// Derives a schedule from 32 raw key bytes.
//
// # Safety
// `key` must point to 32 readable bytes; `out` must be writable.
enum LsicStatus lsic_schedule_new(const uint8_t *key, struct LsicSchedule **out);

// Derives a schedule from a NUL-terminated 64-character hex key.
//
// # Safety
// `hex` must be a valid C string; `out` must be writable.
enum LsicStatus lsic_schedule_from_hex(const char *hex, struct LsicSchedule **out);

// # Safety
// `schedule` must come from this library and not be used afterwards. NULL is ignored.
void lsic_schedule_free(struct LsicSchedule *schedule);

// Copies `channels` planes of `width * height` bytes each (channel-major)
// into a new image. `channels` must be 1 or 3.
//
// # Safety
// `data` must point to `len` readable bytes; `out` must be writable.
enum LsicStatus lsic_image_new(uint32_t width,
                               uint32_t height,
                               uint32_t channels,
                               const uint8_t *data,
                               uintptr_t len,
                               struct LsicImage **out);

// Decodes a binary PGM or PPM file held in memory.
//
// # Safety
// `data` must point to `len` readable bytes; `out` must be writable.
enum LsicStatus lsic_image_decode(const uint8_t *data, uintptr_t len, struct LsicImage **out);

// Encodes an image as canonical PGM (1 channel) or PPM (3 channels).
//
// # Safety
// `image` must be a live handle; `out` must be writable.
enum LsicStatus lsic_image_encode(const struct LsicImage *image, struct LsicBuffer **out);

// Writes width, height and channel count. Any out-pointer may be NULL.
//
// # Safety
// `image` must be a live handle; non-NULL out-pointers must be writable.
enum LsicStatus lsic_image_info(const struct LsicImage *image,
                                uint32_t *width,
                                uint32_t *height,
                                uint32_t *channels);

// Borrows one channel plane. The pointer stays valid until the image is freed.
//
// # Safety
// `image` must be a live handle; `data` and `len` must be writable.
enum LsicStatus lsic_image_plane(const struct LsicImage *image,
                                 uint32_t channel,
                                 const uint8_t **data,
                                 uintptr_t *len);

// # Safety
// `image` must come from this library and not be used afterwards. NULL is ignored.
void lsic_image_free(struct LsicImage *image);

// Encrypts an image into serialized container bytes. With `embed_noise`
// set, noise comes from `noise_seed` when `use_seed` is true and from the
// OS otherwise.
//
// # Safety
// Handles must be live; `out` must be writable.
enum LsicStatus lsic_encrypt_image(const struct LsicSchedule *schedule,
                                   const struct LsicImage *image,
                                   bool embed_noise,
                                   bool use_seed,
                                   uint64_t noise_seed,
                                   struct LsicBuffer **out);

// Parses container bytes and decrypts them into a new image.
//
// # Safety
// `schedule` must be live; `data` must point to `len` readable bytes; `out` must be writable.
enum LsicStatus lsic_decrypt_image(const struct LsicSchedule *schedule,
                                   const uint8_t *data,
                                   uintptr_t len,
                                   struct LsicImage **out);

// Encrypts one 256x256 block (`LSIC_BLOCK_BYTES` bytes, row-major).
// `input` and `output` may alias.
//
// # Safety
// `input` must be readable and `output` writable for `LSIC_BLOCK_BYTES` bytes.
enum LsicStatus lsic_encrypt_block(const struct LsicSchedule *schedule,
                                   const uint8_t *input,
                                   uint8_t *output,
                                   bool embed_noise,
                                   bool use_seed,
                                   uint64_t noise_seed);

// Decrypts one 256x256 block. `input` and `output` may alias.
//
// # Safety
// `input` must be readable and `output` writable for `LSIC_BLOCK_BYTES` bytes.
enum LsicStatus lsic_decrypt_block(const struct LsicSchedule *schedule,
                                   const uint8_t *input,
                                   uint8_t *output);

// # Safety
// `buffer` must be a live handle.
const uint8_t *lsic_buffer_data(const struct LsicBuffer *buffer);

// # Safety
// `buffer` must be a live handle.
uintptr_t lsic_buffer_len(const struct LsicBuffer *buffer);

// # Safety
// `buffer` must come from this library and not be used afterwards. NULL is ignored.
void lsic_buffer_free(struct LsicBuffer *buffer);

// Shannon entropy (bits per byte) of `len` bytes.
//
// # Safety
// `data` must point to `len` readable bytes; `out` must be writable.
enum LsicStatus lsic_entropy(const uint8_t *data, uintptr_t len, double *out);

// NPCR in percent between two equal-length byte arrays.
//
// # Safety
// `a` and `b` must each point to `len` readable bytes; `out` must be writable.
enum LsicStatus lsic_npcr(const uint8_t *a, const uint8_t *b, uintptr_t len, double *out);

// UACI in percent (normalised by 255) between two equal-length byte arrays.
//
// # Safety
// `a` and `b` must each point to `len` readable bytes; `out` must be writable.
enum LsicStatus lsic_uaci(const uint8_t *a, const uint8_t *b, uintptr_t len, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LSIC_H */
