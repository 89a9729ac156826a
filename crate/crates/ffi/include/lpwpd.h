#ifndef LPWPD_H
#define LPWPD_H

/* Generated by cbindgen. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum LpwpdStatus {
  LPWPD_STATUS_OK = 0,
  LPWPD_STATUS_NULL_POINTER = 1,
  LPWPD_STATUS_INVALID_INPUT = 2,
  LPWPD_STATUS_INVALID_CONFIG = 3,
  LPWPD_STATUS_SOLVER_FAILURE = 4,
  LPWPD_STATUS_BUFFER_TOO_SMALL = 5,
  LPWPD_STATUS_INTERNAL = 6,
} LpwpdStatus;

typedef enum LpwpdInit {
  LPWPD_INIT_SINGLE_CHANNEL = 0,
  LPWPD_INIT_MULTI_CHANNEL = 1,
} LpwpdInit;

/**
 * Opaque enhancer handle.
 */
typedef struct LpwpdEnhancer LpwpdEnhancer;

/**
 * Processing parameters. `ref_mic` is 0-based; `jobs == 0` uses every core.
 */
typedef struct LpwpdConfig {
  uint32_t fs;
  double p;
  size_t iterations;
  enum LpwpdInit init;
  size_t tau;
  size_t lh;
  size_t ref_mic;
  double noise_head_ms;
  double noise_tail_ms;
  size_t jobs;
} LpwpdConfig;

/**
 * Per-call counts from the last [`lpwpd_enhance`].
 */
typedef struct LpwpdStats {
  size_t num_bins;
  size_t bins_enhanced;
  size_t bins_silent;
  size_t bins_failed;
  size_t stacked_dim;
} LpwpdStats;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or NULL. Valid until the next call.
 */
const char *lpwpd_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *lpwpd_version(void);

/**
 * Fills `out` with the default parameters.
 *
 * # Safety
 * `out` must be NULL or point to writable memory for one `LpwpdConfig`.
 */
enum LpwpdStatus lpwpd_config_default(struct LpwpdConfig *out);

/**
 * Creates an enhancer. Release it with [`lpwpd_enhancer_free`].
 *
 * # Safety
 * `config` must be NULL or point to a valid `LpwpdConfig`; `out` must be NULL
 * or writable.
 */
enum LpwpdStatus lpwpd_enhancer_new(const struct LpwpdConfig *config, struct LpwpdEnhancer **out);

/**
 * # Safety
 * `handle` must be NULL or come from [`lpwpd_enhancer_new`] and not be used afterwards.
 */
void lpwpd_enhancer_free(struct LpwpdEnhancer *handle);

/**
 * Enhances `num_samples` frames of `channels`-channel interleaved audio and
 * writes `num_samples` samples of the reference channel to `out`.
 *
 * # Safety
 * `input` must hold `num_samples * channels` doubles and `out` must have room
 * for `out_len` doubles.
 */
enum LpwpdStatus lpwpd_enhance(struct LpwpdEnhancer *handle,
                               const double *input,
                               size_t num_samples,
                               size_t channels,
                               double *out,
                               size_t out_len);

/**
 * Counts from the last successful [`lpwpd_enhance`] on `handle`.
 *
 * # Safety
 * `handle` must be a live enhancer and `out` writable.
 */
enum LpwpdStatus lpwpd_enhancer_stats(const struct LpwpdEnhancer *handle, struct LpwpdStats *out);

/**
 * Frequency-weighted segmental SNR in dB of `test` against `reference`, both `len` samples.
 *
 * # Safety
 * Both inputs must hold `len` doubles and `out` must be writable.
 */
enum LpwpdStatus lpwpd_fwssnr(const double *reference,
                              const double *test,
                              size_t len,
                              uint32_t fs,
                              double *out);

/**
 * Segmental SNR in dB.
 *
 * # Safety
 * As for [`lpwpd_fwssnr`].
 */
enum LpwpdStatus lpwpd_seg_snr(const double *reference,
                               const double *test,
                               size_t len,
                               uint32_t fs,
                               double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LPWPD_H */
