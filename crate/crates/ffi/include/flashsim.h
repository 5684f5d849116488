#ifndef FLASHSIM_H
#define FLASHSIM_H

/* Generated by cbindgen; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes mirroring the CLI exit codes.
 */
typedef enum FlashStatus {
  FLASH_STATUS_OK = 0,
  /**
   * Invalid configuration (bad key, range, file).
   */
  FLASH_STATUS_CONFIG_ERROR = 1,
  /**
   * The experiment itself failed.
   */
  FLASH_STATUS_RUNTIME_ERROR = 2,
  /**
   * Null pointer or malformed UTF-8 from the caller.
   */
  FLASH_STATUS_INVALID_ARGUMENT = 3,
} FlashStatus;

/**
 * Opaque experiment configuration handle.
 */
typedef struct FlashConfig FlashConfig;

/**
 * Summary of one completed run.
 */
typedef struct FlashSummary {
  /**
   * Best held-out test accuracy (federated mode).
   */
  double best_accuracy;
  /**
   * Round at which the best accuracy was reached.
   */
  uint64_t best_round;
  /**
   * Total simulated seconds across executed rounds.
   */
  double total_simulated_seconds;
  /**
   * Final cumulative regret (regret mode).
   */
  double final_cumulative_regret;
} FlashSummary;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static string.
 */
const char *flashsim_version(void);

/**
 * Message of the last failure on this thread (never null).
 */
const char *flashsim_last_error(void);

/**
 * Fresh configuration with built-in defaults.
 *
 * # Safety
 * `out` must point to writable storage for one pointer.
 */
enum FlashStatus flashsim_config_new(struct FlashConfig **out);

/**
 * Parse a TOML config file.
 *
 * # Safety
 * `path` must be a valid NUL-terminated string; `out` as in
 * [`flashsim_config_new`].
 */
enum FlashStatus flashsim_config_from_file(const char *path, struct FlashConfig **out);

/**
 * Parse a TOML config document from memory.
 *
 * # Safety
 * `text` must be a valid NUL-terminated string; `out` as in
 * [`flashsim_config_new`].
 */
enum FlashStatus flashsim_config_from_toml(const char *text, struct FlashConfig **out);

/**
 * Load the resolved config out of a `manifest.json` from a previous run.
 *
 * # Safety
 * `path` must be a valid NUL-terminated string; `out` as in
 * [`flashsim_config_new`].
 */
enum FlashStatus flashsim_config_from_manifest(const char *path, struct FlashConfig **out);

/**
 * Override the top-level seed.
 *
 * # Safety
 * `cfg` must be a live handle from a `flashsim_config_*` constructor.
 */
enum FlashStatus flashsim_config_set_seed(struct FlashConfig *cfg, uint64_t seed);

/**
 * Override the round budget.
 *
 * # Safety
 * `cfg` must be a live handle from a `flashsim_config_*` constructor.
 */
enum FlashStatus flashsim_config_set_rounds(struct FlashConfig *cfg, uint64_t rounds);

/**
 * Override any config key by its TOML path, e.g.
 * `flashsim_config_set(cfg, "bandit.delta", "0.1")` or
 * `flashsim_config_set(cfg, "strategy", "\"random\"")`.
 * The value uses TOML syntax, so strings need quotes.
 *
 * # Safety
 * `cfg` must be a live handle; `key` and `value` must be valid
 * NUL-terminated strings.
 */
enum FlashStatus flashsim_config_set(struct FlashConfig *cfg, const char *key, const char *value);

/**
 * Serialize the resolved config as TOML; free with `flashsim_string_free`.
 *
 * # Safety
 * `cfg` must be a live handle; `out` must point to writable storage for one
 * pointer.
 */
enum FlashStatus flashsim_config_to_toml(const struct FlashConfig *cfg, char **out);

/**
 * Run the configured experiment, writing `metrics.csv` and `manifest.json`
 * into `out_dir`. `summary` may be null if the caller only wants the files.
 *
 * # Safety
 * `cfg` must be a live handle; `out_dir` must be a valid NUL-terminated
 * string; `summary` must be null or point to writable storage for one
 * `FlashSummary`.
 */
enum FlashStatus flashsim_run(const struct FlashConfig *cfg,
                              const char *out_dir,
                              struct FlashSummary *summary);

/**
 * Release a config handle. Null is a no-op.
 *
 * # Safety
 * `cfg` must be null or a handle not yet freed.
 */
void flashsim_config_free(struct FlashConfig *cfg);

/**
 * Release a string returned by this library. Null is a no-op.
 *
 * # Safety
 * `s` must be null or a pointer returned by `flashsim_config_to_toml`.
 */
void flashsim_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FLASHSIM_H */
