#ifndef GDISCORD_H
#define GDISCORD_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes.
 */
typedef enum GdStatus {
  GD_OK = 0,
  GD_ERR_DOMAIN = 1,
  GD_ERR_NUMERICAL_FAILURE = 2,
  GD_ERR_INVALID_CHANNEL_PARAMS = 3,
  GD_ERR_NOT_SQUEEZED_THERMAL_FORM = 4,
  GD_ERR_NOT_BONA_FIDE = 5,
  GD_ERR_OUT_OF_FAMILY = 6,
  GD_ERR_MIXED_SEED = 7,
  GD_ERR_PARSE = 8,
  GD_ERR_NULL_POINTER = 9,
  GD_ERR_INDEX_OUT_OF_RANGE = 10,
  GD_ERR_PANIC = 11,
} GdStatus;

typedef enum GdMeasurementKind {
  GD_MEAS_SQUEEZED = 0,
  GD_MEAS_HOMODYNE_Q = 1,
  GD_MEAS_HOMODYNE_P = 2,
  /**
   * Reported for discord reports without a witness.
   */
  GD_MEAS_NONE = 3,
} GdMeasurementKind;

typedef enum GdChannelForm {
  GD_FORM_A1 = 0,
  GD_FORM_A2 = 1,
  GD_FORM_B1 = 2,
  GD_FORM_B2_IDENTITY = 3,
  GD_FORM_B2_ADDITIVE = 4,
  GD_FORM_C_LOSSY = 5,
  GD_FORM_C_AMPLIFIER = 6,
  GD_FORM_D = 7,
} GdChannelForm;

/**
 * Opaque two-mode covariance matrix.
 */
typedef struct GdCm GdCm;

/**
 * Opaque set of sampled family members.
 */
typedef struct GdSampleSet GdSampleSet;

/**
 * Rank-one Gaussian measurement. `u` is read only for `GD_MEAS_SQUEEZED`;
 * `u = 1` is heterodyne detection.
 */
typedef struct GdMeasurement {
  enum GdMeasurementKind kind;
  double u;
  double phi;
} GdMeasurement;

typedef struct GdDiscordReport {
  double s_a;
  double s_b;
  double s_ab;
  double i_ab;
  double s_min_cond;
  double classical_corr;
  double discord;
  struct GdMeasurement witness;
} GdDiscordReport;

typedef struct GdFamilyParams {
  double b;
  double r;
  double tau;
  double eta;
  /**
   * +1 or -1.
   */
  int32_t sign;
  /**
   * Output squeezing; ignored on input.
   */
  double xi;
} GdFamilyParams;

typedef struct GdSamplePoint {
  double c;
  double cp;
  double r;
  double tau;
  double eta;
  int32_t sign;
} GdSamplePoint;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread. Valid until the next
 * call into the library from the same thread; never null.
 */
const char *gd_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *gd_version(void);

/**
 * Sets the process-wide bona fide tolerance (default 1e-9).
 */
enum GdStatus gd_set_validation_tolerance(double tol);

/**
 * Creates `V(a, b, c, cp)`. The matrix is not validated.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum GdStatus gd_cm_from_normal_form(double a, double b, double c, double cp, struct GdCm **out);

/**
 * Creates a covariance matrix from 16 row-major entries in quadrature
 * order `(qA, pA, qB, pB)`. Fails if the matrix is not symmetric.
 *
 * # Safety
 * `entries` must point to 16 doubles; `out` must be a valid pointer.
 */
enum GdStatus gd_cm_from_entries(const double *entries, struct GdCm **out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `cm` must come from this library and not be used afterwards.
 */
void gd_cm_free(struct GdCm *cm);

/**
 * Copies the 16 row-major entries.
 *
 * # Safety
 * `cm` must be a live handle; `out` must hold 16 doubles.
 */
enum GdStatus gd_cm_entries(const struct GdCm *cm, double *out);

/**
 * Symplectic eigenvalues `nu_minus <= nu_plus`.
 *
 * # Safety
 * `cm` must be a live handle; out pointers must be valid.
 */
enum GdStatus gd_symplectic_spectrum(const struct GdCm *cm, double *nu_minus, double *nu_plus);

/**
 * Writes 1 if the state is bona fide, else 0.
 *
 * # Safety
 * `cm` must be a live handle; `out` must be valid.
 */
enum GdStatus gd_is_bona_fide(const struct GdCm *cm, int32_t *out);

/**
 * Thermal entropy `h(x)` in bits.
 *
 * # Safety
 * `out` must be valid.
 */
enum GdStatus gd_entropy_h(double x, double *out);

/**
 * Discord by numeric minimisation over Gaussian measurements.
 *
 * # Safety
 * `cm` must be a live handle; `out` must be valid.
 */
enum GdStatus gd_discord_numeric(const struct GdCm *cm, struct GdDiscordReport *out);

/**
 * Closed-form discord of a family member.
 *
 * # Safety
 * Pointers must be valid.
 */
enum GdStatus gd_discord_closed_form(const struct GdFamilyParams *params,
                                     struct GdDiscordReport *out);

/**
 * Family witness of a state (reduced to normal form first);
 * `GdErrOutOfFamily` if none exists.
 *
 * # Safety
 * `cm` must be a live handle; `out` must be valid.
 */
enum GdStatus gd_membership(const struct GdCm *cm, struct GdFamilyParams *out);

/**
 * Normal form of the family member described by `params`.
 *
 * # Safety
 * Pointers must be valid.
 */
enum GdStatus gd_family_cm(const struct GdFamilyParams *params, struct GdCm **out);

/**
 * `(tau, eta)` of the squeezed thermal state `V(a, b, c, -c)`.
 *
 * # Safety
 * Out pointers must be valid.
 */
enum GdStatus gd_decompose_squeezed_thermal(double a, double b, double c, double *tau, double *eta);

/**
 * Canonical form of the channel `(tau, eta)`. `omega` receives the
 * thermal parameter, or NaN for forms without one.
 *
 * # Safety
 * Out pointers must be valid.
 */
enum GdStatus gd_classify(double tau, double eta, enum GdChannelForm *form, double *omega);

/**
 * Conditional state of mode A after measuring mode B with outcome `k`.
 * `mean` holds the four first moments (may be null for zero mean);
 * `out_cm` receives the 2x2 covariance in row-major order.
 *
 * # Safety
 * `cm` must be a live handle; `k` must hold 2 doubles, `mean` 4 (or be
 * null), `out_mean` 2 and `out_cm` 4.
 */
enum GdStatus gd_condition_on_outcome(const struct GdCm *cm,
                                      const double *mean,
                                      const struct GdMeasurement *measurement,
                                      const double *k,
                                      double *out_mean,
                                      double *out_cm);

/**
 * Draws `n` family members at fixed `(a, b)`; the result depends only on
 * `seed`.
 *
 * # Safety
 * `out` must be valid.
 */
enum GdStatus gd_sample_family(double a,
                               double b,
                               uintptr_t n,
                               uint64_t seed,
                               struct GdSampleSet **out);

/**
 * Number of points in a sample set (0 for null).
 *
 * # Safety
 * `set` must be a live handle or null.
 */
uintptr_t gd_sample_set_len(const struct GdSampleSet *set);

/**
 * Copies point `index`.
 *
 * # Safety
 * `set` must be a live handle; `out` must be valid.
 */
enum GdStatus gd_sample_set_get(const struct GdSampleSet *set,
                                uintptr_t index,
                                struct GdSamplePoint *out);

/**
 * Releases a sample set. Null is ignored.
 *
 * # Safety
 * `set` must come from this library and not be used afterwards.
 */
void gd_sample_set_free(struct GdSampleSet *set);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GDISCORD_H */
