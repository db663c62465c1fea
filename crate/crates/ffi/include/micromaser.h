#ifndef MICROMASER_H
#define MICROMASER_H

/* Generated by cbindgen from the micromaser-ffi crate; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every call. Out-parameters are written only on
 * `MM_STATUS_OK`.
 */
typedef enum MmStatus {
  /**
   * Success.
   */
  MM_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  MM_STATUS_NULL_ARGUMENT = 1,
  /**
   * A value argument is outside the operation's domain.
   */
  MM_STATUS_INVALID_PARAMETER = 2,
  /**
   * An internal invariant failed or a panic was caught at the boundary.
   */
  MM_STATUS_INTERNAL = 3,
} MmStatus;

/**
 * Opaque handle to a cavity-field density matrix. Created by the
 * `mm_*_state` constructors and released by [`mm_state_free`].
 */
typedef struct MmState MmState;

/**
 * Scalar field statistics.
 *
 * `mandel_q` is meaningful only when `has_mandel_q` is 1; the Mandel Q
 * parameter is undefined for a state with zero mean photon number.
 */
typedef struct MmDiagnostics {
  /**
   * Purity deficit 1 - tr(rho^2).
   */
  double zeta;
  /**
   * Mean photon number.
   */
  double mean_n;
  /**
   * Photon-number variance.
   */
  double variance_n;
  /**
   * Mandel Q parameter, or 0 when `has_mandel_q` is 0.
   */
  double mandel_q;
  /**
   * 1 when `mandel_q` holds a defined value.
   */
  uint8_t has_mandel_q;
} MmDiagnostics;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Create a thermal field state with mean photon number `mean_n`.
 *
 * `tail_tol` is the truncation budget for neglected Fock-space mass; pass
 * 0 to use the library default.
 *
 * # Safety
 *
 * `out` must be a valid pointer. On `MM_STATUS_OK` it receives an owned
 * handle that must be released with [`mm_state_free`].
 */
enum MmStatus mm_thermal_state(double mean_n, double tail_tol, struct MmState **out);

/**
 * Create a phase-averaged coherent state with mean photon number `mean_n`
 * (a Poissonian photon-number mixture with no off-diagonal coherence).
 *
 * `tail_tol` is the truncation budget for neglected Fock-space mass; pass
 * 0 to use the library default.
 *
 * # Safety
 *
 * `out` must be a valid pointer. On `MM_STATUS_OK` it receives an owned
 * handle that must be released with [`mm_state_free`].
 */
enum MmStatus mm_dephased_coherent_state(double mean_n, double tail_tol, struct MmState **out);

/**
 * Create the photon-number eigenstate |n> stored with at least `dim`
 * Fock levels. Fails unless n < dim.
 *
 * # Safety
 *
 * `out` must be a valid pointer. On `MM_STATUS_OK` it receives an owned
 * handle that must be released with [`mm_state_free`].
 */
enum MmStatus mm_fock_state(size_t n, size_t dim, struct MmState **out);

/**
 * Duplicate a state handle. The copy evolves independently.
 *
 * # Safety
 *
 * `state` must be a live handle from this API and `out` a valid pointer.
 * On `MM_STATUS_OK`, `out` receives an owned handle that must be released
 * with [`mm_state_free`].
 */
enum MmStatus mm_state_clone(const struct MmState *state, struct MmState **out);

/**
 * Release a state handle. Null is a no-op. The handle must not be used
 * afterwards.
 *
 * # Safety
 *
 * `state` must be null or a live handle from this API that is released
 * exactly once.
 */
void mm_state_free(struct MmState *state);

/**
 * Number of Fock levels the state currently stores.
 *
 * # Safety
 *
 * `state` must be a live handle from this API and `out` a valid pointer.
 */
enum MmStatus mm_state_dim(const struct MmState *state, size_t *out);

/**
 * Read purity deficit, photon-number mean and variance, and the Mandel Q
 * parameter of the state.
 *
 * # Safety
 *
 * `state` must be a live handle from this API and `out` a valid pointer.
 */
enum MmStatus mm_state_diagnostics(const struct MmState *state, struct MmDiagnostics *out);

/**
 * Probability of finding exactly `n` photons. Indices at or beyond the
 * stored cutoff read as 0.
 *
 * # Safety
 *
 * `state` must be a live handle from this API and `out` a valid pointer.
 */
enum MmStatus mm_photon_probability(const struct MmState *state, size_t n, double *out);

/**
 * Send `n_atoms` identically prepared atoms through the cavity, updating
 * the state in place.
 *
 * The atom enters as atom_a |excited> + atom_b e^{i atom_phi} |ground>
 * with atom_a^2 + atom_b^2 = 1. `delta_over_lambda` and
 * `chi_over_lambda` are the two-photon detuning and the Stark-shift
 * slope in units of the coupling; `lambda_t` is the transit time in the
 * same units. On any error the state is left unchanged.
 *
 * # Safety
 *
 * `state` must be a live handle from this API, not aliased by a
 * concurrent call.
 */
enum MmStatus mm_apply_kicks(struct MmState *state,
                             double atom_a,
                             double atom_b,
                             double atom_phi,
                             double delta_over_lambda,
                             double chi_over_lambda,
                             double lambda_t,
                             size_t n_atoms);

/**
 * Evaluate the s-parameterized quasiprobability of the state at the
 * phase-space point beta_re + i beta_im. `s` must lie in [-1, 1); -1 is
 * the Husimi function and 0 the Wigner function.
 *
 * # Safety
 *
 * `state` must be a live handle from this API and `out` a valid pointer.
 */
enum MmStatus mm_quasiprob_value(const struct MmState *state,
                                 double beta_re,
                                 double beta_im,
                                 double s,
                                 double *out);

/**
 * Static description of a status code. Unrecognized codes are reported
 * as such; the returned string is never null and lives for the lifetime
 * of the program.
 */
const char *mm_status_message(int status);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MICROMASER_H */
