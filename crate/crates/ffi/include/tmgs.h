#ifndef TMGS_H
#define TMGS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum TmgsStatus {
  TMGS_STATUS_OK = 0,
  TMGS_STATUS_INVALID_INPUT = 1,
  TMGS_STATUS_NUMERICAL_FAILURE = 2,
  TMGS_STATUS_DEGENERATE_BRANCH = 3,
  // Finite, symmetric input that is not a quantum state.
  TMGS_STATUS_UNPHYSICAL = 4,
  TMGS_STATUS_NULL_POINTER = 5,
  // A Rust panic was caught at the boundary.
  TMGS_STATUS_INTERNAL = 6,
} TmgsStatus;

typedef enum TmgsOrdering {
  TMGS_ORDERING_Q1P1Q2P2 = 0,
  TMGS_ORDERING_Q1Q2P1P2 = 1,
} TmgsOrdering;

// Opaque analyzed state.
typedef struct TmgsState TmgsState;

typedef struct TmgsParams {
  double b1;
  double b2;
  double c;
  double d;
} TmgsParams;

typedef struct TmgsSpectrum {
  double kappa_plus;
  double kappa_minus;
  double kappa_plus_pt;
  double kappa_minus_pt;
  double det_v;
  double d;
  double d_pt;
} TmgsSpectrum;

typedef struct TmgsIndicators {
  double e_m;
  double f_m;
  // Valid only when `has_g_m` is nonzero.
  double g_m;
  int32_t has_g_m;
  double f_tilde;
  double u1_tilde;
  double u2_tilde;
  // 1 when the PPT test detects entanglement.
  int32_t entangled;
  // 1 when every embedded cross-check passed.
  int32_t checks_passed;
} TmgsIndicators;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Analyzes a 4×4 row-major covariance matrix (16 doubles).
//
// # Safety
// `matrix` must point to 16 readable doubles and `out` must be writable.
enum TmgsStatus tmgs_state_from_matrix(const double *matrix,
                                       enum TmgsOrdering ordering,
                                       struct TmgsState **out);

// Analyzes the standard-form state with the given parameters.
//
// # Safety
// `out` must be writable.
enum TmgsStatus tmgs_state_from_params(struct TmgsParams params, struct TmgsState **out);

// Releases a state. Null is ignored.
//
// # Safety
// `state` must come from a constructor above and not be used afterwards.
void tmgs_state_free(struct TmgsState *state);

// Standard-form parameters extracted from the input.
//
// # Safety
// `state` must be live and `out` writable.
enum TmgsStatus tmgs_state_params(const struct TmgsState *state, struct TmgsParams *out);

// Symplectic spectra of the state and of its partial transpose.
//
// # Safety
// `state` must be live and `out` writable.
enum TmgsStatus tmgs_state_spectrum(const struct TmgsState *state, struct TmgsSpectrum *out);

// Minimized indicators and the verdict.
//
// # Safety
// `state` must be live and `out` writable.
enum TmgsStatus tmgs_state_indicators(const struct TmgsState *state, struct TmgsIndicators *out);

// Full report as a JSON string; release it with [`tmgs_string_free`].
//
// # Safety
// `state` must be live and `out` writable.
enum TmgsStatus tmgs_state_report_json(const struct TmgsState *state, char **out);

// # Safety
// `s` must come from this library and not be used afterwards. Null is ignored.
void tmgs_string_free(char *s);

// Message for the last failed call on this thread, or null. Valid until the
// next call into the library on the same thread.
const char *tmgs_last_error(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TMGS_H */
