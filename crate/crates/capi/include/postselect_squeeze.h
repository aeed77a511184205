#ifndef POSTSELECT_SQUEEZE_H
#define POSTSELECT_SQUEEZE_H

/* Generated by cbindgen from postselect-squeeze-capi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result code of every C-ABI call.
typedef enum PsStatus {
  PS_STATUS_OK = 0,
  PS_STATUS_NULL_POINTER = 1,
  PS_STATUS_INVALID_ARGUMENT = 2,
  PS_STATUS_INVALID_GEOMETRY = 3,
  PS_STATUS_INVALID_PARAMETER = 4,
  PS_STATUS_CAPACITY_EXCEEDED = 5,
  PS_STATUS_IMPOSSIBLE_DETECTION = 6,
  PS_STATUS_INDETERMINATE_WITNESS = 7,
  PS_STATUS_UNSUPPORTED_ORDER = 8,
  PS_STATUS_NO_SQUEEZING_POSSIBLE = 9,
  PS_STATUS_IO_ERROR = 10,
} PsStatus;

// Operator that minimized the squeezing functional.
typedef enum PsMinimizer {
  PS_MINIMIZER_X = 0,
  PS_MINIMIZER_Y = 1,
  PS_MINIMIZER_Z = 2,
  // Optimized variant: see the `direction` field of the report.
  PS_MINIMIZER_DIRECTION = 3,
} PsMinimizer;

typedef enum PsVerdict {
  PS_VERDICT_ENTANGLED = 0,
  PS_VERDICT_NOT_DETECTED = 1,
  PS_VERDICT_INDETERMINATE = 2,
} PsVerdict;

// Opaque dense 2^N state (pure vector or density matrix).
typedef struct PsDenseState PsDenseState;

// Opaque emitter geometry.
typedef struct PsGeometry PsGeometry;

// Opaque separable initial state.
typedef struct PsProductState PsProductState;

// Moments of the (X, Y, Z) triple; `second` is row-major 3×3.
typedef struct PsFieldMoments {
  size_t n;
  double first[3];
  double second[9];
  double weight;
} PsFieldMoments;

// Squeezing-parameter outcome. When `verdict` is indeterminate, `xi2` and
// `db` are NaN; ξ² = 0 reports `db` = +∞.
typedef struct PsSqueezingReport {
  double xi2;
  double db;
  double numerator;
  double denominator;
  enum PsMinimizer minimizer;
  double direction[3];
  enum PsVerdict verdict;
} PsSqueezingReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Static description of a status code.
const char *ps_status_message(enum PsStatus status);

// Regular chain of `n` emitters spaced by `step` along `axis` (3-vector,
// normalized internally).
//
// # Safety
// `axis` must point to 3 doubles; `out` must be a valid pointer.
enum PsStatus ps_geometry_chain(size_t n, double step, const double *axis, struct PsGeometry **out);

// Ring of `n` emitters with the given radius in the plane spanned by the
// orthonormal pair (`e1`, `e2`).
//
// # Safety
// `e1`/`e2` must point to 3 doubles each; `out` must be valid.
enum PsStatus ps_geometry_ring(size_t n,
                               double radius,
                               const double *e1,
                               const double *e2,
                               struct PsGeometry **out);

// `n` points uniform in a ball; bit-reproducible for a fixed seed.
//
// # Safety
// `out` must be valid.
enum PsStatus ps_geometry_sphere(size_t n, double radius, uint64_t seed, struct PsGeometry **out);

// # Safety
// `geometry` must come from a `ps_geometry_*` constructor (or be null).
void ps_geometry_free(struct PsGeometry *geometry);

// # Safety
// Pointers must be valid.
enum PsStatus ps_geometry_len(const struct PsGeometry *geometry, size_t *out);

// Writes position `index` as 3 doubles.
//
// # Safety
// `out` must point to 3 doubles.
enum PsStatus ps_geometry_position(const struct PsGeometry *geometry, size_t index, double *out);

// Structure factor f(Δ) = |Σ_p e^{-iΔ·r_p}|² − N for a 3-vector Δ.
//
// # Safety
// `delta` must point to 3 doubles; `out` must be valid.
enum PsStatus ps_structure_factor(const struct PsGeometry *geometry,
                                  const double *delta,
                                  double *out);

// Coherent spin state at polar angle `theta` with drive direction `k_l`.
//
// # Safety
// `k_l` must point to 3 doubles; handles must be valid.
enum PsStatus ps_state_css(double theta,
                           const double *k_l,
                           const struct PsGeometry *geometry,
                           struct PsProductState **out);

// Driven steady state at saturation `s` (INFINITY gives the fully mixed
// state).
//
// # Safety
// `k_l` must point to 3 doubles; handles must be valid.
enum PsStatus ps_state_steady(double s,
                              const double *k_l,
                              const struct PsGeometry *geometry,
                              struct PsProductState **out);

// Coherence-free population state at angle `theta_bar`.
//
// # Safety
// Handles must be valid.
enum PsStatus ps_state_population(double theta_bar,
                                  const struct PsGeometry *geometry,
                                  struct PsProductState **out);

// # Safety
// `state` must come from a `ps_state_*` constructor (or be null).
void ps_state_free(struct PsProductState *state);

// Expands a product state into its dense 2^N form (pure vector when every
// factor is rank one, density matrix otherwise).
//
// # Safety
// Handles must be valid.
enum PsStatus ps_dense_realize(const struct PsProductState *state, struct PsDenseState **out);

// Conditions a dense state on `nu` detections whose directions are packed
// as `nu` consecutive 3-vectors in `directions`. Writes the normalized
// state and the event weight.
//
// # Safety
// `directions` must point to 3·nu doubles; handles must be valid.
enum PsStatus ps_dense_postselect(const struct PsDenseState *dense,
                                  const struct PsGeometry *geometry,
                                  const double *directions,
                                  size_t nu,
                                  struct PsDenseState **out,
                                  double *weight);

// First and symmetrized second moments of (X_kw, Y_kw, Z).
//
// # Safety
// `k_w` must point to 3 doubles; handles must be valid.
enum PsStatus ps_dense_field_moments(const struct PsDenseState *dense,
                                     const struct PsGeometry *geometry,
                                     const double *k_w,
                                     struct PsFieldMoments *out);

// # Safety
// Handles must be valid.
enum PsStatus ps_dense_purity(const struct PsDenseState *dense, double *out);

// Scattered intensity ⟨Ê⁻_kw Ê⁺_kw⟩.
//
// # Safety
// `k_w` must point to 3 doubles; handles must be valid.
enum PsStatus ps_dense_intensity(const struct PsDenseState *dense,
                                 const struct PsGeometry *geometry,
                                 const double *k_w,
                                 double *out);

// # Safety
// `dense` must come from this library (or be null).
void ps_dense_free(struct PsDenseState *dense);

// ξ² = (N − 2ν)²/N² for the fully excited state.
//
// # Safety
// `out` must be valid.
enum PsStatus ps_xi2_fully_excited(size_t n, size_t nu, double *out);

// ξ² of the fully mixed state after ν detections, with structure factor f.
//
// # Safety
// `out` must be valid.
enum PsStatus ps_xi2_fully_mixed(size_t n, size_t nu, double f, double *out);

// Optimal photon number for the fully mixed state (k_d = k_w).
//
// # Safety
// Out-pointers must be valid.
enum PsStatus ps_optimal_nu_fully_mixed(size_t n, double *nu_real, size_t *nu_int, double *xi2);

// ξ² of a homogeneous population state after ν detections (k_d = k_w).
//
// # Safety
// `out` must be valid.
enum PsStatus ps_xi2_population(size_t n, size_t nu, double theta_bar, double *out);

// Smallest squeezing photon number of a population state.
//
// # Safety
// `out` must be valid.
enum PsStatus ps_population_threshold(size_t n, double theta_bar, size_t *out);

// Population-state moments after ν detections with structure factor f.
//
// # Safety
// `out` must be valid.
enum PsStatus ps_population_moments(size_t n,
                                    size_t nu,
                                    double theta_bar,
                                    double f,
                                    struct PsFieldMoments *out);

// Moments of an arbitrary product state after one detection at `k_d`,
// measured along k_w = k_d.
//
// # Safety
// `k_d` must point to 3 doubles; handles must be valid.
enum PsStatus ps_single_photon_moments(const struct PsProductState *state,
                                       const double *k_d,
                                       struct PsFieldMoments *out);

// Phase-free homogeneous CSS moments after one detection.
//
// # Safety
// `out` must be valid.
enum PsStatus ps_homogeneous_css_moments(size_t n, double theta, struct PsFieldMoments *out);

// Intensity at `k_w` of a product state conditioned on one detection at
// `k_d`.
//
// # Safety
// Direction pointers must point to 3 doubles; handles must be valid.
enum PsStatus ps_single_photon_intensity(const struct PsProductState *state,
                                         const double *k_d,
                                         const double *k_w,
                                         double *out);

// Squeezing parameter minimized over the fixed (X, Y, Z) triple.
//
// # Safety
// Pointers must be valid.
enum PsStatus ps_xi2_fixed(const struct PsFieldMoments *moments, struct PsSqueezingReport *out);

// Squeezing parameter minimized over every direction of the triple.
//
// # Safety
// Pointers must be valid.
enum PsStatus ps_xi2_optimal(const struct PsFieldMoments *moments, struct PsSqueezingReport *out);

// ξ₁² = Σ variances / 2N.
//
// # Safety
// Pointers must be valid.
enum PsStatus ps_xi1(const struct PsFieldMoments *moments, double *out);

// ξ₃², minimized over the axis assignment; indeterminate when every
// denominator is nonpositive.
//
// # Safety
// Pointers must be valid.
enum PsStatus ps_xi3(const struct PsFieldMoments *moments, double *out);

// Witness triple (w₁, w₂, w₃); negative values signal entanglement.
//
// # Safety
// Pointers must be valid.
enum PsStatus ps_witness_values(const struct PsFieldMoments *moments,
                                double *w1,
                                double *w2,
                                double *w3);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* POSTSELECT_SQUEEZE_H */
