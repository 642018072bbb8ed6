/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#ifndef GAUSSCAP_H
#define GAUSSCAP_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum GcStatus {
  GC_STATUS_OK = 0,
  GC_STATUS_NULL_POINTER = 1,
  GC_STATUS_DOMAIN = 2,
  GC_STATUS_VALIDATION = 3,
  GC_STATUS_SINGULAR = 4,
  GC_STATUS_CONVERGENCE = 5,
  GC_STATUS_CUTOFF = 6,
  GC_STATUS_INVALID_STATE = 7,
  GC_STATUS_CONDITIONING = 8,
  GC_STATUS_NON_QUADRATIC = 9,
  GC_STATUS_PANIC = 10,
} GcStatus;

/*
 Lossy channel with additive Gaussian noise.
 */
typedef struct GcChannel GcChannel;

/*
 Polynomial perturbation of a thermal product state.
 */
typedef struct GcPerturbation GcPerturbation;

/*
 Coherent information in bits with its entropy terms.
 */
typedef struct GcCoherentInfo {
  double value;
  double term_out;
  double term_a;
  double term_b;
} GcCoherentInfo;

/*
 Second-order entropy shifts in nats.
 */
typedef struct GcShifts {
  double d_s_in;
  double d_s_out;
  double d_s_joint;
  double d_ic;
} GcShifts;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message of the last failed call on this thread, or NULL. The pointer
 stays valid until the next call into this library on the same thread.
 */
const char *gc_last_error(void);

/*
 Library version as a static NUL-terminated string.
 */
const char *gc_version(void);

/*
 # Safety
 `out` must be valid for writes.
 */
enum GcStatus gc_channel_new(double eta, double n_noise, struct GcChannel **out);

/*
 # Safety
 `channel` must come from [`gc_channel_new`] and not be used afterwards.
 */
void gc_channel_free(struct GcChannel *channel);

/*
 Capacity formula value in bits; `+INFINITY` for the noiseless identity.

 # Safety
 `channel` must be a live handle and `out` valid for writes.
 */
enum GcStatus gc_capacity(const struct GcChannel *channel, double *out);

/*
 # Safety
 `channel` must be a live handle and `out` valid for writes.
 */
enum GcStatus gc_thermal_coherent_info(const struct GcChannel *channel,
                                       double n_mean,
                                       struct GcCoherentInfo *out);

/*
 # Safety
 `channel` must be a live handle and `out` valid for writes.
 */
enum GcStatus gc_gaussian_coherent_info(const struct GcChannel *channel,
                                        double energy,
                                        double x,
                                        struct GcCoherentInfo *out);

/*
 Derivative of the coherent information in `x` at fixed energy, in bits.

 # Safety
 `channel` must be a live handle and `out` valid for writes.
 */
enum GcStatus gc_coherent_info_dx(const struct GcChannel *channel,
                                  double energy,
                                  double x,
                                  double *out);

/*
 Williamson spectrum of a `2n x 2n` covariance matrix given row-major,
 written in descending order to `out[0..n]`.

 # Safety
 `cov` must hold `4 n²` readable values and `out` `n` writable values.
 */
enum GcStatus gc_symplectic_eigenvalues(const double *cov, size_t n_modes, double *out);

/*
 Perturbation with exponents `k[0..n_modes]`, `l[0..n_modes]`, amplitude
 `c_re + i c_im` and strength `epsilon`.

 # Safety
 `k` and `l` must hold `n_modes` readable values; `out` must be valid for
 writes.
 */
enum GcStatus gc_perturbation_new(const uint32_t *k,
                                  const uint32_t *l,
                                  size_t n_modes,
                                  double c_re,
                                  double c_im,
                                  double epsilon,
                                  struct GcPerturbation **out);

/*
 # Safety
 `p` must come from [`gc_perturbation_new`] and not be used afterwards.
 */
void gc_perturbation_free(struct GcPerturbation *p);

/*
 `Tr(φ²/ρ)` for the perturbation on a thermal product of mean `n_mean`.

 # Safety
 `p` must be a live handle and `out` valid for writes.
 */
enum GcStatus gc_moment_trace(const struct GcPerturbation *p, double n_mean, double *out);

/*
 # Safety
 Both handles must be live and `out` valid for writes.
 */
enum GcStatus gc_entropy_shifts(const struct GcPerturbation *p,
                                const struct GcChannel *channel,
                                double n_mean,
                                struct GcShifts *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GAUSSCAP_H */
