#ifndef TRAJSIM_H
#define TRAJSIM_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stddef.h>
#include <stdint.h>

/**
 * Result of every fallible call. Values 2–5 match the CLI exit codes.
 */
typedef enum TrajsimStatus {
  TRAJSIM_STATUS_OK = 0,
  TRAJSIM_STATUS_NULL_POINTER = 1,
  TRAJSIM_STATUS_INVALID_ARGUMENT = 2,
  TRAJSIM_STATUS_IO = 3,
  TRAJSIM_STATUS_DATA = 4,
  TRAJSIM_STATUS_NUMERIC = 5,
  TRAJSIM_STATUS_PANIC = 6,
} TrajsimStatus;

typedef enum TrajsimDistance {
  TRAJSIM_DISTANCE_EUCLIDEAN = 0,
  TRAJSIM_DISTANCE_COSINE = 1,
} TrajsimDistance;

typedef enum TrajsimNormalization {
  TRAJSIM_NORMALIZATION_CONVEX = 0,
  TRAJSIM_NORMALIZATION_L2 = 1,
} TrajsimNormalization;

/**
 * Dense row-major matrix of doubles.
 */
typedef struct TrajsimMatrix TrajsimMatrix;

/**
 * Fitted ridge regression.
 */
typedef struct TrajsimRidge TrajsimRidge;

/**
 * Ordered sequence of equal-length state vectors.
 */
typedef struct TrajsimTrajectory TrajsimTrajectory;

typedef struct TrajsimDraConfig {
  double beta;
  double alpha_penalty;
  double epsilon;
  enum TrajsimNormalization normalization;
  /**
   * Nonzero clamps negative per-step scores to zero.
   */
  uint8_t clamp_negative;
} TrajsimDraConfig;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copies the last error message of this thread into `buf` (NUL-terminated,
 * truncated to `len`). Returns the length needed including the NUL.
 */
size_t trajsim_last_error_message(char *buf, size_t len);

/**
 * Library version as a static NUL-terminated string.
 */
const char *trajsim_version(void);

enum TrajsimStatus trajsim_matrix_new(size_t rows,
                                      size_t cols,
                                      const double *data,
                                      struct TrajsimMatrix **out);

void trajsim_matrix_free(struct TrajsimMatrix *m);

enum TrajsimStatus trajsim_matrix_shape(const struct TrajsimMatrix *m, size_t *rows, size_t *cols);

/**
 * Copies the row-major values into `out`, which must hold `len ≥ rows·cols` doubles.
 */
enum TrajsimStatus trajsim_matrix_copy_data(const struct TrajsimMatrix *m, double *out, size_t len);

/**
 * Reads a two-axis tensor file as a matrix.
 */
enum TrajsimStatus trajsim_matrix_read(const char *path, struct TrajsimMatrix **out);

/**
 * Writes a matrix as a double-precision tensor file.
 */
enum TrajsimStatus trajsim_matrix_write(const struct TrajsimMatrix *m, const char *path);

enum TrajsimStatus trajsim_cka(const struct TrajsimMatrix *a,
                               const struct TrajsimMatrix *b,
                               double *out);

/**
 * Spearman correlation between the RDMs of the rows of `a` and `b`.
 */
enum TrajsimStatus trajsim_rsa(const struct TrajsimMatrix *a,
                               const struct TrajsimMatrix *b,
                               enum TrajsimDistance distance,
                               double *out);

enum TrajsimStatus trajsim_ridge_fit(const struct TrajsimMatrix *features,
                                     const struct TrajsimMatrix *targets,
                                     double alpha,
                                     struct TrajsimRidge **out);

enum TrajsimStatus trajsim_ridge_predict(const struct TrajsimRidge *fit,
                                         const struct TrajsimMatrix *features,
                                         struct TrajsimMatrix **out);

/**
 * Weight matrix of a fit, `features × targets`.
 */
enum TrajsimStatus trajsim_ridge_weights(const struct TrajsimRidge *fit,
                                         struct TrajsimMatrix **out);

void trajsim_ridge_free(struct TrajsimRidge *fit);

/**
 * Matrix-based Rényi entropy (nats) of the rows of `z`.
 */
enum TrajsimStatus trajsim_matrix_entropy(const struct TrajsimMatrix *z, double alpha, double *out);

/**
 * Binned mutual information (nats) between two per-sample state matrices.
 * `bins = 0` selects the default bin count.
 */
enum TrajsimStatus trajsim_mutual_info(const struct TrajsimMatrix *x,
                                       const struct TrajsimMatrix *y,
                                       size_t bins,
                                       double *out);

/**
 * Largest Lyapunov exponent (nats per step) of a scalar series.
 */
enum TrajsimStatus trajsim_lyapunov(const double *series, size_t len, double *out);

/**
 * Trajectory from `steps` row-major states of length `dim`.
 */
enum TrajsimStatus trajsim_trajectory_new(size_t steps,
                                          size_t dim,
                                          const double *states,
                                          struct TrajsimTrajectory **out);

void trajsim_trajectory_free(struct TrajsimTrajectory *t);

/**
 * Default DRA configuration.
 */
struct TrajsimDraConfig trajsim_dra_config_default(void);

/**
 * DRA of two same-shape trajectories with unit-covariance step summaries.
 */
enum TrajsimStatus trajsim_dra(const struct TrajsimTrajectory *e,
                               const struct TrajsimTrajectory *l,
                               const struct TrajsimDraConfig *cfg,
                               double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TRAJSIM_H */
