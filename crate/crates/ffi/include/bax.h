#ifndef BAX_H
#define BAX_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Kernel family selector for [`bax_model_new`].
 */
typedef enum BaxKernel {
  BAX_KERNEL_SQUARED_EXPONENTIAL = 0,
  BAX_KERNEL_MATERN52 = 1,
} BaxKernel;

/**
 * Result code of every fallible call.
 */
typedef enum BaxStatus {
  BAX_STATUS_OK = 0,
  BAX_STATUS_NULL_POINTER = 1,
  BAX_STATUS_INVALID_INPUT = 2,
  BAX_STATUS_NUMERICAL = 3,
  BAX_STATUS_CONFIG = 4,
  BAX_STATUS_CONTRACT = 5,
  BAX_STATUS_NO_PATH = 6,
  BAX_STATUS_PARSE = 7,
  BAX_STATUS_IO = 8,
  BAX_STATUS_INVALID_UTF8 = 9,
  BAX_STATUS_PANIC = 10,
} BaxStatus;

/**
 * A named benchmark objective.
 */
typedef struct BaxBenchmark BaxBenchmark;

/**
 * Growable set of noisy and noiseless observations.
 */
typedef struct BaxEvidence BaxEvidence;

/**
 * GP prior.
 */
typedef struct BaxModel BaxModel;

/**
 * GP posterior given a model and evidence.
 */
typedef struct BaxPosterior BaxPosterior;

/**
 * Results of a configured experiment.
 */
typedef struct BaxResults BaxResults;

/**
 * A posterior function draw, realized lazily point by point.
 */
typedef struct BaxSample BaxSample;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread, or null after a
 * successful call. The pointer stays valid until the next call into this
 * library from the same thread.
 */
const char *bax_last_error_message(void);

/**
 * Static, NUL-terminated name of a status code.
 */
const char *bax_status_name(enum BaxStatus status);

/**
 * Creates a GP prior. `lengthscales` holds either one value (isotropic) or
 * one per input dimension.
 *
 * # Safety
 * `lengthscales` must point to `num_lengthscales` doubles and `out` must be writable.
 */
enum BaxStatus bax_model_new(enum BaxKernel kernel,
                             const double *lengthscales,
                             size_t num_lengthscales,
                             double signal_variance,
                             double prior_mean,
                             double noise_variance,
                             struct BaxModel **out);

/**
 * # Safety
 * `model` must come from [`bax_model_new`] and not be used afterwards.
 */
void bax_model_free(struct BaxModel *model);

/**
 * # Safety
 * `out` must be writable.
 */
enum BaxStatus bax_evidence_new(struct BaxEvidence **out);

/**
 * Adds a noisy observation `y` at `x`.
 *
 * # Safety
 * `evidence` must be a live handle and `x` must point to `dim` doubles.
 */
enum BaxStatus bax_evidence_push_noisy(struct BaxEvidence *evidence,
                                       const double *x,
                                       size_t dim,
                                       double y);

/**
 * Adds an exact function value `fz` at `z`.
 *
 * # Safety
 * `evidence` must be a live handle and `z` must point to `dim` doubles.
 */
enum BaxStatus bax_evidence_push_noiseless(struct BaxEvidence *evidence,
                                           const double *z,
                                           size_t dim,
                                           double fz);

/**
 * # Safety
 * `evidence` must be a live handle and `out` must be writable.
 */
enum BaxStatus bax_evidence_len(const struct BaxEvidence *evidence, size_t *out);

/**
 * # Safety
 * `evidence` must come from [`bax_evidence_new`] and not be used afterwards.
 */
void bax_evidence_free(struct BaxEvidence *evidence);

/**
 * Conditions `model` on `evidence`. Both handles remain owned by the caller.
 *
 * # Safety
 * Both handles must be live and `out` must be writable.
 */
enum BaxStatus bax_posterior_new(const struct BaxModel *model,
                                 const struct BaxEvidence *evidence,
                                 struct BaxPosterior **out);

/**
 * Predictive mean and variance at `x`. With `predict_observation` nonzero
 * the observation noise is included in the variance.
 *
 * # Safety
 * `posterior` must be live, `x` must point to `dim` doubles, outputs must be writable.
 */
enum BaxStatus bax_posterior_marginal(const struct BaxPosterior *posterior,
                                      const double *x,
                                      size_t dim,
                                      bool predict_observation,
                                      double *mean,
                                      double *variance);

/**
 * # Safety
 * `posterior` must come from [`bax_posterior_new`] and not be used afterwards.
 */
void bax_posterior_free(struct BaxPosterior *posterior);

/**
 * Differential entropy in nats of a normal with the given variance.
 *
 * # Safety
 * `out` must be writable.
 */
enum BaxStatus bax_gaussian_entropy(double variance, double *out);

/**
 * Starts a seeded posterior function draw. The sample keeps its own
 * reference to the posterior, so the posterior handle may be freed first.
 *
 * # Safety
 * `posterior` must be live and `out` must be writable.
 */
enum BaxStatus bax_sample_new(const struct BaxPosterior *posterior,
                              uint64_t seed,
                              struct BaxSample **out);

/**
 * Value of the sampled function at `x`, consistent with every earlier query.
 *
 * # Safety
 * `sample` must be live, `x` must point to `dim` doubles, `out` must be writable.
 */
enum BaxStatus bax_sample_query(struct BaxSample *sample, const double *x, size_t dim, double *out);

/**
 * # Safety
 * `sample` must come from [`bax_sample_new`] and not be used afterwards.
 */
void bax_sample_free(struct BaxSample *sample);

/**
 * Looks up a benchmark objective by name, e.g. `"branin"`.
 *
 * # Safety
 * `name` must be a NUL-terminated string and `out` must be writable.
 */
enum BaxStatus bax_benchmark_new(const char *name, struct BaxBenchmark **out);

/**
 * Input dimension of the benchmark.
 *
 * # Safety
 * `benchmark` must be live and `out` must be writable.
 */
enum BaxStatus bax_benchmark_dim(const struct BaxBenchmark *benchmark, size_t *out);

/**
 * Writes the benchmark's box bounds into `lower` and `upper`, each of length `dim`.
 *
 * # Safety
 * `benchmark` must be live and `lower`/`upper` must each hold `dim` writable doubles.
 */
enum BaxStatus bax_benchmark_bounds(const struct BaxBenchmark *benchmark,
                                    double *lower,
                                    double *upper,
                                    size_t dim);

/**
 * Evaluates the benchmark at `x`.
 *
 * # Safety
 * `benchmark` must be live, `x` must point to `dim` doubles, `out` must be writable.
 */
enum BaxStatus bax_benchmark_eval(const struct BaxBenchmark *benchmark,
                                  const double *x,
                                  size_t dim,
                                  double *out);

/**
 * # Safety
 * `benchmark` must come from [`bax_benchmark_new`] and not be used afterwards.
 */
void bax_benchmark_free(struct BaxBenchmark *benchmark);

/**
 * Runs the experiment in the TOML file at `config_path`. When `out_dir` is
 * non-null the results files are written there too. `trials` and `seed`
 * override the config when nonnegative.
 *
 * Runs that abort are recorded in the results rather than failing the call.
 *
 * # Safety
 * `config_path` must be a NUL-terminated string, `out_dir` null or one, and `out` writable.
 */
enum BaxStatus bax_experiment_run(const char *config_path,
                                  const char *out_dir,
                                  int64_t trials,
                                  int64_t seed,
                                  struct BaxResults **out);

/**
 * Number of metric rows in the results.
 *
 * # Safety
 * `results` must be live and `out` must be writable.
 */
enum BaxStatus bax_results_row_count(const struct BaxResults *results, size_t *out);

/**
 * Number of runs that aborted.
 *
 * # Safety
 * `results` must be live and `out` must be writable.
 */
enum BaxStatus bax_results_failure_count(const struct BaxResults *results, size_t *out);

/**
 * Mean and standard error across trials of `metric` for `method` at the
 * last recorded iteration.
 *
 * # Safety
 * `results` must be live, strings NUL-terminated, outputs writable.
 */
enum BaxStatus bax_results_final(const struct BaxResults *results,
                                 const char *method,
                                 const char *metric,
                                 size_t *iteration,
                                 double *mean,
                                 double *std_err);

/**
 * # Safety
 * `results` must come from [`bax_experiment_run`] and not be used afterwards.
 */
void bax_results_free(struct BaxResults *results);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BAX_H */
