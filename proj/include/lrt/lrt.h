/* C interface to the transfer-protocol simulator.
 *
 * Objects are opaque handles created by *_create / *_run / *_build calls and
 * released by the matching *_destroy. Every fallible call returns an
 * lrt_status; on failure lrt_last_error() describes the problem (the text is
 * thread-local and valid until the next failing call on the same thread).
 * Strings returned through char** are owned by the caller and released with
 * lrt_string_free.
 */
#ifndef LRT_LRT_H
#define LRT_LRT_H

#include <stddef.h>
#include <stdint.h>

#if defined(LRT_BUILDING_LIBRARY)
#define LRT_API __attribute__((visibility("default")))
#else
#define LRT_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum lrt_status {
  LRT_OK = 0,
  LRT_ERR_INVALID_ARGUMENT = 1,
  LRT_ERR_CAPACITY = 2,
  LRT_ERR_NUMERICAL = 3,
  LRT_ERR_IO = 4,
  LRT_ERR_INTERNAL = 5
} lrt_status;

typedef struct lrt_config lrt_config;
typedef struct lrt_schedule lrt_schedule;
typedef struct lrt_sweep lrt_sweep;
typedef struct lrt_tradeoff lrt_tradeoff;

LRT_API const char* lrt_version(void);
LRT_API const char* lrt_last_error(void);
LRT_API const char* lrt_status_name(lrt_status status);
LRT_API void lrt_string_free(char* s);

/* Configuration. Defaults: d=1, alpha=1, h0=1, n=1, nested, beta=0,
 * epsilon=0, m=1, seed=0, corrected angle, per-step redraw. Setters only
 * store; lrt_config_validate checks the combination. */
LRT_API lrt_status lrt_config_create(lrt_config** out);
LRT_API void lrt_config_destroy(lrt_config* cfg);
LRT_API lrt_status lrt_config_set_d(lrt_config* cfg, int d);
LRT_API lrt_status lrt_config_set_alpha(lrt_config* cfg, double alpha);
LRT_API lrt_status lrt_config_set_h0(lrt_config* cfg, double h0);
LRT_API lrt_status lrt_config_set_n(lrt_config* cfg, int n);
LRT_API lrt_status lrt_config_set_variant(lrt_config* cfg, const char* variant);
LRT_API lrt_status lrt_config_set_beta(lrt_config* cfg, double beta);
LRT_API lrt_status lrt_config_set_epsilon(lrt_config* cfg, double epsilon);
LRT_API lrt_status lrt_config_set_m(lrt_config* cfg, int m);
LRT_API lrt_status lrt_config_set_seed(lrt_config* cfg, uint64_t seed);
LRT_API lrt_status lrt_config_set_convention(lrt_config* cfg, const char* convention);
LRT_API lrt_status lrt_config_set_policy(lrt_config* cfg, const char* policy);
/* Overrides the keys present in a JSON object. */
LRT_API lrt_status lrt_config_load_json(lrt_config* cfg, const char* json);
LRT_API lrt_status lrt_config_to_json(const lrt_config* cfg, char** out);
LRT_API lrt_status lrt_config_validate(const lrt_config* cfg);

/* Schedules. */
typedef struct lrt_step_info {
  int q;
  int collapse; /* 0 expand, 1 collapse */
  int sign;
  double duration;
  double reference_coupling;
} lrt_step_info;

LRT_API lrt_status lrt_schedule_build(const lrt_config* cfg, lrt_schedule** out);
LRT_API void lrt_schedule_destroy(lrt_schedule* s);
LRT_API lrt_status lrt_schedule_step_count(const lrt_schedule* s, size_t* count);
LRT_API lrt_status lrt_schedule_step(const lrt_schedule* s, size_t index, lrt_step_info* out);
LRT_API lrt_status lrt_schedule_total_runtime(const lrt_schedule* s, double* out);
/* Closed-form runtime; paper_bound is 0 where no separate bound exists. */
LRT_API lrt_status lrt_schedule_closed_form(const lrt_schedule* s, double* closed_form, double* paper_bound);
LRT_API lrt_status lrt_schedule_to_json(const lrt_schedule* s, char** out);

/* Single runs. */
typedef struct lrt_trial_result {
  double p_final;
  double runtime;
} lrt_trial_result;

LRT_API lrt_status lrt_run_single(const lrt_config* cfg, uint64_t trial, lrt_trial_result* out);
/* Full result including per-step diagnostics. */
LRT_API lrt_status lrt_run_single_json(const lrt_config* cfg, uint64_t trial, int record_step_errors, char** out);
/* Multi-qubit run; fidelities may be NULL. *count receives m. */
LRT_API lrt_status lrt_run_multi(const lrt_config* cfg, uint64_t trial, double* fidelities, size_t capacity,
                                 size_t* count, double* aggregate, double* runtime);
LRT_API lrt_status lrt_run_multi_json(const lrt_config* cfg, uint64_t trial, char** out);

/* Sweeps. axis: "n", "epsilon", "beta" or "m"; threads 0 picks the default
 * (LRT_THREADS, else hardware concurrency). format: "csv" or "json". */
typedef struct lrt_sweep_record {
  double value;
  double mean_p_final;
  double std_error;
  size_t trials;
  double runtime_total;
  int has_bound;
  double bound;
} lrt_sweep_record;

LRT_API lrt_status lrt_sweep_run(const lrt_config* base, const char* axis, const double* values, size_t count,
                                 size_t trials, unsigned threads, double gamma, lrt_sweep** out);
LRT_API void lrt_sweep_destroy(lrt_sweep* s);
LRT_API lrt_status lrt_sweep_record_count(const lrt_sweep* s, size_t* count);
LRT_API lrt_status lrt_sweep_record_at(const lrt_sweep* s, size_t index, lrt_sweep_record* out);
LRT_API lrt_status lrt_sweep_failure_count(const lrt_sweep* s, size_t* count);
LRT_API lrt_status lrt_sweep_failure_message(const lrt_sweep* s, size_t index, char** out);
LRT_API lrt_status lrt_sweep_to_string(const lrt_sweep* s, const char* format, char** out);
LRT_API lrt_status lrt_sweep_write(const lrt_sweep* s, const char* format, const char* path);

/* Power-law fit log P = -a log R + b. */
typedef struct lrt_fit_result {
  double a;
  double b;
  double stderr_a;
  size_t points_used;
  double r_squared;
} lrt_fit_result;

LRT_API lrt_status lrt_fit_file(const char* path, lrt_fit_result* out);
LRT_API lrt_status lrt_fit_sweep(const lrt_sweep* s, lrt_fit_result* out);

/* Repeat-until-success tradeoff over a beta grid (physical variant). */
LRT_API lrt_status lrt_repeat_count(double p, double fidelity, size_t* out);
LRT_API lrt_status lrt_tradeoff_run(const lrt_config* cfg, const double* fidelities, size_t n_fidelities,
                                    const double* betas, size_t n_betas, size_t trials, unsigned threads,
                                    lrt_tradeoff** out);
LRT_API void lrt_tradeoff_destroy(lrt_tradeoff* t);
LRT_API lrt_status lrt_tradeoff_curve_count(const lrt_tradeoff* t, size_t* count);
LRT_API lrt_status lrt_tradeoff_curve(const lrt_tradeoff* t, size_t index, double* fidelity, double* argmin_beta,
                                      double* min_tau_star);
LRT_API lrt_status lrt_tradeoff_to_string(const lrt_tradeoff* t, const char* format, char** out);

/* Analytic error bounds and layout dumps. */
LRT_API lrt_status lrt_bounds_json(const lrt_config* cfg, double gamma, char** out);
LRT_API lrt_status lrt_layout_json(const lrt_config* cfg, char** out);

#ifdef __cplusplus
}
#endif

#endif /* LRT_LRT_H */
