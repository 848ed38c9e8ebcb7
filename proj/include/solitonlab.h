#ifndef SOLITONLAB_H
#define SOLITONLAB_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define SL_API __declspec(dllexport)
#else
#define SL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sl_status {
  SL_OK = 0,
  SL_ERR_INVALID_ARGUMENT = 1,
  SL_ERR_NOT_ANTISYMMETRIC = 2,
  SL_ERR_CONSTRAINT = 3,
  SL_ERR_INTEGRATION = 4,
  SL_ERR_DOMAIN = 5,
  SL_ERR_IO = 6,
  SL_ERR_SCHEMA = 7,
  SL_ERR_INTERNAL = 99
} sl_status;

typedef struct sl_spectrum sl_spectrum;
typedef struct sl_params sl_params;
typedef struct sl_trajectory sl_trajectory;

/* Message of the last failed call on this thread; empty after success. */
SL_API const char* sl_last_error(void);
SL_API const char* sl_version(void);

/* Matrices are n*n, row-major. */
SL_API sl_status sl_spectrum_create(int n, const double* matrix, sl_spectrum** out);
SL_API void sl_spectrum_destroy(sl_spectrum* s);
SL_API int sl_spectrum_dimension(const sl_spectrum* s);
SL_API int sl_spectrum_plane_count(const sl_spectrum* s);
/* Writes plane_count frequencies, ascending. */
SL_API sl_status sl_spectrum_frequencies(const sl_spectrum* s, double* out);
/* Orthogonal frame (e1, e2 per plane, then the null basis) as n*n row-major. */
SL_API sl_status sl_spectrum_frame(const sl_spectrum* s, double* out);

typedef enum sl_category { SL_CATEGORY_A = 0, SL_CATEGORY_B = 1, SL_CATEGORY_C = 2 } sl_category;

/* Canonical form of the generator (theta, v, w, M). v_hat receives n values. */
SL_API sl_status sl_classify(int n, double theta, const double* v, double w, const double* M, sl_category* category,
                             double* theta_hat, double* w_hat, double* v_hat);

SL_API sl_status sl_params_create(int n, double alpha, const double* A, const double* v, sl_params** out);
SL_API void sl_params_destroy(sl_params* p);
SL_API int sl_params_dimension(const sl_params* p);

typedef struct sl_integrate_options {
  double tol;
  double h_max;
  double grid_spacing; /* 0: one sample per accepted step */
  double c_cap;
} sl_integrate_options;

SL_API void sl_integrate_options_default(sl_integrate_options* o);

/* Integrates from s = 0 to s_end (either sign). T0 must be a unit vector. */
SL_API sl_status sl_integrate(const sl_params* p, const double* C0, const double* T0, double s_end,
                              const sl_integrate_options* opts, sl_trajectory** out);
SL_API void sl_trajectory_destroy(sl_trajectory* t);
SL_API size_t sl_trajectory_size(const sl_trajectory* t);
SL_API int sl_trajectory_dimension(const sl_trajectory* t);
SL_API const char* sl_trajectory_termination(const sl_trajectory* t);

typedef struct sl_sample_diagnostics {
  double lambda;
  int has_mu; /* mu and nu are NaN when the drive vanishes */
  double mu;
  double nu;
  double curvature;
  double V;
  double delta_total;
  double delta_W;
  double z;
} sl_sample_diagnostics;

/* C and T receive n values each; any output pointer may be NULL. */
SL_API sl_status sl_trajectory_sample(const sl_trajectory* t, size_t i, double* s, double* sigma, double* varsigma,
                                      double* C, double* T, sl_sample_diagnostics* diag);
SL_API sl_status sl_trajectory_write_csv(const sl_trajectory* t, const char* path);

typedef struct sl_scenario_options {
  const char* out_dir;
  int strict;
  int has_seed;
  uint64_t seed;
  int threads;
} sl_scenario_options;

SL_API void sl_scenario_options_default(sl_scenario_options* o);

/* Runs a scenario config file. exit_code receives 0 (ok), 1 (invariant or
 * integration failure) or 2 (usage or config error); the return status is
 * SL_OK whenever the run itself completed, including exit codes 1 and 2. */
SL_API sl_status sl_scenario_run(const char* config_path, const sl_scenario_options* opts, int* exit_code);
SL_API sl_status sl_scenario_run_json(const char* config_json, const sl_scenario_options* opts, int* exit_code);
/* Summary line of the last scenario run on this thread. */
SL_API const char* sl_scenario_message(void);

#ifdef __cplusplus
}
#endif

#endif
