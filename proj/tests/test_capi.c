/* Smoke test of the C API, compiled as C. */
#include <math.h>
#include <stdio.h>
#include <string.h>

#include "solitonlab.h"

static int failures = 0;

#define EXPECT(cond)                                              \
  do {                                                            \
    if (!(cond)) {                                                \
      fprintf(stderr, "%s:%d: failed: %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                 \
    }                                                             \
  } while (0)

static void spectrum(void) {
  const double m[16] = {0, -0.5, 0, 0, 0.5, 0, 0, 0, 0, 0, 0, -2, 0, 0, 2, 0};
  sl_spectrum* s = NULL;
  EXPECT(sl_spectrum_create(4, m, &s) == SL_OK);
  EXPECT(sl_spectrum_dimension(s) == 4);
  EXPECT(sl_spectrum_plane_count(s) == 2);
  double w[2];
  EXPECT(sl_spectrum_frequencies(s, w) == SL_OK);
  EXPECT(fabs(w[0] - 0.5) < 1e-14 && fabs(w[1] - 2.0) < 1e-14);
  double q[16];
  EXPECT(sl_spectrum_frame(s, q) == SL_OK);
  sl_spectrum_destroy(s);

  const double bad[4] = {0, 1, 1, 0};
  s = NULL;
  EXPECT(sl_spectrum_create(2, bad, &s) == SL_ERR_NOT_ANTISYMMETRIC);
  EXPECT(s == NULL);
  EXPECT(strlen(sl_last_error()) > 0);
  EXPECT(sl_spectrum_create(2, NULL, &s) == SL_ERR_INVALID_ARGUMENT);
}

static void classify(void) {
  const double v[2] = {1, 0}, M[4] = {0, 0, 0, 0};
  sl_category cat;
  double th, wh, vh[2];
  EXPECT(sl_classify(2, 0.0, v, 1.0, M, &cat, &th, &wh, vh) == SL_OK);
  EXPECT(cat == SL_CATEGORY_B);
  EXPECT(fabs(vh[0] - 1.0) < 1e-14);
}

static void integrate(void) {
  const double A[4] = {0, -1, 1, 0}, v0[2] = {0, 0};
  sl_params* p = NULL;
  EXPECT(sl_params_create(2, -1.0, A, v0, &p) == SL_OK);
  EXPECT(sl_params_dimension(p) == 2);

  const double vbad[2] = {1, 0};
  sl_params* q = NULL;
  EXPECT(sl_params_create(2, -1.0, A, vbad, &q) == SL_ERR_CONSTRAINT);

  sl_integrate_options o;
  sl_integrate_options_default(&o);
  o.grid_spacing = 0.1;
  const double C0[2] = {1, 0}, T0[2] = {0, 1};
  sl_trajectory* t = NULL;
  EXPECT(sl_integrate(p, C0, T0, 10.0, &o, &t) == SL_OK);
  EXPECT(sl_trajectory_size(t) == 101);
  EXPECT(strcmp(sl_trajectory_termination(t), "completed") == 0);
  double worst = 0.0;
  for (size_t i = 0; i < sl_trajectory_size(t); ++i) {
    double s, C[2];
    sl_sample_diagnostics d;
    EXPECT(sl_trajectory_sample(t, i, &s, NULL, NULL, C, NULL, &d) == SL_OK);
    const double r = fabs(hypot(C[0], C[1]) - 1.0);
    if (r > worst) worst = r;
    EXPECT(fabs(d.V - exp(-0.5)) < 1e-8);
    EXPECT(d.has_mu);
  }
  EXPECT(worst < 1e-6);
  EXPECT(sl_trajectory_sample(t, 1000, NULL, NULL, NULL, NULL, NULL, NULL) == SL_ERR_INVALID_ARGUMENT);

  const double Tbad[2] = {0, 2};
  sl_trajectory* u = NULL;
  EXPECT(sl_integrate(p, C0, Tbad, 1.0, &o, &u) == SL_ERR_INVALID_ARGUMENT);
  EXPECT(sl_trajectory_write_csv(t, "/nonexistent-dir/x.csv") == SL_ERR_IO);

  sl_trajectory_destroy(t);
  sl_params_destroy(p);
  sl_params_destroy(NULL);
  sl_trajectory_destroy(NULL);
}

static void scenario(const char* out_dir) {
  sl_scenario_options o;
  sl_scenario_options_default(&o);
  o.out_dir = out_dir;
  int code = -1;
  EXPECT(sl_scenario_run_json("{\"mode\": \"integrate\", \"name\": \"empty\", \"params\": {\"alpha\": 0, \"dimension\": 2},"
                              " \"initial\": {\"seeds\": []}}",
                              &o, &code) == SL_OK);
  EXPECT(code == 0);
  EXPECT(sl_scenario_run_json("{not json", &o, &code) == SL_OK);
  EXPECT(code == 2);
  EXPECT(strlen(sl_scenario_message()) > 0);
  EXPECT(sl_scenario_run("/nonexistent/config.json", &o, &code) == SL_OK);
  EXPECT(code == 2);
}

int main(int argc, char** argv) {
  EXPECT(strlen(sl_version()) > 0);
  spectrum();
  classify();
  integrate();
  scenario(argc > 1 ? argv[1] : ".");
  if (failures) {
    fprintf(stderr, "%d check(s) failed\n", failures);
    return 1;
  }
  printf("C API smoke test passed\n");
  return 0;
}
