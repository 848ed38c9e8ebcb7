#include "solitonlab.h"

#include <cmath>
#include <limits>
#include <string>

#include "solitonlab/export.hpp"
#include "solitonlab/scenario.hpp"
#include "solitonlab/soliton.hpp"
#include "solitonlab/symmetry.hpp"
#include "solitonlab/version.hpp"

struct sl_spectrum {
  sl::SkewSpectrum value;
};

struct sl_params {
  sl::SolitonParams value;
};

struct sl_trajectory {
  sl::Trajectory value;
};

namespace {

thread_local std::string g_last_error;
thread_local std::string g_scenario_message;

sl_status to_status(sl::ErrorCode c) {
  switch (c) {
    case sl::ErrorCode::invalid_argument: return SL_ERR_INVALID_ARGUMENT;
    case sl::ErrorCode::not_antisymmetric: return SL_ERR_NOT_ANTISYMMETRIC;
    case sl::ErrorCode::constraint_violation: return SL_ERR_CONSTRAINT;
    case sl::ErrorCode::integration_failure: return SL_ERR_INTEGRATION;
    case sl::ErrorCode::domain_error: return SL_ERR_DOMAIN;
    case sl::ErrorCode::io_error: return SL_ERR_IO;
    case sl::ErrorCode::schema_error: return SL_ERR_SCHEMA;
  }
  return SL_ERR_INTERNAL;
}

template <class Fn>
sl_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return SL_OK;
  } catch (const sl::Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return SL_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return SL_ERR_INTERNAL;
  }
}

void require(bool ok, const char* what) {
  if (!ok) sl::fail(sl::ErrorCode::invalid_argument, what);
}

sl::Mat read_matrix(int n, const double* m) {
  sl::Mat out(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out(i, j) = m[i * n + j];
  return out;
}

sl::Vec read_vector(int n, const double* v) { return Eigen::Map<const sl::Vec>(v, n); }

sl::ScenarioOptions scenario_options(const sl_scenario_options* o) {
  sl::ScenarioOptions so;
  if (!o) return so;
  if (o->out_dir) so.out_dir = o->out_dir;
  so.strict = o->strict != 0;
  if (o->has_seed) so.seed = o->seed;
  so.threads = o->threads;
  return so;
}

}  // namespace

extern "C" {

const char* sl_last_error(void) { return g_last_error.c_str(); }

const char* sl_version(void) { return SOLITONLAB_VERSION; }

sl_status sl_spectrum_create(int n, const double* matrix, sl_spectrum** out) {
  return guarded([&] {
    require(out != nullptr && matrix != nullptr && n > 0, "sl_spectrum_create: bad arguments");
    *out = nullptr;
    *out = new sl_spectrum{sl::skew_normal_form(read_matrix(n, matrix))};
  });
}

void sl_spectrum_destroy(sl_spectrum* s) { delete s; }

int sl_spectrum_dimension(const sl_spectrum* s) { return s ? s->value.dimension() : 0; }

int sl_spectrum_plane_count(const sl_spectrum* s) { return s ? s->value.plane_count() : 0; }

sl_status sl_spectrum_frequencies(const sl_spectrum* s, double* out) {
  return guarded([&] {
    require(s != nullptr && out != nullptr, "sl_spectrum_frequencies: bad arguments");
    int k = 0;
    for (const auto& p : s->value.planes()) out[k++] = p.omega;
  });
}

sl_status sl_spectrum_frame(const sl_spectrum* s, double* out) {
  return guarded([&] {
    require(s != nullptr && out != nullptr, "sl_spectrum_frame: bad arguments");
    const sl::Mat q = s->value.orthogonal_frame();
    const int n = s->value.dimension();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) out[i * n + j] = q(i, j);
  });
}

sl_status sl_classify(int n, double theta, const double* v, double w, const double* M, sl_category* category,
                      double* theta_hat, double* w_hat, double* v_hat) {
  return guarded([&] {
    require(n > 0 && v != nullptr && M != nullptr && category != nullptr, "sl_classify: bad arguments");
    sl::GeneratorRaw raw{theta, read_vector(n, v), w, read_matrix(n, M)};
    const sl::CanonicalGenerator g = sl::classify(raw);
    *category = static_cast<sl_category>(static_cast<int>(g.category));
    if (theta_hat) *theta_hat = g.theta;
    if (w_hat) *w_hat = g.w;
    if (v_hat)
      for (int i = 0; i < n; ++i) v_hat[i] = g.v_hat[i];
  });
}

sl_status sl_params_create(int n, double alpha, const double* A, const double* v, sl_params** out) {
  return guarded([&] {
    require(out != nullptr && n > 0, "sl_params_create: bad arguments");
    *out = nullptr;
    const sl::Mat a = A ? read_matrix(n, A) : sl::Mat::Zero(n, n);
    const sl::Vec vv = v ? read_vector(n, v) : sl::Vec::Zero(n);
    *out = new sl_params{sl::SolitonParams(alpha, a, vv)};
  });
}

void sl_params_destroy(sl_params* p) { delete p; }

int sl_params_dimension(const sl_params* p) { return p ? p->value.dimension() : 0; }

void sl_integrate_options_default(sl_integrate_options* o) {
  if (!o) return;
  const sl::IntegrateOptions d;
  o->tol = d.tol;
  o->h_max = d.h_max;
  o->grid_spacing = d.grid_spacing;
  o->c_cap = d.c_cap;
}

sl_status sl_integrate(const sl_params* p, const double* C0, const double* T0, double s_end,
                       const sl_integrate_options* opts, sl_trajectory** out) {
  return guarded([&] {
    require(p != nullptr && C0 != nullptr && T0 != nullptr && out != nullptr, "sl_integrate: bad arguments");
    *out = nullptr;
    const int n = p->value.dimension();
    sl::IntegrateOptions io;
    if (opts) {
      io.tol = opts->tol;
      io.h_max = opts->h_max;
      io.grid_spacing = opts->grid_spacing;
      io.c_cap = opts->c_cap;
    }
    require(io.tol > 0 && io.h_max > 0 && io.grid_spacing >= 0 && io.c_cap > 0, "sl_integrate: bad options");
    sl::Trajectory tr = sl::integrate(p->value, {read_vector(n, C0), read_vector(n, T0)}, s_end, io);
    *out = new sl_trajectory{std::move(tr)};
  });
}

void sl_trajectory_destroy(sl_trajectory* t) { delete t; }

size_t sl_trajectory_size(const sl_trajectory* t) { return t ? t->value.size() : 0; }

int sl_trajectory_dimension(const sl_trajectory* t) { return t ? t->value.params.dimension() : 0; }

const char* sl_trajectory_termination(const sl_trajectory* t) {
  return t ? sl::termination_name(t->value.termination) : "";
}

sl_status sl_trajectory_sample(const sl_trajectory* t, size_t i, double* s, double* sigma, double* varsigma,
                               double* C, double* T, sl_sample_diagnostics* diag) {
  return guarded([&] {
    require(t != nullptr, "sl_trajectory_sample: null trajectory");
    require(i < t->value.size(), "sl_trajectory_sample: index out of range");
    const auto& x = t->value.samples[i];
    const int n = t->value.params.dimension();
    if (s) *s = x.s;
    if (sigma) *sigma = x.sigma;
    if (varsigma) *varsigma = x.varsigma;
    if (C)
      for (int k = 0; k < n; ++k) C[k] = x.state.C[k];
    if (T)
      for (int k = 0; k < n; ++k) T[k] = x.state.T[k];
    if (diag) {
      const double nan = std::numeric_limits<double>::quiet_NaN();
      diag->lambda = x.diag.lambda;
      diag->has_mu = x.diag.mu.has_value() ? 1 : 0;
      diag->mu = x.diag.mu.value_or(nan);
      diag->nu = x.diag.nu.value_or(nan);
      diag->curvature = x.diag.curvature;
      diag->V = x.diag.V;
      diag->delta_total = x.diag.delta_total;
      diag->delta_W = x.diag.delta_W;
      diag->z = x.diag.z;
    }
  });
}

sl_status sl_trajectory_write_csv(const sl_trajectory* t, const char* path) {
  return guarded([&] {
    require(t != nullptr && path != nullptr, "sl_trajectory_write_csv: bad arguments");
    sl::write_text_file(path, sl::trajectory_csv(t->value));
  });
}

void sl_scenario_options_default(sl_scenario_options* o) {
  if (!o) return;
  o->out_dir = ".";
  o->strict = 0;
  o->has_seed = 0;
  o->seed = 0;
  o->threads = 1;
}

sl_status sl_scenario_run(const char* config_path, const sl_scenario_options* opts, int* exit_code) {
  return guarded([&] {
    require(config_path != nullptr && exit_code != nullptr, "sl_scenario_run: bad arguments");
    const auto r = sl::run_scenario_file(config_path, scenario_options(opts));
    g_scenario_message = r.message;
    *exit_code = r.exit_code;
  });
}

sl_status sl_scenario_run_json(const char* config_json, const sl_scenario_options* opts, int* exit_code) {
  return guarded([&] {
    require(config_json != nullptr && exit_code != nullptr, "sl_scenario_run_json: bad arguments");
    const auto r = sl::run_scenario_text(config_json, scenario_options(opts));
    g_scenario_message = r.message;
    *exit_code = r.exit_code;
  });
}

const char* sl_scenario_message(void) { return g_scenario_message.c_str(); }

}  // extern "C"
