#include "solitonlab/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <random>
#include <sstream>
#include <thread>

#include "solitonlab/asymptotics.hpp"
#include "solitonlab/catalog.hpp"
#include "solitonlab/diagnostics.hpp"
#include "solitonlab/export.hpp"
#include "solitonlab/helix.hpp"
#include "solitonlab/symmetry.hpp"
#include "solitonlab/version.hpp"

namespace sl {

namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

[[noreturn]] void schema(const std::string& what) { fail(ErrorCode::schema_error, "config: " + what); }

// ---- JSON access -----------------------------------------------------------

void allow_keys(const json& obj, const std::string& where, std::initializer_list<const char*> keys) {
  if (!obj.is_object()) schema("'" + where + "' must be an object");
  for (const auto& [k, _] : obj.items()) {
    if (std::none_of(keys.begin(), keys.end(), [&](const char* x) { return k == x; }))
      schema("unknown field '" + where + "." + k + "'");
  }
}

double number(const json& obj, const char* key, const std::string& where, std::optional<double> def = {}) {
  if (!obj.contains(key)) {
    if (def) return *def;
    schema("missing field '" + where + "." + key + "'");
  }
  const auto& x = obj.at(key);
  if (!x.is_number()) schema("'" + where + "." + key + "' must be a number");
  const double d = x.get<double>();
  if (!std::isfinite(d)) schema("'" + where + "." + key + "' must be finite");
  return d;
}

long integer(const json& obj, const char* key, const std::string& where, long def) {
  if (!obj.contains(key)) return def;
  const auto& x = obj.at(key);
  if (!x.is_number_integer()) schema("'" + where + "." + key + "' must be an integer");
  return x.get<long>();
}

bool boolean(const json& obj, const char* key, const std::string& where, bool def) {
  if (!obj.contains(key)) return def;
  const auto& x = obj.at(key);
  if (!x.is_boolean()) schema("'" + where + "." + key + "' must be a boolean");
  return x.get<bool>();
}

std::string text(const json& obj, const char* key, const std::string& where, std::optional<std::string> def = {}) {
  if (!obj.contains(key)) {
    if (def) return *def;
    schema("missing field '" + where + "." + key + "'");
  }
  const auto& x = obj.at(key);
  if (!x.is_string()) schema("'" + where + "." + key + "' must be a string");
  return x.get<std::string>();
}

Vec vector_of(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) schema("'" + where + "' must be a non-empty array of numbers");
  Vec v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) schema("'" + where + "' must contain numbers only");
    v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
  if (!v.allFinite()) schema("'" + where + "' must be finite");
  return v;
}

std::vector<double> numbers_of(const json& j, const std::string& where) {
  if (!j.is_array()) schema("'" + where + "' must be an array of numbers");
  std::vector<double> out;
  for (const auto& x : j) {
    if (!x.is_number()) schema("'" + where + "' must contain numbers only");
    out.push_back(x.get<double>());
  }
  return out;
}

// Dense row-major matrix or {planes: [{omega, axis_pair}], null_dim}.
Mat matrix_of(const json& j, const std::string& where) {
  if (j.is_array()) {
    const auto n = static_cast<Eigen::Index>(j.size());
    if (n == 0) schema("'" + where + "' must not be empty");
    Mat m(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto& row = j[static_cast<std::size_t>(i)];
      if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) schema("'" + where + "' must be square");
      for (Eigen::Index k = 0; k < n; ++k) {
        if (!row[static_cast<std::size_t>(k)].is_number()) schema("'" + where + "' must contain numbers only");
        m(i, k) = row[static_cast<std::size_t>(k)].get<double>();
      }
    }
    return m;
  }
  allow_keys(j, where, {"planes", "null_dim"});
  if (!j.contains("planes") || !j["planes"].is_array()) schema("'" + where + ".planes' must be an array");
  const long null_dim = integer(j, "null_dim", where, 0);
  if (null_dim < 0) schema("'" + where + ".null_dim' must be non-negative");
  const auto& planes = j["planes"];
  const long n = 2 * static_cast<long>(planes.size()) + null_dim;
  if (n == 0) schema("'" + where + "' describes an empty matrix");
  Mat m = Mat::Zero(n, n);
  std::vector<bool> used(static_cast<std::size_t>(n), false);
  for (std::size_t k = 0; k < planes.size(); ++k) {
    const std::string w = where + ".planes[" + std::to_string(k) + "]";
    allow_keys(planes[k], w, {"omega", "axis_pair"});
    const double omega = number(planes[k], "omega", w);
    if (!(omega > 0.0)) schema("'" + w + ".omega' must be positive");
    const auto& ax = planes[k].contains("axis_pair") ? planes[k]["axis_pair"] : json();
    if (!ax.is_array() || ax.size() != 2 || !ax[0].is_number_integer() || !ax[1].is_number_integer())
      schema("'" + w + ".axis_pair' must be two integer axis indices");
    const long a = ax[0].get<long>(), b = ax[1].get<long>();
    if (a < 0 || b < 0 || a >= n || b >= n || a == b) schema("'" + w + ".axis_pair' out of range");
    if (used[static_cast<std::size_t>(a)] || used[static_cast<std::size_t>(b)])
      schema("'" + w + ".axis_pair' reuses an axis");
    used[static_cast<std::size_t>(a)] = used[static_cast<std::size_t>(b)] = true;
    m(b, a) = omega;
    m(a, b) = -omega;
  }
  return m;
}

json vec_json(const Vec& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

json mat_json(const Mat& m) {
  json a = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) a.push_back(vec_json(m.row(i).transpose()));
  return a;
}

json num_json(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

// ---- findings -------------------------------------------------------------------

struct Finding {
  std::string run;
  std::string name;
  bool hard = false;
  bool passed = true;
  double value = kNaN;
  double limit = kNaN;
  std::string detail;
};

json finding_json(const Finding& f) {
  json j;
  j["run"] = f.run;
  j["name"] = f.name;
  j["hard"] = f.hard;
  j["passed"] = f.passed;
  j["value"] = num_json(f.value);
  j["limit"] = num_json(f.limit);
  j["margin"] = num_json(f.limit - f.value);
  j["detail"] = f.detail;
  return j;
}

// value <= limit.
Finding at_most(const std::string& run, const std::string& name, bool hard, double value, double limit,
                const std::string& detail = "") {
  return Finding{run, name, hard, value <= limit, value, limit, detail};
}

Finding flag(const std::string& run, const std::string& name, bool hard, bool passed, const std::string& detail) {
  return Finding{run, name, hard, passed, kNaN, kNaN, detail};
}

struct RunRecord {
  std::string id;
  json info = json::object();
  std::vector<Finding> findings;
  std::vector<std::pair<std::string, std::string>> files;  // name, content
};

// ---- shared parsing ---------------------------------------------------------

struct Context {
  json config;
  ScenarioOptions opts;
  std::string mode;
  std::string name;
  std::uint64_t seed = 0;
  double K = 10.0;
};

SolitonParams params_of(const json& j, const std::string& where) {
  allow_keys(j, where, {"alpha", "A", "v", "dimension"});
  const double alpha = number(j, "alpha", where, 0.0);
  std::optional<Mat> A;
  std::optional<Vec> v;
  if (j.contains("A")) A = matrix_of(j["A"], where + ".A");
  if (j.contains("v")) v = vector_of(j["v"], where + ".v");
  long n = integer(j, "dimension", where, -1);
  if (n < 0) n = A ? A->rows() : (v ? v->size() : -1);
  if (n <= 0) schema("'" + where + "' needs A, v or dimension to fix the dimension");
  if (A && A->rows() != n) schema("'" + where + ".A' does not match the dimension");
  if (v && v->size() != n) schema("'" + where + ".v' does not match the dimension");
  return SolitonParams(alpha, A ? *A : Mat::Zero(n, n), v ? *v : Vec::Zero(n));
}

PhaseState state_of(const json& j, const std::string& where, int n) {
  allow_keys(j, where, {"C", "T"});
  if (!j.contains("C") || !j.contains("T")) schema("'" + where + "' needs C and T");
  PhaseState s{vector_of(j["C"], where + ".C"), vector_of(j["T"], where + ".T")};
  if (s.C.size() != n || s.T.size() != n) schema("'" + where + "' does not match the dimension");
  const double tn = s.T.norm();
  if (!(tn > 0.0)) schema("'" + where + ".T' must be nonzero");
  s.T /= tn;
  return s;
}

CatalogOptions catalog_options_of(const json& j, const std::string& where) {
  CatalogOptions o;
  if (j.is_null()) return o;
  allow_keys(j, where, {"dimension", "alpha", "omegas", "plane", "orientation", "r0", "y0"});
  if (j.contains("dimension")) o.dimension = static_cast<int>(integer(j, "dimension", where, 2));
  if (j.contains("alpha")) o.alpha = number(j, "alpha", where);
  if (j.contains("omegas")) o.omegas = numbers_of(j["omegas"], where + ".omegas");
  o.plane = static_cast<int>(integer(j, "plane", where, 0));
  o.orientation = static_cast<int>(integer(j, "orientation", where, 1));
  if (j.contains("r0")) o.r0 = number(j, "r0", where);
  if (j.contains("y0")) o.y0 = number(j, "y0", where);
  return o;
}

// Uniform double in [0, 1) from the top 53 bits.
double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

Vec gaussian(std::mt19937_64& rng, int n) {
  Vec g(n);
  for (int i = 0; i < n; ++i) {
    const double u1 = 1.0 - uniform01(rng), u2 = uniform01(rng);
    g[i] = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }
  return g;
}

struct Initial {
  std::optional<NamedSoliton> fixture;
  std::vector<PhaseState> seeds;
};

Initial initial_of(const Context& ctx, const json& j, const std::optional<SolitonParams>& p) {
  Initial out;
  const std::string where = "initial";
  if (!j.is_object()) schema("'initial' must be an object");
  if (j.contains("fixture")) {
    allow_keys(j, where, {"fixture", "options"});
    const std::string label = text(j, "fixture", where);
    out.fixture = make_named(label, catalog_options_of(j.value("options", json()), where + ".options"));
    out.seeds.push_back(out.fixture->initial_state);
    return out;
  }
  if (!p) schema("'params' is required unless the initial state is a fixture");
  const int n = p->dimension();
  if (j.contains("seeds")) {
    allow_keys(j, where, {"seeds"});
    if (!j["seeds"].is_array()) schema("'initial.seeds' must be an array");
    for (std::size_t k = 0; k < j["seeds"].size(); ++k)
      out.seeds.push_back(state_of(j["seeds"][k], where + ".seeds[" + std::to_string(k) + "]", n));
    return out;
  }
  if (j.contains("grid")) {
    allow_keys(j, where, {"grid"});
    const auto& g = j["grid"];
    allow_keys(g, "initial.grid", {"count", "radius"});
    const long count = integer(g, "count", "initial.grid", 0);
    const double radius = number(g, "radius", "initial.grid", 1.0);
    if (count < 0) schema("'initial.grid.count' must be non-negative");
    if (!(radius > 0.0)) schema("'initial.grid.radius' must be positive");
    std::mt19937_64 rng(ctx.seed);
    for (long k = 0; k < count; ++k) {
      Vec dir = gaussian(rng, n);
      dir.normalize();
      const double r = radius * std::pow(uniform01(rng), 1.0 / n);
      Vec T = gaussian(rng, n);
      T.normalize();
      out.seeds.push_back({r * dir, T});
    }
    return out;
  }
  out.seeds.push_back(state_of(j, where, n));
  return out;
}

struct Integrator {
  IntegrateOptions io;
  double s_minus = 0.0;
  double s_plus = 10.0;
  double varsigma_end = 10.0;
  // Spacing of the separate re-integration used by the finite-difference
  // lemma checks; 0 reuses the output grid.
  double check_grid = 2.5e-4;
};

Integrator integrator_of(const json& cfg, double s_minus, double s_plus, double tol) {
  Integrator it;
  it.io.tol = tol;
  it.s_minus = s_minus;
  it.s_plus = s_plus;
  if (!cfg.contains("integrator")) return it;
  const auto& j = cfg["integrator"];
  const std::string w = "integrator";
  allow_keys(j, w, {"tol", "s_minus", "s_plus", "h_init", "h_max", "grid_spacing", "c_cap", "max_steps",
                    "varsigma_end", "check_grid"});
  it.io.tol = number(j, "tol", w, tol);
  it.s_minus = number(j, "s_minus", w, s_minus);
  it.s_plus = number(j, "s_plus", w, s_plus);
  it.io.h_init = number(j, "h_init", w, it.io.h_init);
  it.io.h_max = number(j, "h_max", w, it.io.h_max);
  it.io.grid_spacing = number(j, "grid_spacing", w, 0.0);
  it.io.c_cap = number(j, "c_cap", w, it.io.c_cap);
  it.io.max_steps = integer(j, "max_steps", w, it.io.max_steps);
  it.varsigma_end = number(j, "varsigma_end", w, it.varsigma_end);
  it.check_grid = number(j, "check_grid", w, it.check_grid);
  if (it.check_grid < 0.0) schema("'integrator.check_grid' must be non-negative");
  if (!(it.io.tol > 0.0) || !(it.io.h_init > 0.0) || !(it.io.h_max > 0.0) || it.io.grid_spacing < 0.0 ||
      !(it.io.c_cap > 0.0) || it.io.max_steps <= 0)
    schema("'integrator' values must be positive");
  if (it.s_minus > 0.0 || it.s_plus < 0.0) schema("'integrator' needs s_minus <= 0 <= s_plus");
  return it;
}

json integrator_json(const Integrator& it) {
  json j;
  j["tol"] = it.io.tol;
  j["s_minus"] = it.s_minus;
  j["s_plus"] = it.s_plus;
  j["h_init"] = it.io.h_init;
  j["h_max"] = it.io.h_max;
  j["grid_spacing"] = it.io.grid_spacing;
  j["c_cap"] = it.io.c_cap;
  j["max_steps"] = it.io.max_steps;
  j["check_grid"] = it.check_grid;
  return j;
}

// ---- checks shared by trajectory modes ----------------------------------------

bool integration_ok(Termination t) {
  return t == Termination::completed || t == Termination::c_cap || t == Termination::left_region;
}

void basic_findings(RunRecord& rec, const Trajectory& tr) {
  rec.findings.push_back(flag(rec.id, "integration", true, integration_ok(tr.termination),
                              std::string(termination_name(tr.termination)) +
                                  (tr.message.empty() ? "" : ": " + tr.message)));
  double drift = 0.0;
  for (const auto& x : tr.samples) drift = std::max(drift, std::abs(x.state.T.norm() - 1.0));
  rec.findings.push_back(at_most(rec.id, "unit_tangent", true, drift, 1e-10));
  rec.info["termination"] = termination_name(tr.termination);
  rec.info["samples"] = tr.size();
  if (!tr.samples.empty()) {
    rec.info["s_first"] = num_json(tr.samples.front().s);
    rec.info["s_last"] = num_json(tr.samples.back().s);
  }
  rec.info["accepted_steps"] = tr.stats.accepted;
  rec.info["rejected_steps"] = tr.stats.rejected;
}

bool has_uniform_spacing(const Trajectory& tr) {
  try {
    uniform_spacing(tr);
    return true;
  } catch (const Error&) {
    return false;
  }
}

// Every k-th sample, keeping the grid uniform.
Trajectory subsample(const Trajectory& tr, std::size_t k) {
  Trajectory out(tr.params);
  for (std::size_t i = 0; i < tr.size(); i += k) out.samples.push_back(tr.samples[i]);
  return out;
}

// `fine` (optional) is a re-integration on a fine uniform grid used by the
// finite-difference checks.
void lemma_findings(RunRecord& rec, const Trajectory& tr, const RegionSpec& spec, const Trajectory* fine) {
  const auto& p = tr.params;
  if (tr.size() < 5) return;
  const Trajectory& fd = fine ? *fine : tr;
  if (fd.size() >= 7 && has_uniform_spacing(fd)) {
    // The Lyapunov stencil wants a coarser grid than the distance ODEs: its
    // round-off grows like 1/h.
    const double h = uniform_spacing(fd);
    const std::size_t stride = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(5e-3 / h + 1e-9)));
    const Trajectory coarse = stride > 1 ? subsample(fd, stride) : Trajectory(fd);
    const auto ly = check_lyapunov(coarse.size() >= 7 ? coarse : fd);
    rec.findings.push_back(at_most(rec.id, "lyapunov_non_decreasing", false, ly.worst_dip_per_length, 1e-8,
                                   "largest decrease of V per unit arc length"));
    if (ly.compared > 0)
      rec.findings.push_back(at_most(rec.id, "lyapunov_rate", false, ly.max_rel_error, 1e-4,
                                     "relative error of finite-difference dV/ds against the rate formula"));
    if (p.v().norm() == 0.0) {
      const auto r = distance_ode_residual(fd, Mat::Identity(p.dimension(), p.dimension()));
      rec.findings.push_back(at_most(rec.id, "distance_ode_C", false, r.max, 1e-6));
    }
    if (!p.spectrum().is_zero()) {
      const auto r = distance_ode_residual(fd, p.range_projector());
      rec.findings.push_back(at_most(rec.id, "distance_ode_W", false, r.max, 1e-5));
    }
    if (p.v().norm() > 0.0) {
      const auto r = z_ode_residual(fd);
      rec.findings.push_back(at_most(rec.id, "z_ode", false, r.max, 1e-6));
    }
    rec.info["check_grid"] = h;
  } else {
    double dip = 0.0;
    for (std::size_t i = 1; i < tr.size(); ++i) {
      const double ds = tr.samples[i].s - tr.samples[i - 1].s;
      if (ds > 0) dip = std::max(dip, (tr.samples[i - 1].diag.V - tr.samples[i].diag.V) / ds);
    }
    rec.findings.push_back(at_most(rec.id, "lyapunov_non_decreasing", false, dip, 1e-8,
                                   "largest decrease of V per unit arc length"));
  }
  const auto mono = monotonicity_report(tr);
  rec.info["regime"] = regime_name(mono.regime);
  for (const auto& f : mono.findings)
    if (f.applicable) rec.findings.push_back(flag(rec.id, f.name, false, f.passed, f.detail));
  const auto plan = planarity_check(tr);
  if (plan.expected_max_rank >= 0) {
    json sv = json::array();
    for (double x : plan.singular_values) sv.push_back(x);
    rec.info["planarity_singular_values"] = sv;
    rec.findings.push_back(flag(rec.id, "planarity", false, plan.passed,
                                "rank " + std::to_string(plan.rank) + ", expected at most " +
                                    std::to_string(plan.expected_max_rank)));
  }
  std::size_t plus = 0, minus = 0;
  for (const auto& x : tr.samples) {
    const Region r = region_membership(p, x.state, spec);
    if (r == Region::plus) ++plus;
    if (r == Region::minus) ++minus;
  }
  rec.info["samples_in_R_plus"] = plus;
  rec.info["samples_in_R_minus"] = minus;
}

// ---- modes --------------------------------------------------------------------

template <class Fn>
std::vector<RunRecord> fan_out(std::size_t count, int threads, const Fn& fn) {
  std::vector<RunRecord> out(count);
  std::vector<std::string> errors(count);
  const auto work = [&](std::size_t i) {
    try {
      out[i] = fn(i);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  };
  const std::size_t nt = std::max<std::size_t>(1, std::min<std::size_t>(static_cast<std::size_t>(threads), count));
  if (nt <= 1) {
    for (std::size_t i = 0; i < count; ++i) work(i);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < nt; ++t)
      pool.emplace_back([&, t] {
        for (std::size_t i = t; i < count; i += nt) work(i);
      });
    for (auto& th : pool) th.join();
  }
  for (std::size_t i = 0; i < count; ++i)
    if (!errors[i].empty()) fail(ErrorCode::integration_failure, "run " + std::to_string(i) + ": " + errors[i]);
  return out;
}

std::string run_id(const Context& ctx, std::size_t i, std::size_t count) {
  if (count == 1) return ctx.name;
  char buf[16];
  std::snprintf(buf, sizeof buf, "_%04zu", i);
  return ctx.name + buf;
}

struct ModeResult {
  std::vector<RunRecord> runs;
  json results = json::object();
  json tolerances = json::object();
};

std::optional<SolitonParams> optional_params(const json& cfg) {
  if (!cfg.contains("params")) return std::nullopt;
  return params_of(cfg["params"], "params");
}

RegionSpec region_of(const json& cfg) {
  RegionSpec spec;
  if (cfg.contains("region")) {
    allow_keys(cfg["region"], "region", {"K"});
    spec.K = number(cfg["region"], "K", "region", 10.0);
    if (!(spec.K > 0.0)) schema("'region.K' must be positive");
  }
  return spec;
}

ModeResult mode_integrate(Context& ctx, bool write_csv, bool& loading) {
  const auto& cfg = ctx.config;
  const auto p = optional_params(cfg);
  if (!cfg.contains("initial")) schema("missing field 'initial'");
  const Initial init = initial_of(ctx, cfg["initial"], p);
  const SolitonParams params = init.fixture ? init.fixture->params : *p;
  const Integrator it = integrator_of(cfg, 0.0, 10.0, 1e-10);
  const RegionSpec spec = region_of(cfg);
  ModeResult res;
  res.tolerances = integrator_json(it);
  res.results["seeds"] = init.seeds.size();
  loading = false;
  const std::size_t count = init.seeds.size();
  res.runs = fan_out(count, ctx.opts.threads, [&](std::size_t i) {
    RunRecord rec;
    rec.id = run_id(ctx, i, count);
    rec.info["C0"] = vec_json(init.seeds[i].C);
    rec.info["T0"] = vec_json(init.seeds[i].T);
    const Trajectory tr = integrate_both(params, init.seeds[i], it.s_minus, it.s_plus, it.io);
    basic_findings(rec, tr);
    std::optional<Trajectory> fine;
    if (it.check_grid > 0.0 && tr.termination == Termination::completed) {
      IntegrateOptions fo = it.io;
      fo.grid_spacing = it.check_grid;
      fo.tol = std::min(fo.tol, 1e-12);
      fine = integrate_both(params, init.seeds[i], it.s_minus, it.s_plus, fo);
    }
    lemma_findings(rec, tr, spec, fine ? &*fine : nullptr);
    if (write_csv) rec.files.emplace_back(rec.id + ".csv", trajectory_csv(tr));
    return rec;
  });
  return res;
}

ModeResult mode_compact(Context& ctx, bool& loading) {
  const auto& cfg = ctx.config;
  const auto p = optional_params(cfg);
  if (!cfg.contains("initial")) schema("missing field 'initial'");
  const Initial init = initial_of(ctx, cfg["initial"], p);
  const SolitonParams params = init.fixture ? init.fixture->params : *p;
  const Integrator it = integrator_of(cfg, 0.0, 10.0, 1e-10);
  ModeResult res;
  res.tolerances = integrator_json(it);
  res.tolerances["varsigma_end"] = it.varsigma_end;
  loading = false;
  const std::size_t count = init.seeds.size();
  res.runs = fan_out(count, ctx.opts.threads, [&](std::size_t i) {
    RunRecord rec;
    rec.id = run_id(ctx, i, count);
    const Trajectory tr = integrate_compactified(params, to_compact(init.seeds[i]), it.varsigma_end, it.io);
    basic_findings(rec, tr);
    double pmax = 0.0;
    for (const auto& x : tr.samples) pmax = std::max(pmax, x.P.norm());
    rec.findings.push_back(at_most(rec.id, "closed_ball", true, pmax, 1.0 + 1e-12));
    if (params.alpha() < 0.0) {
      double dip = 0.0, prev = kNaN;
      for (const auto& x : tr.samples) {
        const double V = lyapunov_value_compact(params, {x.P, x.state.T});
        if (std::isfinite(prev)) dip = std::max(dip, prev - V);
        prev = V;
      }
      rec.findings.push_back(at_most(rec.id, "compact_lyapunov_non_decreasing", false, dip, 1e-8));
    }
    rec.info["P_max"] = pmax;
    rec.files.emplace_back(rec.id + ".csv", trajectory_csv(tr));
    return rec;
  });
  return res;
}

ModeResult mode_catalog(Context& ctx, bool& loading) {
  const auto& cfg = ctx.config;
  NamedSoliton ns = [&] {
    if (cfg.contains("fixture")) {
      const json& f = cfg["fixture"];
      if (f.is_string()) return make_named(f.get<std::string>());
      allow_keys(f, "fixture", {"label", "options"});
      return make_named(text(f, "label", "fixture"), catalog_options_of(f.value("options", json()), "fixture.options"));
    }
    if (cfg.contains("initial")) {
      const Initial init = initial_of(ctx, cfg["initial"], std::nullopt);
      if (init.fixture) return *init.fixture;
    }
    schema("mode 'catalog' needs 'fixture'");
  }();
  Integrator it = integrator_of(cfg, 0.0, 20.0, 1e-12);
  if (!cfg.contains("integrator") || !cfg["integrator"].contains("h_max")) it.io.h_max = 0.01;
  ModeResult res;
  res.tolerances = integrator_json(it);
  loading = false;

  RunRecord rec;
  rec.id = ctx.name;
  const Trajectory tr = integrate_both(ns.params, ns.initial_state, it.s_minus, it.s_plus, it.io);
  basic_findings(rec, tr);
  rec.info["label"] = ns.label;
  rec.info["alpha"] = ns.params.alpha();
  rec.info["C0"] = vec_json(ns.initial_state.C);
  rec.info["T0"] = vec_json(ns.initial_state.T);
  const auto& sm = tr.samples;
  const auto max_over = [&](auto f) {
    double m = 0.0;
    for (const auto& x : sm) m = std::max(m, f(x));
    return m;
  };
  if (ns.expected_V) {
    rec.info["expected_V"] = *ns.expected_V;
    rec.findings.push_back(at_most(rec.id, "V_expected", true,
                                   max_over([&](const TrajectorySample& x) { return std::abs(x.diag.V - *ns.expected_V); }),
                                   1e-8));
  }
  if (ns.closed_form)
    rec.findings.push_back(at_most(rec.id, "closed_form", true,
                                   max_over([&](const TrajectorySample& x) {
                                     return (x.state.C - ns.closed_form(x.s)).norm();
                                   }),
                                   1e-6));
  if (ns.label == "shrinking_circle") {
    const double r = 1.0 / std::sqrt(-ns.params.alpha());
    rec.findings.push_back(at_most(rec.id, "circle_radius", true,
                                   max_over([&](const TrajectorySample& x) { return std::abs(x.state.C.norm() - r); }),
                                   1e-6));
  } else if (ns.label == "grim_reaper") {
    // Vertical offset times cos x: the distance to the graph to first order,
    // which stays well conditioned where the graph is nearly vertical.
    rec.findings.push_back(at_most(rec.id, "graph_of_minus_log_cos", true, max_over([&](const TrajectorySample& x) {
                                     const double c = std::cos(x.state.C[0]);
                                     return std::abs(x.state.C[1] + std::log(c)) * c;
                                   }),
                                   1e-6));
  } else if (ns.label == "line") {
    rec.findings.push_back(at_most(rec.id, "zero_curvature", true,
                                   max_over([](const TrajectorySample& x) { return x.diag.curvature; }), 1e-12));
  } else if (ns.label == "yin_yang") {
    std::vector<double> s, r;
    for (const auto& x : sm) {
      s.push_back(x.s);
      r.push_back(x.state.C.norm());
    }
    const auto ex = count_extrema(s, r);
    // Strictly monotone away from the single minimum.
    const auto imin = static_cast<std::size_t>(std::min_element(r.begin(), r.end()) - r.begin());
    bool mono = true;
    for (std::size_t i = imin + 1; i < r.size(); ++i) mono = mono && r[i] > r[i - 1];
    for (std::size_t i = 1; i <= imin; ++i) mono = mono && r[i] < r[i - 1];
    rec.findings.push_back(flag(rec.id, "single_minimum_unbounded", true, ex.minima <= 1 && mono,
                                std::to_string(ex.minima) + " interior minima of |C|"));
    rec.info["C_norm_last"] = r.back();
  } else if (ns.label == "abresch_langer") {
    double rmin = std::numeric_limits<double>::infinity(), rmax = 0.0;
    for (const auto& x : sm) {
      rmin = std::min(rmin, x.state.C.norm());
      rmax = std::max(rmax, x.state.C.norm());
    }
    rec.info["C_norm_min"] = rmin;
    rec.info["C_norm_max"] = rmax;
    rec.findings.push_back(flag(rec.id, "bounded_away_from_origin", false, rmin > 0.0 && std::isfinite(rmax), ""));
  }
  rec.files.emplace_back(rec.id + ".csv", trajectory_csv(tr));
  res.runs.push_back(std::move(rec));
  return res;
}

ModeResult mode_classify(Context& ctx, bool& loading) {
  const auto& cfg = ctx.config;
  if (!cfg.contains("generator")) schema("mode 'classify' needs 'generator'");
  const auto& g = cfg["generator"];
  allow_keys(g, "generator", {"theta", "M", "v", "w"});
  GeneratorRaw raw;
  raw.theta = number(g, "theta", "generator", 0.0);
  raw.w = number(g, "w", "generator", 0.0);
  std::optional<Mat> M;
  if (g.contains("M")) M = matrix_of(g["M"], "generator.M");
  if (!g.contains("v")) schema("missing field 'generator.v'");
  raw.v = vector_of(g["v"], "generator.v");
  raw.M = M ? *M : Mat::Zero(raw.v.size(), raw.v.size());
  if (raw.M.rows() != raw.v.size()) schema("'generator.M' and 'generator.v' differ in dimension");
  loading = false;
  const CanonicalGenerator c = classify(raw);
  ModeResult res;
  json& r = res.results;
  r["category"] = category_name(c.category);
  r["theta"] = c.theta;
  r["w"] = c.w;
  r["v_hat"] = vec_json(c.v_hat);
  json freqs = json::array();
  for (const auto& pl : c.spectrum.planes()) freqs.push_back(pl.omega);
  r["frequencies"] = freqs;
  r["null_dimension"] = c.spectrum.null_basis().cols();
  json conj;
  conj["S"] = mat_json(c.conjugation.S);
  conj["p"] = vec_json(c.conjugation.p);
  conj["time_shift"] = c.conjugation.time_shift;
  conj["scale"] = c.conjugation.scale;
  conj["multiple"] = c.conjugation.multiple;
  r["conjugation"] = conj;
  const GeneratorRaw back = to_raw(c);
  const double scale = std::max({1.0, std::abs(raw.theta), std::abs(raw.w), raw.v.norm(), raw.M.norm()});
  const double err = std::max({std::abs(back.theta - raw.theta), std::abs(back.w - raw.w), (back.v - raw.v).norm(),
                               (back.M - raw.M).norm()}) /
                     scale;
  RunRecord rec;
  rec.id = ctx.name;
  rec.info["category"] = category_name(c.category);
  rec.findings.push_back(at_most(rec.id, "round_trip", true, err, 1e-9,
                                 "relative difference between the input and the reconstructed generator"));
  res.runs.push_back(std::move(rec));
  return res;
}

ModeResult mode_helix(Context& ctx, bool& loading) {
  const auto& cfg = ctx.config;
  if (!cfg.contains("helix")) schema("mode 'helix' needs 'helix'");
  const auto& h = cfg["helix"];
  const std::string w = "helix";
  allow_keys(h, w, {"A", "modes", "v", "t_offset", "tau", "samples", "law", "tol"});
  if (!h.contains("A")) schema("missing field 'helix.A'");
  const Mat A = matrix_of(h["A"], "helix.A");
  const int n = static_cast<int>(A.rows());
  const SkewSpectrum spec = skew_normal_form(A);
  std::vector<Vec> modes;
  if (!h.contains("modes") || !h["modes"].is_array()) schema("'helix.modes' must be an array");
  for (std::size_t k = 0; k < h["modes"].size(); ++k) {
    modes.push_back(vector_of(h["modes"][k], "helix.modes[" + std::to_string(k) + "]"));
    if (modes.back().size() != n) schema("'helix.modes' entries must match the dimension");
  }
  const Vec v = h.contains("v") ? vector_of(h["v"], "helix.v") : Vec::Zero(n);
  if (v.size() != n) schema("'helix.v' must match the dimension");
  const double t_offset = number(h, "t_offset", w, 0.0);
  const std::string law_name = text(h, "law", w, "sphere");
  if (law_name != "sphere" && law_name != "printed") schema("'helix.law' must be 'sphere' or 'printed'");
  const TimeLaw law = law_name == "sphere" ? TimeLaw::sphere : TimeLaw::printed;
  std::vector<double> tau{-2.0, 2.0};
  if (h.contains("tau")) tau = numbers_of(h["tau"], "helix.tau");
  if (tau.size() != 2 || !(tau[0] < tau[1])) schema("'helix.tau' must be [tau0, tau1] with tau0 < tau1");
  const long samples = integer(h, "samples", w, 201);
  if (samples < 2) schema("'helix.samples' must be at least 2");
  const double tol = number(h, "tol", w, 1e-6);
  const HelixSolution sol = make_helix(spec, modes, v, t_offset, law);
  loading = false;

  ModeResult res;
  res.tolerances["agreement"] = tol;
  res.tolerances["radius_identity"] = 1e-8;
  RunRecord rec;
  rec.id = ctx.name;
  std::vector<std::string> header{"tau", "t"};
  for (int i = 1; i <= n; ++i) header.push_back("C0_" + std::to_string(i));
  header.push_back("C0_norm2");
  std::string csv = csv_row(header);
  double radius_err = 0.0;
  const bool radius_applies = v.norm() == 0.0;
  for (long k = 0; k < samples; ++k) {
    const double ta = tau[0] + (tau[1] - tau[0]) * static_cast<double>(k) / static_cast<double>(samples - 1);
    const double t = time_of_tau(sol, ta);
    const Vec c = helix_profile(sol, ta);
    std::vector<std::string> row{format_number(ta), format_number(t)};
    for (int i = 0; i < n; ++i) row.push_back(format_number(c[i]));
    row.push_back(format_number(c.squaredNorm()));
    csv += csv_row(row);
    if (radius_applies) {
      const double scale = std::max(1.0, c.squaredNorm());
      radius_err = std::max(radius_err, std::abs(c.squaredNorm() - 2.0 * (sol.singular_time() - t)) / scale);
    }
  }
  rec.files.emplace_back(rec.id + ".csv", csv);
  if (radius_applies)
    rec.findings.push_back(at_most(rec.id, "radius_identity", true, radius_err, 1e-8,
                                   "|C0(t)|^2 - 2(T - t), relative to max(1, |C0|^2)"));
  const TimeLawVerdict verdict = adjudicate_time_law(sol, tau[0], tau[1], tol);
  const double chosen_err = law == TimeLaw::sphere ? verdict.sphere_error : verdict.printed_error;
  rec.findings.push_back(at_most(rec.id, "closed_form_vs_integration", true, chosen_err, tol,
                                 std::string("time law '") + time_law_name(law) + "'"));
  rec.findings.push_back(flag(rec.id, "time_law_decisive", false, verdict.decisive,
                              "integration discriminates between the two candidate t(tau) laws"));
  json& r = res.results;
  r["time_law"]["sphere_error"] = num_json(verdict.sphere_error);
  r["time_law"]["printed_error"] = num_json(verdict.printed_error);
  r["time_law"]["confirmed"] = time_law_name(verdict.confirmed);
  r["time_law"]["decisive"] = verdict.decisive;
  r["backward_radius"]["measured"] = num_json(verdict.backward_radius);
  r["backward_radius"]["sphere_law"] = num_json(verdict.predicted_radius_sphere);
  r["backward_radius"]["printed_law"] = num_json(verdict.predicted_radius_printed);
  r["singular_time"] = num_json(sol.singular_time());
  res.runs.push_back(std::move(rec));
  return res;
}

ModeResult mode_family(Context& ctx, bool& loading) {
  const auto& cfg = ctx.config;
  const auto p = optional_params(cfg);
  if (!cfg.contains("initial")) schema("missing field 'initial'");
  const Initial init = initial_of(ctx, cfg["initial"], p);
  const SolitonParams params = init.fixture ? init.fixture->params : *p;
  Integrator it = integrator_of(cfg, -2.0, 2.0, 1e-12);
  if (it.io.grid_spacing == 0.0) it.io.grid_spacing = 1e-3;
  it.io.h_max = std::min(it.io.h_max, 0.05);
  std::vector<double> times;
  double residual_tol = 1e-4;
  if (cfg.contains("family")) {
    const auto& f = cfg["family"];
    allow_keys(f, "family", {"times", "residual_tol"});
    if (f.contains("times")) times = numbers_of(f["times"], "family.times");
    residual_tol = number(f, "residual_tol", "family", residual_tol);
  }
  if (times.empty()) {
    const double t0 = family_reference_time(params);
    times = params.alpha() == 0.0 ? std::vector<double>{0.0, 0.5} : std::vector<double>{t0, 1.5 * t0};
  }
  ModeResult res;
  res.tolerances = integrator_json(it);
  res.tolerances["residual_tol"] = residual_tol;
  loading = false;
  const std::size_t count = init.seeds.size();
  res.runs = fan_out(count, ctx.opts.threads, [&](std::size_t i) {
    RunRecord rec;
    rec.id = run_id(ctx, i, count);
    const Trajectory tr = integrate_both(params, init.seeds[i], it.s_minus, it.s_plus, it.io);
    basic_findings(rec, tr);
    const double h = uniform_spacing(tr);
    const auto prof = positions(tr);
    json per = json::array();
    for (double t : times) {
      const ResidualStats rs = csf_residual(params, prof, t, h);
      json e;
      e["t"] = t;
      e["max"] = num_json(rs.max);
      e["rms"] = num_json(rs.rms);
      e["coarse_warning"] = rs.coarse_warning;
      per.push_back(e);
      rec.findings.push_back(at_most(rec.id, "csf_residual_t=" + format_number(t), true, rs.max, residual_tol));
    }
    rec.info["residuals"] = per;
    rec.files.emplace_back(rec.id + ".csv", trajectory_csv(tr));
    return rec;
  });
  return res;
}

ModeResult mode_shoot(Context& ctx, bool& loading) {
  const auto& cfg = ctx.config;
  const auto p = optional_params(cfg);
  if (!p) schema("mode 'shoot' needs 'params'");
  if (!cfg.contains("shoot")) schema("mode 'shoot' needs 'shoot'");
  const auto& s = cfg["shoot"];
  const std::string w = "shoot";
  allow_keys(s, w, {"C0", "horizon", "cap_factor", "cap_tolerance", "tol", "perturbation", "backward",
                    "pattern_iterations"});
  if (!s.contains("C0")) schema("missing field 'shoot.C0'");
  const Vec C0 = vector_of(s["C0"], "shoot.C0");
  if (C0.size() != p->dimension()) schema("'shoot.C0' must match the dimension");
  ShootOptions so;
  so.horizon = number(s, "horizon", w, so.horizon);
  so.cap_factor = number(s, "cap_factor", w, so.cap_factor);
  so.cap_tolerance = number(s, "cap_tolerance", w, so.cap_tolerance);
  so.tol = number(s, "tol", w, so.tol);
  so.backward = boolean(s, "backward", w, so.backward);
  so.pattern_iterations = static_cast<int>(integer(s, "pattern_iterations", w, so.pattern_iterations));
  so.threads = ctx.opts.threads;
  const double perturbation = number(s, "perturbation", w, 0.1);
  const RegionSpec spec = region_of(cfg);
  loading = false;

  const ShootResult sr = shoot_trapped_direction(*p, C0, spec, so);
  ModeResult res;
  res.tolerances["horizon"] = so.horizon;
  res.tolerances["cap_tolerance"] = so.cap_tolerance;
  res.tolerances["tol"] = so.tol;
  res.tolerances["K"] = spec.K;
  RunRecord rec;
  rec.id = ctx.name;
  rec.findings.push_back(at_most(rec.id, "trapped_span", true, so.horizon - sr.trapped_span, 0.0,
                                 "horizon minus certified trapped span"));
  json& r = res.results;
  r["method"] = sr.method;
  r["T0"] = vec_json(sr.T0);
  r["trapped_span"] = sr.trapped_span;
  r["cap_radius"] = sr.cap_radius;
  r["deviation"] = sr.deviation;
  r["forward"]["T0"] = vec_json(sr.forward_T0);
  r["forward"]["span"] = sr.forward_span;
  r["forward"]["reintegrated_span"] = sr.reintegrated_span;
  r["backward"]["ok"] = sr.backward_ok;
  r["backward"]["span"] = sr.backward_span;
  r["backward"]["hit_error"] = sr.backward_hit_error;
  r["backward"]["in_region"] = sr.backward_in_region;
  r["backward"]["forward_angle"] = sr.forward_backward_angle;
  r["candidates"] = sr.candidates.size();

  if (sr.orbit.size() >= 10) {
    try {
      const SpiralFit fit = spiral_fit(sr.orbit, -1, 0.0, spec);
      r["spiral_fit"]["gamma"] = vec_json(fit.gamma);
      r["spiral_fit"]["decay_rate"] = fit.decay_rate;
      r["spiral_fit"]["cauchy_converging"] = fit.cauchy_converging;
      rec.findings.push_back(flag(rec.id, "spiral_residual_decays", false, fit.decay_rate > 0.0,
                                  "fitted decay rate " + format_number(fit.decay_rate)));
    } catch (const Error& e) {
      rec.findings.push_back(flag(rec.id, "spiral_residual_decays", false, false, e.what()));
    }
  }
  // Perturb T0 by the given angle towards a direction orthogonal to it.
  {
    const int n = p->dimension();
    Vec e = Vec::Zero(n);
    for (int i = 0; i < n && e.norm() < 0.5; ++i) {
      e = Vec::Unit(n, i) - sr.T0[i] * sr.T0;
    }
    e.normalize();
    const Vec Tp = std::cos(perturbation) * sr.T0 + std::sin(perturbation) * e;
    const double span = exit_span(*p, C0, Tp, spec, so.horizon, so.tol);
    r["perturbation"]["angle"] = perturbation;
    r["perturbation"]["exit_span"] = span;
    rec.findings.push_back(at_most(rec.id, "perturbation_exits", true, span, so.horizon * (1.0 - 1e-12),
                                   "exit span of the perturbed direction"));
  }
  json cand = json::array();
  for (const auto& c : sr.candidates) {
    json e;
    e["T0"] = vec_json(c.T0);
    e["exit_span"] = c.exit_span;
    e["stage"] = c.stage;
    cand.push_back(e);
  }
  rec.files.emplace_back(rec.id + "_candidates.json", cand.dump(1) + "\n");
  rec.files.emplace_back(rec.id + ".csv", trajectory_csv(sr.orbit));
  res.runs.push_back(std::move(rec));
  return res;
}

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

int exit_for(ErrorCode c, bool loading) {
  if (loading) return 2;
  switch (c) {
    case ErrorCode::schema_error:
    case ErrorCode::io_error: return 2;
    default: return 1;
  }
}

}  // namespace

ScenarioOutcome run_scenario(const json& config, const ScenarioOptions& opts) {
  ScenarioOutcome out;
  bool loading = true;
  try {
    Context ctx;
    ctx.config = config;
    ctx.opts = opts;
    if (opts.threads < 1) schema("threads must be at least 1");
    allow_keys(config, "config",
               {"mode", "name", "seed", "params", "initial", "integrator", "region", "generator", "helix",
                "family", "shoot", "fixture", "output"});
    ctx.mode = text(config, "mode", "config");
    ctx.name = text(config, "name", "config", ctx.mode);
    if (ctx.name.empty() || ctx.name.find_first_of("/\\") != std::string::npos)
      schema("'name' must be a plain file stem");
    if (config.contains("seed") && !config["seed"].is_number_unsigned()) schema("'seed' must be a non-negative integer");
    ctx.seed = opts.seed ? *opts.seed : config.value("seed", std::uint64_t{0});
    bool write_report = true;
    if (config.contains("output")) {
      allow_keys(config["output"], "output", {"report"});
      write_report = boolean(config["output"], "report", "output", true);
    }

    ModeResult res;
    if (ctx.mode == "integrate") res = mode_integrate(ctx, true, loading);
    else if (ctx.mode == "report") res = mode_integrate(ctx, false, loading);
    else if (ctx.mode == "compact") res = mode_compact(ctx, loading);
    else if (ctx.mode == "catalog") res = mode_catalog(ctx, loading);
    else if (ctx.mode == "classify") res = mode_classify(ctx, loading);
    else if (ctx.mode == "helix") res = mode_helix(ctx, loading);
    else if (ctx.mode == "family-validate") res = mode_family(ctx, loading);
    else if (ctx.mode == "shoot") res = mode_shoot(ctx, loading);
    else schema("unknown mode '" + ctx.mode + "'");

    std::error_code ec;
    fs::create_directories(opts.out_dir, ec);
    if (ec) fail(ErrorCode::io_error, "cannot create output directory '" + opts.out_dir + "': " + ec.message());

    json runs = json::array();
    json findings = json::array();
    for (const auto& rec : res.runs) {
      json r;
      r["id"] = rec.id;
      r["info"] = rec.info;
      json files = json::array();
      for (const auto& [name, content] : rec.files) {
        const std::string path = (fs::path(opts.out_dir) / name).string();
        write_text_file(path, content);
        out.files.push_back(path);
        files.push_back(name);
      }
      r["files"] = files;
      runs.push_back(r);
      for (const auto& f : rec.findings) {
        findings.push_back(finding_json(f));
        if (!f.passed) ++(f.hard ? out.hard_failures : out.soft_failures);
      }
    }
    const bool failed = out.hard_failures > 0 || (opts.strict && out.soft_failures > 0);

    json report;
    report["mode"] = ctx.mode;
    report["name"] = ctx.name;
    report["results"] = res.results;
    report["runs"] = runs;
    report["findings"] = findings;
    report["summary"]["hard_failures"] = out.hard_failures;
    report["summary"]["soft_failures"] = out.soft_failures;
    report["summary"]["passed"] = !failed;
    if (write_report) {
      const std::string path = (fs::path(opts.out_dir) / (ctx.name + "_report.json")).string();
      write_text_file(path, report.dump(2) + "\n");
      out.files.push_back(path);
    }

    json manifest;
    manifest["metadata"]["tool"] = "solitonlab";
    manifest["metadata"]["version"] = SOLITONLAB_VERSION;
    manifest["metadata"]["generated_at"] = opts.timestamp.empty() ? utc_now() : opts.timestamp;
    manifest["config"] = config;
    manifest["effective"]["seed"] = ctx.seed;
    manifest["effective"]["strict"] = opts.strict;
    manifest["tolerances"] = res.tolerances;
    json files = json::array();
    for (const auto& f : out.files) files.push_back(fs::path(f).filename().string());
    manifest["files"] = files;
    manifest["runs"] = json::array();
    for (const auto& r : runs) manifest["runs"].push_back(json{{"id", r["id"]}, {"files", r["files"]}});
    manifest["status"] = failed ? "invariant_failure" : "ok";
    const std::string mpath = (fs::path(opts.out_dir) / (ctx.name + "_manifest.json")).string();
    write_text_file(mpath, manifest.dump(2) + "\n");
    out.files.push_back(mpath);

    out.exit_code = failed ? 1 : 0;
    std::ostringstream os;
    os << ctx.mode << ": " << res.runs.size() << " run(s), " << out.hard_failures << " hard and "
       << out.soft_failures << " report-only finding(s) failed";
    out.message = os.str();
  } catch (const Error& e) {
    out.exit_code = exit_for(e.code(), loading);
    out.message = e.what();
  } catch (const json::exception& e) {
    out.exit_code = 2;
    out.message = std::string("config: ") + e.what();
  }
  return out;
}

ScenarioOutcome run_scenario_text(const std::string& text, const ScenarioOptions& opts) {
  json cfg;
  try {
    cfg = json::parse(text);
  } catch (const json::parse_error& e) {
    ScenarioOutcome out;
    out.exit_code = 2;
    out.message = std::string("config is not valid JSON: ") + e.what();
    return out;
  }
  return run_scenario(cfg, opts);
}

ScenarioOutcome run_scenario_file(const std::string& path, const ScenarioOptions& opts) {
  std::ifstream f(path, std::ios::binary);
  if (!f) {
    ScenarioOutcome out;
    out.exit_code = 2;
    out.message = "cannot read config '" + path + "'";
    return out;
  }
  std::ostringstream ss;
  ss << f.rdbuf();
  return run_scenario_text(ss.str(), opts);
}

}  // namespace sl
