#include "solitonlab/soliton.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sl {

const char* termination_name(Termination t) {
  switch (t) {
    case Termination::completed: return "completed";
    case Termination::c_cap: return "c_cap";
    case Termination::left_region: return "left_region";
    case Termination::step_underflow: return "step_underflow";
    case Termination::non_finite: return "non_finite";
    case Termination::max_steps: return "max_steps";
  }
  return "unknown";
}

namespace {

// 1/|a| with a floor so sigma stays finite through a = 0.
double sigma_rate(double a_norm) { return 1.0 / std::max(a_norm, 1e-12); }

TrajectorySample make_sample(const SolitonParams& p, double s, double sigma, double varsigma, const Vec& C,
                             const Vec& T, bool record) {
  TrajectorySample out;
  out.s = s;
  out.sigma = sigma;
  out.varsigma = varsigma;
  out.state = {C, T};
  out.P = C / std::sqrt(1.0 + C.squaredNorm());
  if (record) out.diag = sample(p, out.state);
  return out;
}

Termination from_status(OdeStatus st) {
  switch (st) {
    case OdeStatus::completed:
    case OdeStatus::stopped: return Termination::completed;
    case OdeStatus::event: return Termination::left_region;
    case OdeStatus::step_underflow: return Termination::step_underflow;
    case OdeStatus::non_finite: return Termination::non_finite;
    case OdeStatus::max_steps: return Termination::max_steps;
  }
  return Termination::non_finite;
}

DP45Options ode_options(const IntegrateOptions& o, int controlled) {
  DP45Options d;
  d.rtol = o.tol;
  d.atol = o.tol;
  d.h_init = o.h_init;
  d.h_max = o.h_max;
  d.grid_spacing = o.grid_spacing;
  d.max_steps = o.max_steps;
  d.controlled = controlled;
  return d;
}

void renormalize_tangent(Vec& y, int n) {
  auto T = y.segment(n, n);
  T /= T.norm();
}

}  // namespace

Trajectory integrate(const SolitonParams& params, const PhaseState& state0, double s_end,
                     const IntegrateOptions& opts) {
  check_state(params, state0);
  if (!std::isfinite(s_end)) fail(ErrorCode::invalid_argument, "integrate: s_end must be finite");
  const int n = params.dimension();
  Trajectory traj(params);
  traj.rtol = opts.tol;
  traj.atol = opts.tol;

  Vec y0(2 * n + 2);
  y0 << state0.C, state0.T, 0.0, 0.0;

  const Mat alphaA = params.alpha() * Mat::Identity(n, n) + params.A();
  const Vec& v = params.v();
  const OdeRhs rhs = [&](double, const Vec& y, Vec& dy) {
    const auto C = y.head(n);
    const auto T = y.segment(n, n);
    const Vec a = alphaA * C + v;
    dy.head(n) = T;
    dy.segment(n, n) = a - a.dot(T) * T;
    dy[2 * n] = sigma_rate(a.norm());
    dy[2 * n + 1] = std::sqrt(1.0 + C.squaredNorm());
  };
  const OdeProjection project = [n](Vec& y) { renormalize_tangent(y, n); };

  const auto event_value = [&](const Vec& y) {
    double g = opts.c_cap - y.head(n).norm();
    if (opts.stay_inside) g = std::min(g, opts.stay_inside(params, PhaseState{y.head(n), y.segment(n, n)}));
    return g;
  };
  std::vector<TrajectorySample>& out = traj.samples;
  if (event_value(y0) <= 0.0) {
    out.push_back(make_sample(params, 0.0, 0.0, 0.0, state0.C, state0.T, true));
    traj.termination = state0.C.norm() >= opts.c_cap ? Termination::c_cap : Termination::left_region;
    traj.message = "initial state is outside the admissible set";
    return traj;
  }

  const OdeObserver observe = [&](double s, const Vec& y) {
    if (!opts.record && out.size() >= 2) out.pop_back();
    out.push_back(make_sample(params, s, y[2 * n], y[2 * n + 1], y.head(n), y.segment(n, n), opts.record));
    return true;
  };
  const OdeEvent event = [&](double, const Vec& y) { return event_value(y); };

  const OdeResult r = dp45_integrate(rhs, 0.0, y0, s_end, ode_options(opts, 2 * n), project, observe, event);
  traj.stats = r.stats;
  traj.termination = from_status(r.status);
  traj.message = r.message;
  if (r.status == OdeStatus::event) {
    const double cap_margin = opts.c_cap - r.y.head(n).norm();
    traj.termination = cap_margin <= 1e-9 * opts.c_cap ? Termination::c_cap : Termination::left_region;
  }
  if (!opts.record && !out.empty()) out.back().diag = sample(params, out.back().state);
  if (s_end < 0) std::reverse(out.begin(), out.end());
  return traj;
}

Trajectory integrate_both(const SolitonParams& params, const PhaseState& state0, double s_minus, double s_plus,
                          const IntegrateOptions& opts) {
  if (s_minus > 0 || s_plus < 0) fail(ErrorCode::invalid_argument, "integrate_both: need s_minus <= 0 <= s_plus");
  Trajectory back = integrate(params, state0, s_minus, opts);
  Trajectory fwd = integrate(params, state0, s_plus, opts);
  Trajectory out(params);
  out.rtol = fwd.rtol;
  out.atol = fwd.atol;
  out.samples = std::move(back.samples);
  if (!out.samples.empty()) out.samples.pop_back();  // duplicate s = 0
  out.samples.insert(out.samples.end(), fwd.samples.begin(), fwd.samples.end());
  out.stats.accepted = back.stats.accepted + fwd.stats.accepted;
  out.stats.rejected = back.stats.rejected + fwd.stats.rejected;
  out.stats.rhs_evals = back.stats.rhs_evals + fwd.stats.rhs_evals;
  const bool fwd_bad = fwd.termination != Termination::completed;
  out.termination = fwd_bad ? fwd.termination : back.termination;
  out.message = fwd_bad ? fwd.message : back.message;
  return out;
}

void compact_field(const SolitonParams& params, const CompactState& st, Vec& dP, Vec& dT) {
  const double pp = st.P.squaredNorm();
  const double q = std::max(0.0, 1.0 - pp);
  dP = q * (st.T - st.P.dot(st.T) * st.P);
  const Vec b = params.alpha() * st.P + params.A() * st.P + std::sqrt(q) * params.v();
  dT = b - b.dot(st.T) * st.T;
}

Trajectory integrate_compactified(const SolitonParams& params, const CompactState& state0, double varsigma_end,
                                  const IntegrateOptions& opts) {
  const int n = params.dimension();
  if (state0.P.size() != n || state0.T.size() != n)
    fail(ErrorCode::invalid_argument, "integrate_compactified: state dimension mismatch");
  if (state0.P.norm() > 1.0 + 1e-12) fail(ErrorCode::invalid_argument, "integrate_compactified: |P| must be <= 1");
  if (std::abs(state0.T.norm() - 1.0) > 1e-12) fail(ErrorCode::invalid_argument, "tangent T must be a unit vector");
  Trajectory traj(params);
  traj.compact = true;
  traj.rtol = opts.tol;
  traj.atol = opts.tol;

  Vec y0(2 * n + 2);
  y0 << state0.P, state0.T, 0.0, 0.0;
  const OdeRhs rhs = [&](double, const Vec& y, Vec& dy) {
    CompactState st{y.head(n), y.segment(n, n)};
    Vec dP, dT;
    compact_field(params, st, dP, dT);
    dy.head(n) = dP;
    dy.segment(n, n) = dT;
    const double q = std::max(0.0, 1.0 - st.P.squaredNorm());
    const double sq = std::sqrt(q);
    const double an = (params.alpha() * st.P + params.A() * st.P + sq * params.v()).norm();
    dy[2 * n] = q / std::max(an, 1e-12 * std::max(sq, 1e-300));
    dy[2 * n + 1] = sq;
  };
  const OdeProjection project = [n](Vec& y) {
    renormalize_tangent(y, n);
    const double pn = y.head(n).norm();
    if (pn > 1.0) y.head(n) /= pn;
  };

  const auto to_sample = [&](double vs, const Vec& y) {
    TrajectorySample smp;
    smp.varsigma = vs;
    smp.sigma = y[2 * n];
    smp.s = y[2 * n + 1];
    smp.P = y.head(n);
    const Vec T = y.segment(n, n);
    const double q = 1.0 - smp.P.squaredNorm();
    if (q > 0.0) {
      smp.state = {smp.P / std::sqrt(q), T};
      if (opts.record) smp.diag = sample(params, smp.state);
    } else {
      const double inf = std::numeric_limits<double>::infinity();
      smp.state = {Vec::Constant(n, inf), T};
      smp.diag.a_norm = inf;
      smp.diag.lambda = std::numeric_limits<double>::quiet_NaN();
      smp.diag.curvature = std::numeric_limits<double>::quiet_NaN();
    }
    smp.diag.V = params.alpha() < 0.0 || q > 0.0 ? lyapunov_value_compact(params, {smp.P, T})
                                                 : std::numeric_limits<double>::quiet_NaN();
    return smp;
  };
  std::vector<TrajectorySample>& out = traj.samples;
  const OdeObserver observe = [&](double vs, const Vec& y) {
    if (!opts.record && out.size() >= 2) out.pop_back();
    out.push_back(to_sample(vs, y));
    return true;
  };
  OdeEvent event;
  if (opts.stay_inside) {
    event = [&](double, const Vec& y) {
      const double q = 1.0 - y.head(n).squaredNorm();
      if (q <= 0.0) return -1.0;
      return opts.stay_inside(params, PhaseState{y.head(n) / std::sqrt(q), y.segment(n, n)});
    };
  }
  const OdeResult r = dp45_integrate(rhs, 0.0, y0, varsigma_end, ode_options(opts, 2 * n), project, observe, event);
  traj.stats = r.stats;
  traj.termination = from_status(r.status);
  traj.message = r.message;
  if (varsigma_end < 0) std::reverse(out.begin(), out.end());
  return traj;
}

double family_reference_time(const SolitonParams& params) {
  return params.alpha() == 0.0 ? 0.0 : 1.0 / (2.0 * params.alpha());
}

std::vector<Vec> evolve_family(const SolitonParams& params, const std::vector<Vec>& profile, double t) {
  std::vector<Vec> out;
  out.reserve(profile.size());
  if (params.alpha() == 0.0) {
    const Mat R = rotation_exp(params.spectrum(), t);
    for (const auto& c : profile) out.push_back(R * c + t * params.v());
    return out;
  }
  const double t0 = family_reference_time(params);
  if (!(t / t0 > 0.0))
    fail(ErrorCode::domain_error, "evolve_family: t must have the same sign as 1/(2 alpha)");
  const double eps = 0.5 * std::log(t / t0);
  const Mat R = std::exp(eps) * rotation_exp(params.spectrum(), eps / params.alpha());
  for (const auto& c : profile) out.push_back(R * c);
  return out;
}

ResidualStats csf_residual(const SolitonParams& params, const std::vector<Vec>& profile, double t, double grid_h) {
  if (!(grid_h > 0.0)) fail(ErrorCode::invalid_argument, "csf_residual: grid_h must be positive");
  if (profile.size() < 3) fail(ErrorCode::invalid_argument, "csf_residual: need at least three samples");
  const auto now = evolve_family(params, profile, t);
  const auto plus = evolve_family(params, profile, t + grid_h);
  const auto minus = evolve_family(params, profile, t - grid_h);
  ResidualStats st;
  double sum = 0.0;
  for (std::size_t i = 1; i + 1 < now.size(); ++i) {
    const Vec cu = (now[i + 1] - now[i - 1]) / (2.0 * grid_h);
    const Vec cuu = (now[i + 1] - 2.0 * now[i] + now[i - 1]) / sqr(grid_h);
    const Vec ct = (plus[i] - minus[i]) / (2.0 * grid_h);
    const double speed = cu.norm();
    const Vec T = cu / speed;
    const Vec r = perp(ct - cuu / sqr(speed), T);
    const double kappa = perp(cuu, T).norm() / sqr(speed);
    if (kappa * grid_h * speed > 0.1) st.coarse_warning = true;
    const double rn = r.norm();
    st.max = std::max(st.max, rn);
    sum += rn * rn;
    ++st.count;
  }
  st.rms = std::sqrt(sum / static_cast<double>(st.count));
  return st;
}

std::vector<Vec> positions(const Trajectory& traj) {
  std::vector<Vec> out;
  out.reserve(traj.samples.size());
  for (const auto& s : traj.samples) out.push_back(s.state.C);
  return out;
}

}  // namespace sl
