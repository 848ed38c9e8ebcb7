#include "solitonlab/helix.hpp"

#include <cmath>

#include "solitonlab/ode.hpp"

namespace sl {

const char* time_law_name(TimeLaw law) { return law == TimeLaw::sphere ? "sphere" : "printed"; }

HelixSolution make_helix(const SkewSpectrum& spectrum, const std::vector<Vec>& modes, const Vec& v,
                         double t_offset, TimeLaw law) {
  const int n = spectrum.dimension();
  if (static_cast<int>(modes.size()) != spectrum.plane_count())
    fail(ErrorCode::invalid_argument, "make_helix: need one mode vector per invariant plane");
  if (v.size() != n) fail(ErrorCode::invalid_argument, "make_helix: v has the wrong dimension");
  HelixSolution sol;
  sol.spectrum = spectrum;
  sol.v = v;
  sol.t_offset = t_offset;
  sol.law = law;
  for (int j = 0; j < spectrum.plane_count(); ++j) {
    const auto& pl = spectrum.planes()[j];
    const Vec& c = modes[j];
    if (c.size() != n) fail(ErrorCode::invalid_argument, "make_helix: mode has the wrong dimension");
    const Vec in_plane = c.dot(pl.e1) * pl.e1 + c.dot(pl.e2) * pl.e2;
    if ((c - in_plane).norm() > 1e-12 * std::max(1.0, c.norm()))
      fail(ErrorCode::invalid_argument, "make_helix: mode C_j must lie in the plane E_j");
    sol.modes.push_back(c);
    if (c.norm() > 0.0) {
      if (sol.index_k < 0) sol.index_k = j;
      sol.index_l = j;
    }
  }
  if ((spectrum.matrix() * v).norm() > 1e-12 * std::max(1.0, v.norm()))
    fail(ErrorCode::constraint_violation, "make_helix: v must lie in the null space of M");
  if (sol.index_k < 0 && v.norm() == 0.0)
    fail(ErrorCode::invalid_argument, "make_helix: all modes vanish and v = 0");
  return sol;
}

Vec helix_profile(const HelixSolution& sol, double tau) {
  Vec c = Vec::Zero(sol.spectrum.dimension());
  for (int j = 0; j < sol.spectrum.plane_count(); ++j)
    c += std::exp(-sqr(sol.spectrum.planes()[j].omega) * tau) * sol.modes[j];
  return c;
}

namespace {
double law_coefficient(const HelixSolution& sol, double omega) {
  return sol.law == TimeLaw::sphere ? 0.5 : 0.5 * omega;
}
}  // namespace

double time_rate(const HelixSolution& sol, double tau) {
  double r = sol.v.squaredNorm();
  for (int j = 0; j < sol.spectrum.plane_count(); ++j) {
    const double w = sol.spectrum.planes()[j].omega;
    r += 2.0 * sqr(w) * law_coefficient(sol, w) * std::exp(-2.0 * sqr(w) * tau) * sol.modes[j].squaredNorm();
  }
  return r;
}

double time_of_tau(const HelixSolution& sol, double tau) {
  double t = sol.t_offset + sol.v.squaredNorm() * tau;
  for (int j = 0; j < sol.spectrum.plane_count(); ++j) {
    const double w = sol.spectrum.planes()[j].omega;
    t -= law_coefficient(sol, w) * std::exp(-2.0 * sqr(w) * tau) * sol.modes[j].squaredNorm();
  }
  return t;
}

double tau_of_time(const HelixSolution& sol, double t) {
  if (sol.v.norm() == 0.0 && !(t < sol.t_offset))
    fail(ErrorCode::domain_error, "tau_of_time: t must be before the singular time");
  if (!std::isfinite(t)) fail(ErrorCode::domain_error, "tau_of_time: t must be finite");
  // Expand a bracket geometrically from tau = 0; t(tau) is increasing.
  double lo = 0.0, hi = 0.0;
  double step = 1.0;
  if (time_of_tau(sol, 0.0) < t) {
    hi = step;
    while (time_of_tau(sol, hi) < t) {
      lo = hi;
      step *= 2.0;
      hi += step;
      if (hi > 1e15) fail(ErrorCode::domain_error, "tau_of_time: t outside the range of t(tau)");
    }
  } else {
    lo = -step;
    while (time_of_tau(sol, lo) > t) {
      hi = lo;
      step *= 2.0;
      lo -= step;
      if (lo < -1e15) fail(ErrorCode::domain_error, "tau_of_time: t outside the range of t(tau)");
    }
  }
  // Safeguarded Newton inside the bracket.
  double tau = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const double f = time_of_tau(sol, tau) - t;
    if (f > 0) hi = tau; else lo = tau;
    const double d = time_rate(sol, tau);
    double next = tau - f / d;
    if (!(next > lo && next < hi) || !std::isfinite(next)) next = 0.5 * (lo + hi);
    if (std::abs(next - tau) <= 1e-15 * std::max(1.0, std::abs(tau))) return next;
    tau = next;
    if (hi - lo <= 1e-15 * std::max(1.0, std::abs(tau))) break;
  }
  return tau;
}

Vec helix_profile_at_time(const HelixSolution& sol, double t) { return helix_profile(sol, tau_of_time(sol, t)); }

std::vector<Vec> sample_curve(const HelixSolution& sol, double t, const std::vector<double>& eps_grid) {
  const Vec c0 = helix_profile_at_time(sol, t);
  std::vector<Vec> out;
  out.reserve(eps_grid.size());
  for (double e : eps_grid) out.push_back(rotation_exp(sol.spectrum, e) * c0 + e * sol.v);
  return out;
}

SphereCurve sphere_rescale(const HelixSolution& sol, double t, const std::vector<double>& eps_grid) {
  if (sol.v.norm() != 0.0) fail(ErrorCode::invalid_argument, "sphere_rescale: requires v = 0");
  if (!(t < sol.t_offset)) fail(ErrorCode::domain_error, "sphere_rescale: requires t < T");
  const double gap = sol.t_offset - t;
  SphereCurve out;
  out.theta = -0.5 * std::log(gap);
  const double scale = 1.0 / std::sqrt(2.0 * gap);
  for (auto& p : sample_curve(sol, t, eps_grid)) out.points.push_back(scale * p);
  return out;
}

double plane_deviation(const std::vector<Vec>& points, const Vec& e1, const Vec& e2) {
  double worst = 0.0;
  for (const auto& p : points) {
    const Vec r = p - p.dot(e1) * e1 - p.dot(e2) * e2;
    worst = std::max(worst, r.norm());
  }
  return worst;
}

Vec helix_reduced_rhs(const SkewSpectrum& spectrum, const Vec& v, const Vec& C0) {
  const Mat& M = spectrum.matrix();
  const Vec mc = M * C0;
  return M * mc / (v.squaredNorm() + mc.squaredNorm());
}

TimeLawVerdict adjudicate_time_law(const HelixSolution& sol, double tau0, double tau1, double tol) {
  TimeLawVerdict out;
  const auto error_for = [&](TimeLaw law) {
    HelixSolution h = sol;
    h.law = law;
    const double t0 = time_of_tau(h, tau0);
    const double t1 = time_of_tau(h, tau1);
    const OdeRhs rhs = [&](double, const Vec& y, Vec& dy) { dy = helix_reduced_rhs(sol.spectrum, sol.v, y); };
    // |C0| spans orders of magnitude over the interval, so the control and
    // the comparison are both relative.
    DP45Options opts;
    opts.rtol = 1e-13;
    opts.atol = 1e-300;
    opts.h_max = std::abs(t1 - t0) / 50.0 + 1e-12;
    opts.h_init = opts.h_max / 100.0;
    const OdeResult r = dp45_integrate(rhs, t0, helix_profile(h, tau0), t1, opts);
    // A wrong time map can ask for t1 beyond the singular time of the flow
    // started at C0(t0); that counts as no agreement.
    if (r.status != OdeStatus::completed) return std::numeric_limits<double>::infinity();
    const Vec exact = helix_profile(h, tau1);
    return (r.y - exact).norm() / std::max(exact.norm(), 1e-300);
  };
  out.sphere_error = error_for(TimeLaw::sphere);
  out.printed_error = error_for(TimeLaw::printed);
  const bool s_ok = out.sphere_error < tol;
  const bool p_ok = out.printed_error < tol;
  out.decisive = s_ok != p_ok;
  out.confirmed = (s_ok || !p_ok) && out.sphere_error <= out.printed_error ? TimeLaw::sphere : TimeLaw::printed;

  // Backward radius: |C0(t)|/sqrt(-t) deep in the past under the confirmed law.
  if (sol.index_l >= 0) {
    HelixSolution h = sol;
    h.law = out.confirmed;
    const double wl = sol.spectrum.planes()[sol.index_l].omega;
    // Far enough back that the leading mode dominates t by a factor 1e12.
    const double tau = -14.0 / sqr(wl);
    const double t = time_of_tau(h, tau) ;
    out.backward_radius = helix_profile(h, tau).norm() / std::sqrt(-t);
    out.predicted_radius_sphere = std::sqrt(2.0);
    out.predicted_radius_printed = std::sqrt(2.0 / wl);
  }
  return out;
}

}  // namespace sl
