#include "solitonlab/catalog.hpp"

#include <algorithm>
#include <cmath>

namespace sl {

namespace {

Mat block_matrix(int n, const std::vector<double>& omegas) { return skew_block_matrix(n, omegas); }

int dim_or(const CatalogOptions& o, int fallback, int minimum) {
  const int n = o.dimension.value_or(fallback);
  if (n < minimum) fail(ErrorCode::invalid_argument, "catalog: dimension too small for this label");
  return n;
}

Vec unit(int n, int i) { return Vec::Unit(n, i); }

}  // namespace

const std::vector<std::string>& catalog_labels() {
  static const std::vector<std::string> labels{"line",      "shrinking_circle", "grim_reaper",
                                               "yin_yang", "brakke_wedge",     "abresch_langer"};
  return labels;
}

NamedSoliton make_named(const std::string& label, const CatalogOptions& o) {
  if (label == "line") {
    // Line through the origin along a null direction of A.
    const int n = dim_or(o, 2, 1);
    const double alpha = o.alpha.value_or(-1.0);
    const Mat A = block_matrix(n, o.omegas);
    SolitonParams p(alpha, A, Vec::Zero(n));
    if (p.spectrum().null_basis().cols() == 0)
      fail(ErrorCode::invalid_argument, "catalog line: A has no null direction");
    const Vec d = p.spectrum().null_basis().col(0);
    NamedSoliton ns{label, p, {Vec::Zero(n), d}, {}, 0.0};
    ns.closed_form = [d](double s) { return Vec(s * d); };
    return ns;
  }
  if (label == "shrinking_circle") {
    const int n = dim_or(o, 2, 2);
    const double alpha = o.alpha.value_or(-1.0);
    if (!(alpha < 0.0)) fail(ErrorCode::invalid_argument, "catalog shrinking_circle: requires alpha < 0");
    if (o.orientation != 1 && o.orientation != -1)
      fail(ErrorCode::invalid_argument, "catalog shrinking_circle: orientation must be +1 or -1");
    const std::vector<double> omegas = o.omegas.empty() ? std::vector<double>{1.0} : o.omegas;
    SolitonParams p(alpha, block_matrix(n, omegas), Vec::Zero(n));
    Vec e1 = unit(n, 0), e2 = unit(n, 1);
    double omega = 0.0;
    if (!p.spectrum().is_zero()) {
      if (o.plane < 0 || o.plane >= p.spectrum().plane_count())
        fail(ErrorCode::invalid_argument, "catalog shrinking_circle: plane index out of range");
      const auto& pl = p.spectrum().planes()[static_cast<std::size_t>(o.plane)];
      e1 = pl.e1;
      e2 = pl.e2;
      omega = pl.omega;
    }
    const double r = 1.0 / std::sqrt(-alpha);
    const double sgn = o.orientation;
    NamedSoliton ns{label, p, {r * e1, sgn * e2}, {}, sgn * omega / std::sqrt(-std::exp(1.0) * alpha)};
    ns.closed_form = [=](double s) { return Vec(r * (std::cos(s / r) * e1 + sgn * std::sin(s / r) * e2)); };
    return ns;
  }
  if (label == "grim_reaper") {
    // Graph of y = -log cos x, translating with velocity e2.
    const int n = dim_or(o, 2, 2);
    SolitonParams p(0.0, Mat::Zero(n, n), unit(n, 1));
    NamedSoliton ns{label, p, {Vec::Zero(n), unit(n, 0)}, {}, 0.0};
    ns.closed_form = [n](double s) {
      Vec c = Vec::Zero(n);
      c[0] = std::atan(std::sinh(s));
      c[1] = std::log(std::cosh(s));
      return c;
    };
    return ns;
  }
  if (label == "yin_yang") {
    const int n = dim_or(o, 2, 2);
    const std::vector<double> omegas = o.omegas.empty() ? std::vector<double>{1.0} : o.omegas;
    SolitonParams p(0.0, block_matrix(n, omegas), Vec::Zero(n));
    return NamedSoliton{label, p, {Vec::Zero(n), unit(n, 0)}, {}, std::nullopt};
  }
  if (label == "brakke_wedge") {
    const int n = dim_or(o, 2, 2);
    const double alpha = o.alpha.value_or(1.0);
    if (!(alpha > 0.0)) fail(ErrorCode::invalid_argument, "catalog brakke_wedge: requires alpha > 0");
    const double y0 = o.y0.value_or(1.0);
    SolitonParams p(alpha, Mat::Zero(n, n), Vec::Zero(n));
    return NamedSoliton{label, p, {y0 * unit(n, 1), unit(n, 0)}, {}, 0.0};
  }
  if (label == "abresch_langer") {
    const int n = dim_or(o, 2, 2);
    const double alpha = o.alpha.value_or(-1.0);
    if (!(alpha < 0.0)) fail(ErrorCode::invalid_argument, "catalog abresch_langer: requires alpha < 0");
    const double r0 = o.r0.value_or(0.8 / std::sqrt(-alpha));
    if (!(r0 > 0.0)) fail(ErrorCode::invalid_argument, "catalog abresch_langer: r0 must be positive");
    SolitonParams p(alpha, Mat::Zero(n, n), Vec::Zero(n));
    return NamedSoliton{label, p, {r0 * unit(n, 0), unit(n, 1)}, {}, 0.0};
  }
  fail(ErrorCode::invalid_argument, "catalog: unknown label '" + label + "'");
}

AbreschLangerProfile abresch_langer_profile(double alpha, double r0, double s_span, double tol) {
  if (!(alpha < 0.0)) fail(ErrorCode::invalid_argument, "abresch_langer_profile: requires alpha < 0");
  if (!(r0 > 0.0) || !(s_span > 0.0))
    fail(ErrorCode::invalid_argument, "abresch_langer_profile: r0 and s_span must be positive");
  SolitonParams p(alpha, Mat::Zero(2, 2), Vec::Zero(2));
  const PhaseState x0{r0 * unit(2, 0), unit(2, 1)};
  IntegrateOptions io;
  io.tol = tol;
  io.h_max = 0.01;
  AbreschLangerProfile out(p);
  out.traj = integrate(p, x0, s_span, io);
  const auto& sm = out.traj.samples;

  const auto dist = [&](const PhaseState& s) {
    return std::sqrt((s.C - x0.C).squaredNorm() + (s.T - x0.T).squaredNorm());
  };
  const auto state_from = [&](std::size_t i, double s) {
    IntegrateOptions q = io;
    q.record = false;
    if (s == sm[i].s) return sm[i].state;
    return integrate(p, sm[i].state, s - sm[i].s, q).samples.back().state;
  };

  // Turning angle of T accumulated sample by sample.
  std::vector<double> turn(sm.size(), 0.0);
  for (std::size_t i = 1; i < sm.size(); ++i) {
    const Vec& a = sm[i - 1].state.T;
    const Vec& b = sm[i].state.T;
    turn[i] = turn[i - 1] + std::atan2(a[0] * b[1] - a[1] * b[0], a.dot(b));
  }
  out.r_min = out.r_max = x0.C.norm();
  for (const auto& x : sm) {
    out.r_min = std::min(out.r_min, x.state.C.norm());
    out.r_max = std::max(out.r_max, x.state.C.norm());
  }

  // First local minimum of the distance to the start after leaving it.
  bool left = false;
  for (std::size_t i = 1; i + 1 < sm.size(); ++i) {
    const double d = dist(sm[i].state);
    if (!left) {
      left = d > 1e-2;
      continue;
    }
    if (d <= dist(sm[i - 1].state) && d <= dist(sm[i + 1].state) && d < 1e-2) {
      // Golden-section refinement between the neighbours.
      double lo = sm[i - 1].s, hi = sm[i + 1].s;
      const double g = 0.5 * (std::sqrt(5.0) - 1.0);
      double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
      double f1 = dist(state_from(i - 1, x1)), f2 = dist(state_from(i - 1, x2));
      for (int it = 0; it < 60; ++it) {
        if (f1 < f2) {
          hi = x2;
          x2 = x1;
          f2 = f1;
          x1 = hi - g * (hi - lo);
          f1 = dist(state_from(i - 1, x1));
        } else {
          lo = x1;
          x1 = x2;
          f1 = f2;
          x2 = lo + g * (hi - lo);
          f2 = dist(state_from(i - 1, x2));
        }
      }
      const double sc = 0.5 * (lo + hi);
      const PhaseState xc = state_from(i - 1, sc);
      out.closure_error = dist(xc);
      if (out.closure_error < 1e-4) {
        out.closed = true;
        out.period = sc;
        const Vec& a = sm[i - 1].state.T;
        const Vec& b = xc.T;
        const double last = std::atan2(a[0] * b[1] - a[1] * b[0], a.dot(b));
        out.rotation_number = (turn[i - 1] + last) / (2.0 * M_PI);
        return out;
      }
    }
  }
  out.rotation_number = turn.empty() ? 0.0 : turn.back() / (2.0 * M_PI);
  return out;
}

std::vector<RotationScanEntry> rotation_number_scan(double alpha, const std::vector<double>& r0_values,
                                                    double s_span) {
  std::vector<RotationScanEntry> out;
  for (double r0 : r0_values) {
    const auto prof = abresch_langer_profile(alpha, r0, s_span);
    out.push_back({r0, prof.rotation_number, prof.closed, prof.period});
  }
  return out;
}

}  // namespace sl
