#include "solitonlab/ode.hpp"

#include <algorithm>
#include <cmath>

namespace sl {

namespace {

// Dormand-Prince coefficients.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

struct Stepper {
  const OdeRhs& rhs;
  Vec k1, k2, k3, k4, k5, k6, k7, tmp;
  long evals = 0;

  explicit Stepper(const OdeRhs& f, Eigen::Index n) : rhs(f) {
    for (Vec* k : {&k1, &k2, &k3, &k4, &k5, &k6, &k7, &tmp}) k->resize(n);
  }

  // One step of size h from (s, y); writes the 5th order solution and the
  // embedded error estimate.
  void step(double s, const Vec& y, double h, Vec& y_new, Vec& err) {
    rhs(s, y, k1);
    tmp = y + h * a21 * k1;
    rhs(s + c2 * h, tmp, k2);
    tmp = y + h * (a31 * k1 + a32 * k2);
    rhs(s + c3 * h, tmp, k3);
    tmp = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
    rhs(s + c4 * h, tmp, k4);
    tmp = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
    rhs(s + c5 * h, tmp, k5);
    tmp = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
    rhs(s + h, tmp, k6);
    y_new = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    rhs(s + h, y_new, k7);
    err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    evals += 7;
  }
};

bool all_finite(const Vec& y) { return y.allFinite(); }

}  // namespace

const char* ode_status_name(OdeStatus s) {
  switch (s) {
    case OdeStatus::completed: return "completed";
    case OdeStatus::event: return "event";
    case OdeStatus::stopped: return "stopped";
    case OdeStatus::step_underflow: return "step_underflow";
    case OdeStatus::non_finite: return "non_finite";
    case OdeStatus::max_steps: return "max_steps";
  }
  return "unknown";
}

OdeResult dp45_integrate(const OdeRhs& rhs, double s0, const Vec& y0, double s_end, const DP45Options& opts,
                         const OdeProjection& project, const OdeObserver& observe, const OdeEvent& event) {
  const auto n = y0.size();
  const int nc = opts.controlled < 0 ? static_cast<int>(n) : std::min<int>(opts.controlled, static_cast<int>(n));
  OdeResult res;
  res.s = s0;
  res.y = y0;
  if (!all_finite(y0)) {
    res.status = OdeStatus::non_finite;
    res.message = "initial state is not finite";
    return res;
  }
  if (observe && !observe(s0, y0)) {
    res.status = OdeStatus::stopped;
    return res;
  }
  if (s_end == s0) return res;

  const double dir = s_end > s0 ? 1.0 : -1.0;
  const double span = std::abs(s_end - s0);
  const bool grid = opts.grid_spacing > 0.0;
  long next_grid = 1;
  const auto grid_point = [&](long k) {
    return std::abs(s_end - (s0 + dir * k * opts.grid_spacing)) < 1e-12 * std::max(1.0, span)
               ? s_end
               : s0 + dir * static_cast<double>(k) * opts.grid_spacing;
  };

  Stepper st(rhs, n);
  Vec y = y0, y_new(n), err(n);
  double s = s0;
  double h = std::min({opts.h_init, opts.h_max, span});
  double g_prev = event ? event(s, y) : 0.0;

  for (long iter = 0;; ++iter) {
    if (iter >= opts.max_steps) {
      res.status = OdeStatus::max_steps;
      res.message = "maximum number of steps reached";
      break;
    }
    double remaining = dir * (s_end - s);
    if (remaining <= 0.0) break;
    double target_h = std::min(h, remaining);
    bool lands_on_grid = false;
    if (grid) {
      const double to_grid = dir * (grid_point(next_grid) - s);
      if (target_h >= to_grid * (1.0 - 1e-12)) {
        target_h = to_grid;
        lands_on_grid = true;
      }
    }
    const bool lands_on_end = target_h >= remaining * (1.0 - 1e-14);

    st.step(s, y, dir * target_h, y_new, err);
    double en = 0.0;
    for (int i = 0; i < nc; ++i) {
      const double sc = opts.atol + opts.rtol * std::max(std::abs(y[i]), std::abs(y_new[i]));
      en += sqr(err[i] / sc);
    }
    en = std::sqrt(en / std::max(nc, 1));
    if (!std::isfinite(en) || !all_finite(y_new)) {
      ++res.stats.rejected;
      h = target_h * 0.2;
      if (h < opts.h_min) {
        res.status = OdeStatus::non_finite;
        res.message = "non-finite state encountered";
        break;
      }
      continue;
    }
    if (en > 1.0) {
      ++res.stats.rejected;
      h = target_h * std::max(0.2, 0.9 * std::pow(en, -0.2));
      if (h < opts.h_min) {
        res.status = OdeStatus::step_underflow;
        res.message = "step size underflow";
        break;
      }
      continue;
    }

    // Accepted.
    double s_new = lands_on_end ? s_end : (lands_on_grid ? grid_point(next_grid) : s + dir * target_h);
    if (project) project(y_new);
    ++res.stats.accepted;
    const double grow = en > 0.0 ? std::min(5.0, 0.9 * std::pow(en, -0.2)) : 5.0;
    const double h_next = std::min(opts.h_max, target_h * grow);

    if (event) {
      const double g_new = event(s_new, y_new);
      if ((g_prev < 0.0) != (g_new < 0.0)) {
        // Secant refinement with single steps from (s, y).
        double lo = 0.0, hi = target_h, glo = g_prev, ghi = g_new;
        Vec y_try = y_new, e_tmp(n);
        double h_hit = hi;
        for (int it = 0; it < 60; ++it) {
          double hm = lo + (hi - lo) * glo / (glo - ghi);
          if (!(hm > lo && hm < hi)) hm = 0.5 * (lo + hi);
          st.step(s, y, dir * hm, y_try, e_tmp);
          if (project) project(y_try);
          const double gm = event(s + dir * hm, y_try);
          h_hit = hm;
          if (std::abs(gm) < 1e-14 || (hi - lo) < 1e-14 * std::max(1.0, std::abs(s))) break;
          if ((glo < 0.0) == (gm < 0.0)) {
            lo = hm;
            glo = gm;
          } else {
            hi = hm;
            ghi = gm;
          }
        }
        y = y_try;
        s = s + dir * h_hit;
        if (observe) observe(s, y);
        res.status = OdeStatus::event;
        break;
      }
      g_prev = g_new;
    }

    y = y_new;
    s = s_new;
    if (lands_on_grid) ++next_grid;
    if (!grid || lands_on_grid || lands_on_end) {
      if (observe && !observe(s, y)) {
        res.status = OdeStatus::stopped;
        break;
      }
    }
    if (lands_on_end) break;
    // Do not let a short grid-clipped step shrink the controller's step.
    h = lands_on_grid ? std::max(h_next, std::min(h, opts.h_max)) : h_next;
  }
  res.s = s;
  res.y = y;
  res.stats.rhs_evals = st.evals;
  return res;
}

}  // namespace sl
