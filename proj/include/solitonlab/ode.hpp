#pragma once

#include <functional>
#include <string>

#include "solitonlab/common.hpp"

namespace sl {

// Dormand-Prince 5(4) with a signed independent variable. Only the first
// `controlled` components enter the error norm; the rest are carried along as
// quadratures.
struct DP45Options {
  double rtol = 1e-10;
  double atol = 1e-10;
  double h_init = 1e-3;
  double h_min = 1e-13;
  double h_max = 0.5;
  long max_steps = 20'000'000;
  // When positive, steps are clipped to land on s0 + k*grid_spacing and the
  // observer only sees grid points.
  double grid_spacing = 0.0;
  int controlled = -1;
};

enum class OdeStatus { completed, event, stopped, step_underflow, non_finite, max_steps };

const char* ode_status_name(OdeStatus s);

struct OdeStats {
  long accepted = 0;
  long rejected = 0;
  long rhs_evals = 0;
};

struct OdeResult {
  OdeStatus status = OdeStatus::completed;
  double s = 0.0;
  Vec y;
  OdeStats stats;
  std::string message;
};

using OdeRhs = std::function<void(double s, const Vec& y, Vec& dy)>;
// Applied to every accepted state (e.g. renormalize a unit vector).
using OdeProjection = std::function<void(Vec& y)>;
// Called on the initial state and every recorded state; return false to stop.
using OdeObserver = std::function<bool(double s, const Vec& y)>;
// Event function; a sign change across an accepted step triggers termination
// at the refined crossing.
using OdeEvent = std::function<double(double s, const Vec& y)>;

OdeResult dp45_integrate(const OdeRhs& rhs, double s0, const Vec& y0, double s_end, const DP45Options& opts,
                         const OdeProjection& project = {}, const OdeObserver& observe = {},
                         const OdeEvent& event = {});

}  // namespace sl
