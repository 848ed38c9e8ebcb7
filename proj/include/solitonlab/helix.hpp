#pragma once

#include <limits>
#include <vector>

#include "solitonlab/skewlin.hpp"

namespace sl {

// Antiderivative of dt/dtau used to map tau to t. `sphere` is the one
// consistent with |C0(t)|^2 = 2(T - t): coefficient 1/2 on each
// e^{-2 w^2 tau}|C_j|^2 term. `printed` uses coefficient w_j/2 instead.
enum class TimeLaw { sphere, printed };

const char* time_law_name(TimeLaw law);

// Shrinking helix c(e, t) = e^{eM} C0(t) + e v with C0(tau) = sum e^{-w_j^2 tau} C_j.
struct HelixSolution {
  SkewSpectrum spectrum;
  std::vector<Vec> modes;  // one per plane, C_j in E_j (possibly zero)
  Vec v;                   // in N(M)
  double t_offset = 0.0;   // additive constant of t(tau); the singular time when v = 0
  TimeLaw law = TimeLaw::sphere;
  int index_k = -1;        // smallest j with C_j != 0
  int index_l = -1;        // largest j with C_j != 0

  double singular_time() const {
    return v.norm() > 0.0 ? std::numeric_limits<double>::infinity() : t_offset;
  }
};

// Validates that each C_j lies in E_j (1e-12) and that v is in N(M).
HelixSolution make_helix(const SkewSpectrum& spectrum, const std::vector<Vec>& modes, const Vec& v,
                         double t_offset = 0.0, TimeLaw law = TimeLaw::sphere);

Vec helix_profile(const HelixSolution& sol, double tau);
// dt/dtau implied by the chosen law.
double time_rate(const HelixSolution& sol, double tau);
double time_of_tau(const HelixSolution& sol, double tau);
// Throws domain_error when t is outside the range of time_of_tau.
double tau_of_time(const HelixSolution& sol, double t);

Vec helix_profile_at_time(const HelixSolution& sol, double t);

// c(e, t) for every e in eps_grid.
std::vector<Vec> sample_curve(const HelixSolution& sol, double t, const std::vector<double>& eps_grid);

struct SphereCurve {
  double theta = 0.0;  // -1/2 ln(T - t)
  std::vector<Vec> points;
};

// Rescales c(., t) onto the unit sphere. Requires v = 0 and t < T.
SphereCurve sphere_rescale(const HelixSolution& sol, double t, const std::vector<double>& eps_grid);

// Largest distance of the given points from the plane spanned by e1, e2.
double plane_deviation(const std::vector<Vec>& points, const Vec& e1, const Vec& e2);

// Comparison of the two candidate time laws against direct numerical
// integration of dC0/dt = M^2 C0 / (|v|^2 + |M C0|^2).
struct TimeLawVerdict {
  double sphere_error = 0.0;
  double printed_error = 0.0;
  TimeLaw confirmed = TimeLaw::sphere;
  bool decisive = false;  // exactly one law agrees with the integration
  // Backward limit of |C0(t)| / sqrt(-t) and both candidate predictions.
  double backward_radius = 0.0;
  double predicted_radius_sphere = 0.0;
  double predicted_radius_printed = 0.0;
};

// Integrates from tau0 to tau1 under each law's time map and compares with
// the closed form. Tolerance for agreement is `tol`.
TimeLawVerdict adjudicate_time_law(const HelixSolution& sol, double tau0, double tau1, double tol = 1e-6);

// Right-hand side of the reduced flow for C0(t).
Vec helix_reduced_rhs(const SkewSpectrum& spectrum, const Vec& v, const Vec& C0);

}  // namespace sl
