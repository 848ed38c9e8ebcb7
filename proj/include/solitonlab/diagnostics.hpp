#pragma once

#include <string>
#include <vector>

#include "solitonlab/soliton.hpp"

namespace sl {

// Samples must be on a uniform s grid for the finite-difference checks.
// Throws invalid_argument otherwise.
double uniform_spacing(const Trajectory& traj);

struct LyapunovCheck {
  double worst_dip_per_length = 0.0;  // max over steps of max(0, V_i - V_{i+1}) / ds
  double max_rel_error = 0.0;         // |dV/ds (FD) - rate| / rate where rate > floor
  std::size_t compared = 0;
  bool strict_increase = true;        // V_{i+1} > V_i wherever rate > 1e-8 on the whole step
};

// Seven-point central difference dV/ds against lyapunov_rate.
LyapunovCheck check_lyapunov(const Trajectory& traj, double rate_floor = 1e-8);

// Residual of delta_ss - lambda delta_s - 2 alpha delta - |B C_s|^2 for
// delta = |B C|^2 / 2. Requires B A = A B and B v = 0.
ResidualStats distance_ode_residual(const Trajectory& traj, const Mat& B);

// Residual of z_ss - lambda z_s - |v|^2 for z = <v, C>.
ResidualStats z_ode_residual(const Trajectory& traj);

// lambda' + |C_ss|^2 by a five-point stencil; meaningful when alpha = 0.
ResidualStats lambda_derivative_residual(const Trajectory& traj);

struct ExtremaCount {
  int minima = 0;
  int maxima = 0;
  std::vector<double> minima_s;
  bool constant = false;
  // Monotone toward infinity on each end window (first 20% decreasing,
  // last 20% increasing).
  bool head_decreasing = false;
  bool head_increasing = false;
  bool tail_increasing = false;
  bool tail_decreasing = false;
};

// Interior extrema with a hysteresis band of band_rel * range.
ExtremaCount count_extrema(const std::vector<double>& s, const std::vector<double>& x, double band_rel = 1e-7,
                           double end_fraction = 0.2);

enum class Regime { non_shrinking_rotating, translating_rotating, purely_rotating, shrinking, other };

const char* regime_name(Regime r);
Regime classify_regime(const SolitonParams& p);

struct LemmaFinding {
  std::string name;
  bool applicable = false;
  bool passed = true;
  std::string detail;
};

struct MonotonicityReport {
  Regime regime = Regime::other;
  ExtremaCount c_norm;
  ExtremaCount w_norm;
  ExtremaCount z;
  bool lambda_non_increasing = true;  // checked for alpha = 0
  std::vector<LemmaFinding> findings;
  bool all_passed() const;
};

MonotonicityReport monotonicity_report(const Trajectory& traj, double band_rel = 1e-7);

struct ProjectionProfile {
  std::vector<double> phi1;  // per sample; 0 at the sample nearest s = 0
  bool strictly_increasing = false;
  double phi_minus = 0.0;    // value at the first sample
  double phi_plus = 0.0;     // value at the last sample
};

// Phi_1(s) = int_0^s exp(int_0^{s'} lambda) ds' by trapezoid quadrature.
ProjectionProfile projection_profile(const Trajectory& traj);

struct PlanarityReport {
  std::vector<double> singular_values;  // of the centered Z samples, descending
  int rank = 0;                          // count above threshold * first
  int expected_max_rank = -1;            // -1 when no lemma applies
  bool passed = true;
  // Purely rotating case.
  ProjectionProfile profile;
  double line_deviation = 0.0;  // max |Z(s) - Z(0) - Phi_1(s) Z'(0)|
  double approach_rate_minus = 0.0;
  double approach_rate_plus = 0.0;
};

PlanarityReport planarity_check(const Trajectory& traj, double threshold = 1e-8);

}  // namespace sl
