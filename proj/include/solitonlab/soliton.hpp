#pragma once

#include <functional>
#include <string>
#include <vector>

#include "solitonlab/ode.hpp"
#include "solitonlab/params.hpp"

namespace sl {

struct TrajectorySample {
  double s = 0.0;
  double sigma = 0.0;
  double varsigma = 0.0;
  PhaseState state;
  Vec P;  // compactified position
  DiagnosticSample diag;
};

// Positive while the trajectory may continue; a sign change stops it.
using StayInside = std::function<double(const SolitonParams&, const PhaseState&)>;

struct IntegrateOptions {
  double tol = 1e-10;
  double h_init = 1e-3;
  double h_max = 0.25;
  // Uniform output grid in the independent variable (0 = every accepted step).
  double grid_spacing = 0.0;
  double c_cap = 1e6;
  long max_steps = 20'000'000;
  StayInside stay_inside;
  // Skip per-sample diagnostics (faster when only the endpoint is needed).
  bool record = true;
};

enum class Termination { completed, c_cap, left_region, step_underflow, non_finite, max_steps };

const char* termination_name(Termination t);

struct Trajectory {
  explicit Trajectory(const SolitonParams& p) : params(p) {}
  SolitonParams params;
  bool compact = false;
  std::vector<TrajectorySample> samples;  // s increasing
  // Forward and backward runs report separately; the worse one is kept here.
  Termination termination = Termination::completed;
  std::string message;
  OdeStats stats;
  double rtol = 0.0;
  double atol = 0.0;
  // Filled by integrate_spiral: Gamma(sigma) = e^{-sign sigma (alpha + A)} C per sample.
  std::vector<Vec> gamma;
  int gamma_sign = 0;

  std::size_t size() const { return samples.size(); }
};

// Integrates from s = 0 to s_end (either sign). Samples are returned in
// increasing s.
Trajectory integrate(const SolitonParams& params, const PhaseState& state0, double s_end,
                     const IntegrateOptions& opts = {});

// Backward to s_minus < 0 and forward to s_plus > 0, merged at s = 0.
Trajectory integrate_both(const SolitonParams& params, const PhaseState& state0, double s_minus, double s_plus,
                          const IntegrateOptions& opts = {});

// Integrates the compactified flow in varsigma from 0 to varsigma_end.
Trajectory integrate_compactified(const SolitonParams& params, const CompactState& state0, double varsigma_end,
                                  const IntegrateOptions& opts = {});

// Right-hand side of the compactified flow at (P, T).
void compact_field(const SolitonParams& params, const CompactState& st, Vec& dP, Vec& dT);

// Curve c(., t) of the soliton family through the profile. Category B
// (alpha = 0): e^{tA} C + t v. Category C: e^{eps} e^{eps A/alpha} C with
// eps = 1/2 ln(t/t0), t0 = 1/(2 alpha); c(., t0) is the profile itself.
std::vector<Vec> evolve_family(const SolitonParams& params, const std::vector<Vec>& profile, double t);

// Time at which the family equals the profile.
double family_reference_time(const SolitonParams& params);

struct ResidualStats {
  double max = 0.0;
  double rms = 0.0;
  std::size_t count = 0;
  bool coarse_warning = false;  // local curvature * h > 0.1 somewhere
};

// Curve Shortening residual p_T(c_t) - c_ss of the family built from a
// profile sampled at uniform arc length spacing grid_h, using central
// differences with the same spacing in time.
ResidualStats csf_residual(const SolitonParams& params, const std::vector<Vec>& profile, double t,
                           double grid_h);

std::vector<Vec> positions(const Trajectory& traj);

}  // namespace sl
