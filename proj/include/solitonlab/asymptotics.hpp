#pragma once

#include <string>
#include <vector>

#include "solitonlab/soliton.hpp"

namespace sl {

struct RegionSpec {
  double K = 10.0;
};

enum class Region { plus, minus, neither };

const char* region_name(Region r);

// R+(K): |a| >= K, nu <= K, mu > 0; R-(K) the same with mu < 0.
Region region_membership(const SolitonParams& p, const PhaseState& s, const RegionSpec& spec);

// Continuous margin, positive strictly inside the given region:
// min(|a| - K, K - nu, +-mu).
double region_margin(const SolitonParams& p, const PhaseState& s, const RegionSpec& spec, Region which);

StayInside stay_in_region(const RegionSpec& spec, Region which);

// Default threshold for the unquantified constants: 4 |alpha + A|.
double default_threshold(const SolitonParams& p);

struct GrArc {
  std::size_t begin = 0;  // sample indices, inclusive
  std::size_t end = 0;
  double length = 0.0;
  double A0 = 0.0;         // |a| at the anchor
  double length_bound = 0.0;  // (c / A0) ln A0
  double mu_begin = 0.0;
  double mu_end = 0.0;
  std::size_t anchor = 0;  // maximum curvature sample
  double fit_error = 0.0;  // symmetric Hausdorff distance to the Grim Reaper
};

// Maximal runs of samples with |a| >= c and |mu| <= 1 - c |a|^-4.
std::vector<GrArc> detect_gr_arcs(const Trajectory& traj, double threshold_c);

// Translating soliton with velocity a through `point` with tangent T (the
// plane is span(a, T)); evaluated at arc length offsets from that point.
std::vector<Vec> grim_reaper_through(const Vec& a, const Vec& point, const Vec& T,
                                     const std::vector<double>& offsets);

// Symmetric Hausdorff distance between two polylines.
double hausdorff_distance(const std::vector<Vec>& a, const std::vector<Vec>& b);

// d|a|/ds = <a_hat, (alpha + A) T>.
double a_norm_rate(const SolitonParams& p, const PhaseState& s);
// Exact d(nu)/ds along the flow.
double nu_rate(const SolitonParams& p, const PhaseState& s);

struct SpiralIntegrateOptions {
  double rtol = 1e-12;
  double atol = 1e-14;
  double sigma_grid = 0.05;  // output spacing in sigma
  double h_init = 1e-4;
  long max_steps = 2'000'000;
};

// Integrates forward in sigma in the variables (Gamma, T) with
// C = e^{sign sigma (alpha + A)} Gamma. The T equation is stiff at rate
// |a|^2 per unit sigma, so a linearly implicit Rosenbrock scheme is used.
// Requires alpha != 0.
Trajectory integrate_spiral(const SolitonParams& p, const PhaseState& state0, double sigma_end, int sign,
                            const SpiralIntegrateOptions& opts = {});

struct SpiralFit {
  Vec gamma;
  int sign = 1;
  std::vector<double> sigma;
  std::vector<double> residual;  // |C(sigma) - e^{sign sigma (alpha + A)} Gamma|
  double decay_rate = 0.0;       // fitted on the residual tail
  // Gamma(sigma) = e^{-sign sigma (alpha+A)} C(sigma) at equally spaced sigma
  // checkpoints and the distances between consecutive ones.
  std::vector<double> checkpoint_sigma;
  std::vector<double> cauchy_steps;
  bool cauchy_converging = false;
};

// Fits the tail sigma >= sigma_from. Requires the tail inside R+(K) for
// sign = +1 or R-(K) for sign = -1 (throws domain_error naming the first
// sample outside).
SpiralFit spiral_fit(const Trajectory& traj, int sign, double sigma_from, const RegionSpec& spec);

struct ShootOptions {
  double horizon = 50.0;
  double cap_factor = 1.0;       // search cap radius = cap_factor * sqrt(K) / |a0|^2
  double cap_tolerance = 1e-10;  // bisection stops below this angular width
  int threads = 1;
  double tol = 1e-12;
  int pattern_iterations = 60;
  bool backward = true;          // also run the stable-manifold construction
};

struct ShootCandidate {
  Vec T0;
  double exit_span = 0.0;
  std::string stage;
};

struct ShootResult {
  Vec T0;                      // best direction (backward construction when available)
  double trapped_span = 0.0;   // certified span of the returned direction
  std::string method;
  double cap_radius = 0.0;
  double deviation = 0.0;      // |T0 + a_hat(C0)|
  // Forward search (bisection / nested bisection / pattern search).
  Vec forward_T0;
  double forward_span = 0.0;
  std::vector<ShootCandidate> candidates;
  // Backward stable-manifold construction.
  bool backward_ok = false;
  double backward_span = 0.0;
  double backward_hit_error = 0.0;  // |C(hit) - C0|
  bool backward_in_region = false;
  double forward_backward_angle = 0.0;
  // Forward re-integration of the returned direction.
  double reintegrated_span = 0.0;
  Trajectory orbit;            // the certified orbit, starting at C0 (s = 0)

  explicit ShootResult(const SolitonParams& p) : orbit(p) {}
};

// Exit span of the forward orbit from (C0, T0) out of R-(K), capped at the
// horizon.
double exit_span(const SolitonParams& p, const Vec& C0, const Vec& T0, const RegionSpec& spec, double horizon,
                 double tol = 1e-12);

ShootResult shoot_trapped_direction(const SolitonParams& p, const Vec& C0, const RegionSpec& spec,
                                    const ShootOptions& opts = {});

}  // namespace sl
