#pragma once

#include <optional>

#include "solitonlab/skewlin.hpp"

namespace sl {

// (alpha, A, v) of the soliton equation C_ss = (alpha + A) C + v + lambda C_s.
class SolitonParams {
 public:
  // Throws constraint_violation when A v != 0 or when alpha != 0 with v != 0.
  SolitonParams(double alpha, const Mat& A, const Vec& v);
  SolitonParams(double alpha, const SkewSpectrum& spectrum, const Vec& v);

  int dimension() const { return spectrum_.dimension(); }
  double alpha() const { return alpha_; }
  const SkewSpectrum& spectrum() const { return spectrum_; }
  const Mat& A() const { return spectrum_.matrix(); }
  const Vec& v() const { return v_; }
  const Mat& null_projector() const { return pi_n_; }
  const Mat& range_projector() const { return pi_r_; }

  // a(C) = (alpha + A) C + v.
  Vec drive(const Vec& C) const { return alpha_ * C + A() * C + v_; }
  // Operator norm of alpha + A: sqrt(alpha^2 + max omega^2).
  double drive_norm() const;

 private:
  void validate() const;
  double alpha_;
  SkewSpectrum spectrum_;
  Vec v_;
  Mat pi_n_;
  Mat pi_r_;
};

struct PhaseState {
  Vec C;
  Vec T;
};

struct CompactState {
  Vec P;
  Vec T;
};

// Throws invalid_argument unless |T| = 1 to 1e-12 and dimensions match.
void check_state(const SolitonParams& p, const PhaseState& s);

CompactState to_compact(const PhaseState& s);
// Only defined for |P| < 1.
PhaseState from_compact(const CompactState& s);

// Below this drive norm the direction a_hat is treated as undefined.
inline constexpr double kDriveFloor = 1e-14;

struct DiagnosticSample {
  Vec a;
  double a_norm = 0.0;
  std::optional<Vec> a_hat;
  std::optional<double> mu;
  std::optional<double> nu;
  double curvature = 0.0;
  double lambda = 0.0;
  double V = 0.0;
  double delta_total = 0.0;
  double delta_W = 0.0;
  double z = 0.0;
  Vec Z;
  Vec W;
};

struct VectorField {
  Vec dC;
  Vec dT;
};

VectorField vector_field(const SolitonParams& p, const PhaseState& s);

DiagnosticSample sample(const SolitonParams& p, const PhaseState& s);

// e^{alpha/2 |C|^2 + <v,C>} |p_T(A C)|^2.
double lyapunov_rate(const SolitonParams& p, const PhaseState& s);

double lyapunov_value(const SolitonParams& p, const PhaseState& s);

// V in the compactified coordinates; 0 on |P| = 1 when alpha < 0.
double lyapunov_value_compact(const SolitonParams& p, const CompactState& s);

}  // namespace sl
