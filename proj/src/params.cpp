#include "solitonlab/params.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace sl {

SolitonParams::SolitonParams(double alpha, const Mat& A, const Vec& v)
    : SolitonParams(alpha, skew_normal_form(A), v) {}

SolitonParams::SolitonParams(double alpha, const SkewSpectrum& spectrum, const Vec& v)
    : alpha_(alpha), spectrum_(spectrum), v_(v) {
  if (!std::isfinite(alpha)) fail(ErrorCode::invalid_argument, "alpha must be finite");
  if (v_.size() != spectrum_.dimension())
    fail(ErrorCode::invalid_argument, "translation vector v has the wrong dimension");
  pi_n_ = spectrum_.null_projector();
  pi_r_ = spectrum_.range_projector();
  validate();
}

void SolitonParams::validate() const {
  const double av = (A() * v_).norm();
  if (av > 1e-12 * std::max(1.0, A().norm() * v_.norm())) {
    std::ostringstream os;
    os << "constraint A v = 0 violated (|A v| = " << av
       << "); translate the origin so that v lies in the null space of A";
    fail(ErrorCode::constraint_violation, os.str());
  }
  if (alpha_ != 0.0 && v_.norm() > 1e-12) {
    std::ostringstream os;
    os << "alpha = " << alpha_ << " with nonzero v: a dilating generator can be conjugated to v = 0 by a "
       << "space translation (category C of the subgroup taxonomy), so this combination is rejected";
    fail(ErrorCode::constraint_violation, os.str());
  }
}

double SolitonParams::drive_norm() const {
  return std::sqrt(sqr(alpha_) + sqr(spectrum_.max_frequency()));
}

void check_state(const SolitonParams& p, const PhaseState& s) {
  if (s.C.size() != p.dimension() || s.T.size() != p.dimension())
    fail(ErrorCode::invalid_argument, "state dimension does not match parameters");
  if (std::abs(s.T.norm() - 1.0) > 1e-12) fail(ErrorCode::invalid_argument, "tangent T must be a unit vector");
  if (!s.C.allFinite()) fail(ErrorCode::invalid_argument, "state is not finite");
}

CompactState to_compact(const PhaseState& s) {
  return {s.C / std::sqrt(1.0 + s.C.squaredNorm()), s.T};
}

PhaseState from_compact(const CompactState& s) {
  const double q = 1.0 - s.P.squaredNorm();
  if (!(q > 0.0)) fail(ErrorCode::domain_error, "point at infinity has no finite preimage");
  return {s.P / std::sqrt(q), s.T};
}

VectorField vector_field(const SolitonParams& p, const PhaseState& s) {
  const Vec a = p.drive(s.C);
  return {s.T, perp(a, s.T)};
}

double lyapunov_value(const SolitonParams& p, const PhaseState& s) {
  const double e = std::exp(0.5 * p.alpha() * s.C.squaredNorm() + p.v().dot(s.C));
  return e * s.T.dot(p.A() * s.C);
}

double lyapunov_rate(const SolitonParams& p, const PhaseState& s) {
  const double e = std::exp(0.5 * p.alpha() * s.C.squaredNorm() + p.v().dot(s.C));
  return e * perp(p.A() * s.C, s.T).squaredNorm();
}

double lyapunov_value_compact(const SolitonParams& p, const CompactState& s) {
  const double q = 1.0 - s.P.squaredNorm();
  if (q <= 0.0) {
    if (p.alpha() < 0.0) return 0.0;
    fail(ErrorCode::domain_error, "V does not extend to the boundary unless alpha < 0");
  }
  const double ex = 0.5 * p.alpha() * s.P.squaredNorm() / q + p.v().dot(s.P) / std::sqrt(q);
  // Underflows to 0 near the boundary, matching the continuous extension.
  return std::exp(ex) / std::sqrt(q) * (p.A() * s.P).dot(s.T);
}

DiagnosticSample sample(const SolitonParams& p, const PhaseState& s) {
  DiagnosticSample d;
  d.a = p.drive(s.C);
  d.a_norm = d.a.norm();
  d.lambda = -d.a.dot(s.T);
  d.curvature = perp(d.a, s.T).norm();
  if (d.a_norm >= kDriveFloor) {
    d.a_hat = d.a / d.a_norm;
    const double mu = std::clamp(d.a_hat->dot(s.T), -1.0, 1.0);
    d.mu = mu;
    // |a|^4 (1 - mu^2) = |a|^2 curvature^2, the latter avoids cancellation.
    d.nu = sqr(d.a_norm) * sqr(d.curvature);
  }
  d.V = lyapunov_value(p, s);
  d.Z = p.null_projector() * s.C;
  d.W = p.range_projector() * s.C;
  d.delta_total = 0.5 * s.C.squaredNorm();
  d.delta_W = 0.5 * d.W.squaredNorm();
  d.z = p.v().dot(s.C);
  return d;
}

}  // namespace sl
