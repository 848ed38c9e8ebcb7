#include "solitonlab/symmetry.hpp"

#include <cmath>

namespace sl {

namespace {
constexpr double kZero = 1e-14;
}

const char* category_name(Category c) {
  switch (c) {
    case Category::A: return "A";
    case Category::B: return "B";
    case Category::C: return "C";
  }
  return "?";
}

CanonicalGenerator classify(const GeneratorRaw& raw) {
  const auto n = raw.M.rows();
  if (raw.M.cols() != n || raw.v.size() != n || n == 0)
    fail(ErrorCode::invalid_argument, "classify: M must be n x n and v of length n");
  // Validates antisymmetry as a side effect.
  const SkewSpectrum raw_spec = skew_normal_form(raw.M);
  const Mat& M = raw_spec.matrix();
  if (std::abs(raw.theta) <= kZero && std::abs(raw.w) <= kZero && raw.v.norm() <= kZero && raw_spec.is_zero())
    fail(ErrorCode::invalid_argument, "classify: trivial subgroup (all generator components vanish)");

  // Multiplying the generator by -1 gives the same subgroup and makes w >= 0.
  const double sign = raw.w < 0 ? -1.0 : 1.0;
  Conjugation cj;
  CanonicalGenerator out;
  const Mat I = Mat::Identity(n, n);

  if (std::abs(raw.theta) > kZero) {
    const Mat A = raw.theta * I + M;
    cj.p = -A.partialPivLu().solve(raw.v);
    cj.time_shift = -raw.w / (2.0 * raw.theta);
    cj.scale = 1.0;
    // Rescaling by 1/(sign*theta) after the sign flip.
    cj.multiple = 1.0 / raw.theta;
    out.category = Category::C;
  } else {
    cj.p = -raw_spec.pseudo_inverse() * raw.v;
    cj.time_shift = 0.0;
    const double w = std::abs(raw.w);
    cj.scale = w > kZero ? std::sqrt(w) : 1.0;
    cj.multiple = sign;
    out.category = w > kZero ? Category::B : Category::A;
    const Vec vn = raw.v + M * cj.p;
    if (out.category == Category::A && vn.norm() <= kZero && raw_spec.is_zero())
      fail(ErrorCode::invalid_argument, "classify: trivial subgroup after normalization");
  }

  const double k = cj.multiple;
  const SkewSpectrum scaled = skew_normal_form(k * M);
  cj.S = scaled.orthogonal_frame();
  Mat Mhat = cj.S.transpose() * (k * M) * cj.S;
  Mhat = 0.5 * (Mhat - Mhat.transpose());
  out.spectrum = skew_normal_form(Mhat);

  const Vec shifted = raw.v + (raw.theta * I + M) * cj.p;
  out.theta = k * raw.theta;
  out.w = k * (raw.w + 2.0 * raw.theta * cj.time_shift) / sqr(cj.scale);
  out.v_hat = k * cj.S.transpose() * shifted / cj.scale;
  if (out.category == Category::C) {
    out.theta = 1.0;
    out.w = 0.0;
    out.v_hat.setZero();
  } else {
    out.theta = 0.0;
    out.w = out.category == Category::B ? 1.0 : 0.0;
    // Remove the range component left by round-off; it is zero exactly.
    out.v_hat = out.spectrum.null_projector() * out.v_hat;
  }
  out.conjugation = cj;
  return out;
}

GeneratorRaw to_raw(const CanonicalGenerator& g) {
  const auto& cj = g.conjugation;
  const auto n = g.v_hat.size();
  const double k = cj.multiple;
  GeneratorRaw r;
  r.theta = g.theta / k;
  r.M = cj.S * g.spectrum.matrix() * cj.S.transpose() / k;
  r.v = cj.scale * cj.S * g.v_hat / k - (r.theta * Mat::Identity(n, n) + r.M) * cj.p;
  r.w = sqr(cj.scale) * g.w / k - 2.0 * r.theta * cj.time_shift;
  return r;
}

SpaceTimePoint orbit(const CanonicalGenerator& g, double eps, const Vec& x0, double t0) {
  SpaceTimePoint out;
  const Mat R = rotation_exp(g.spectrum, eps);
  switch (g.category) {
    case Category::A:
      out.x = R * x0 + eps * g.v_hat;
      out.t = t0;
      break;
    case Category::B:
      out.x = R * x0 + eps * g.v_hat;
      out.t = t0 + eps;
      break;
    case Category::C:
      out.x = std::exp(eps) * (R * x0);
      out.t = std::exp(2.0 * eps) * t0;
      break;
  }
  return out;
}

SpaceTimePoint orbit_raw(const CanonicalGenerator& g, double eps, const Vec& x0, double t0) {
  const auto& cj = g.conjugation;
  const Vec xh = cj.S.transpose() * (x0 - cj.p) / cj.scale;
  const double th = (t0 - cj.time_shift) / sqr(cj.scale);
  const SpaceTimePoint h = orbit(g, eps / cj.multiple, xh, th);
  return {cj.scale * cj.S * h.x + cj.p, sqr(cj.scale) * h.t + cj.time_shift};
}

}  // namespace sl
