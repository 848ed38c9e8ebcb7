#include "solitonlab/skewlin.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace sl {

namespace {

// Picks a unit vector of the subspace spanned by the columns of `basis`
// (orthonormal) that is also orthogonal to `taken`: the normalized projection
// of the standard basis vector with the largest remaining projection.
// Deterministic, and returns coordinate axes whenever the subspace contains
// them.
Vec pivot_vector(const Mat& basis, const std::vector<Vec>& taken) {
  const int n = static_cast<int>(basis.rows());
  Vec best;
  double best_norm = -1.0;
  for (int i = 0; i < n; ++i) {
    Vec x = basis * basis.row(i).transpose();
    for (const auto& t : taken) x -= t.dot(x) * t;
    for (const auto& t : taken) x -= t.dot(x) * t;
    const double nx = x.norm();
    if (nx > best_norm + 1e-12) {
      best_norm = nx;
      best = x;
    }
  }
  return best / best_norm;
}

// Flip so the largest-magnitude component is positive (first one on ties).
double canonical_sign(const Vec& x) {
  int idx = 0;
  for (int i = 1; i < x.size(); ++i)
    if (std::abs(x[i]) > std::abs(x[idx]) + 1e-12) idx = i;
  return x[idx] < 0 ? -1.0 : 1.0;
}

// Descending lexicographic comparison with a small tolerance.
bool lex_greater(const Vec& a, const Vec& b) {
  for (int i = 0; i < a.size(); ++i) {
    if (a[i] > b[i] + 1e-12) return true;
    if (a[i] < b[i] - 1e-12) return false;
  }
  return false;
}

bool same_frequency(double a, double b) {
  return std::abs(a - b) <= kFrequencyGroupingTol * std::max(std::abs(a), std::abs(b));
}

}  // namespace

std::optional<std::pair<long, long>> rational_approximation(double x, long bound, double tol) {
  for (long q = 1; q <= bound; ++q) {
    const double p = std::round(x * q);
    if (std::abs(x - p / q) <= tol * std::abs(x)) return std::make_pair(static_cast<long>(p), q);
  }
  return std::nullopt;
}

SkewSpectrum skew_normal_form(const Mat& m) {
  if (m.rows() != m.cols() || m.rows() == 0)
    fail(ErrorCode::not_antisymmetric, "skew_normal_form: matrix must be square and non-empty");
  const int n = static_cast<int>(m.rows());
  const double mnorm = m.norm();
  const double asym = (m + m.transpose()).norm();
  const double bound = mnorm > 1e-12 ? 1e-12 * mnorm : 1e-12;
  if (!(asym <= bound)) {
    std::ostringstream os;
    os << "skew_normal_form: matrix is not antisymmetric (|M+M^T| = " << asym << ")";
    fail(ErrorCode::not_antisymmetric, os.str());
  }
  const Mat skew = 0.5 * (m - m.transpose());

  SkewSpectrum out;
  out.n_ = n;
  Eigen::SelfAdjointEigenSolver<Mat> eig(-(skew * skew));
  const Vec evals = eig.eigenvalues().cwiseMax(0.0);
  const Mat evecs = eig.eigenvectors();
  const double scale = std::max(evals.maxCoeff(), 0.0);
  // Eigenvalues of -M^2 carry absolute error ~ eps * |M|^2, so the null
  // cluster is cut well above that.
  const double null_cut = 1e-12 * scale;

  // Cluster eigenvalues (ascending) into the null space and distinct omegas.
  std::vector<std::vector<int>> clusters;
  std::vector<int> null_idx;
  for (int i = 0; i < n; ++i) {
    if (scale == 0.0 || evals[i] <= null_cut) {
      null_idx.push_back(i);
      continue;
    }
    const double w = std::sqrt(evals[i]);
    if (!clusters.empty() && same_frequency(std::sqrt(evals[clusters.back().back()]), w))
      clusters.back().push_back(i);
    else
      clusters.push_back({i});
  }

  std::vector<Vec> taken;
  for (const auto& cl : clusters) {
    Mat sub(n, static_cast<Eigen::Index>(cl.size()));
    for (size_t k = 0; k < cl.size(); ++k) sub.col(static_cast<Eigen::Index>(k)) = evecs.col(cl[k]);
    // An odd cluster size means two distinct frequencies straddle the
    // grouping tolerance; pair as many planes as possible.
    const int pairs = static_cast<int>(cl.size()) / 2;
    std::vector<RotationPlane> group;
    for (int p = 0; p < pairs; ++p) {
      Vec u = pivot_vector(sub, taken);
      Vec mu = skew * u;
      for (const auto& t : taken) mu -= t.dot(mu) * t;
      mu -= u.dot(mu) * u;
      const double w = mu.norm();
      Vec e2 = mu / w;
      const double sgn = canonical_sign(u);
      RotationPlane plane{w, sgn * u, sgn * e2};
      taken.push_back(u);
      taken.push_back(e2);
      group.push_back(plane);
    }
    std::stable_sort(group.begin(), group.end(), [](const RotationPlane& a, const RotationPlane& b) {
      if (!same_frequency(a.omega, b.omega)) return a.omega < b.omega;
      return lex_greater(a.e1, b.e1);
    });
    for (auto& g : group) out.planes_.push_back(std::move(g));
  }

  // Null basis: Gram-Schmidt of pivoted standard-basis projections onto the
  // orthogonal complement of the planes.
  const int null_dim = n - 2 * static_cast<int>(out.planes_.size());
  out.null_basis_ = Mat(n, null_dim);
  {
    Mat full = Mat::Identity(n, n);
    std::vector<Vec> nulls;
    for (int k = 0; k < null_dim; ++k) {
      std::vector<Vec> all = taken;
      all.insert(all.end(), nulls.begin(), nulls.end());
      Vec u = pivot_vector(full, all);
      u *= canonical_sign(u);
      nulls.push_back(u);
      out.null_basis_.col(k) = u;
    }
  }
  out.finalize();
  return out;
}

SkewSpectrum skew_from_blocks(int n, const std::vector<RotationPlane>& planes) {
  if (n <= 0) fail(ErrorCode::invalid_argument, "skew_from_blocks: dimension must be positive");
  if (2 * static_cast<int>(planes.size()) > n)
    fail(ErrorCode::invalid_argument, "skew_from_blocks: too many planes for dimension");
  Mat m = Mat::Zero(n, n);
  for (const auto& p : planes) {
    if (p.e1.size() != n || p.e2.size() != n)
      fail(ErrorCode::invalid_argument, "skew_from_blocks: plane vector has wrong dimension");
    if (!(p.omega > 0.0)) fail(ErrorCode::invalid_argument, "skew_from_blocks: frequencies must be positive");
    m += p.omega * (p.e2 * p.e1.transpose() - p.e1 * p.e2.transpose());
  }
  return skew_normal_form(m);
}

void SkewSpectrum::finalize() {
  matrix_ = Mat::Zero(n_, n_);
  for (const auto& p : planes_) matrix_ += p.omega * (p.e2 * p.e1.transpose() - p.e1 * p.e2.transpose());

  classes_.clear();
  for (int j = 0; j < static_cast<int>(planes_.size()); ++j) {
    if (classes_.empty() || !same_frequency(classes_.back().omega, planes_[j].omega))
      classes_.push_back(FrequencyClass{planes_[j].omega, Mat(), Mat(), {}});
    classes_.back().plane_indices.push_back(j);
  }
  for (auto& c : classes_) {
    const int d = 2 * static_cast<int>(c.plane_indices.size());
    c.basis = Mat(n_, d);
    double sum = 0.0;
    for (size_t k = 0; k < c.plane_indices.size(); ++k) {
      const auto& p = planes_[c.plane_indices[k]];
      c.basis.col(static_cast<Eigen::Index>(2 * k)) = p.e1;
      c.basis.col(static_cast<Eigen::Index>(2 * k + 1)) = p.e2;
      sum += p.omega;
    }
    c.omega = sum / static_cast<double>(c.plane_indices.size());
    c.complex_structure = c.basis.transpose() * matrix_ * c.basis / c.omega;
  }

  resonance_ = ResonanceInfo{};
  if (planes_.empty()) return;
  const int m = static_cast<int>(planes_.size());
  // Commensurate groups via pairwise rational ratios against a representative.
  std::vector<int> group_of(m, -1);
  for (int j = 0; j < m; ++j) {
    if (group_of[j] >= 0) continue;
    group_of[j] = static_cast<int>(resonance_.commensurate_groups.size());
    resonance_.commensurate_groups.push_back({j});
    for (int k = j + 1; k < m; ++k) {
      if (group_of[k] >= 0) continue;
      if (rational_approximation(planes_[k].omega / planes_[j].omega, kResonanceDenominatorBound,
                                 kFrequencyGroupingTol)) {
        group_of[k] = group_of[j];
        resonance_.commensurate_groups.back().push_back(k);
      }
    }
  }
  if (resonance_.commensurate_groups.size() == 1) {
    long l = 1;
    std::vector<std::pair<long, long>> ratios;
    for (int j = 0; j < m; ++j) {
      auto r = rational_approximation(planes_[j].omega / planes_[0].omega, kResonanceDenominatorBound,
                                      kFrequencyGroupingTol);
      ratios.push_back(*r);
      l = std::lcm(l, r->second);
    }
    long g = 0;
    for (const auto& [p, q] : ratios) g = std::gcd(g, p * (l / q));
    resonance_.resonant = true;
    resonance_.base_rate = planes_[0].omega * static_cast<double>(g) / static_cast<double>(l);
    for (const auto& [p, q] : ratios) resonance_.multipliers.push_back(p * (l / q) / g);
  }
}

Mat SkewSpectrum::orthogonal_frame() const {
  Mat q(n_, n_);
  int c = 0;
  for (const auto& p : planes_) {
    q.col(c++) = p.e1;
    q.col(c++) = p.e2;
  }
  for (int k = 0; k < null_basis_.cols(); ++k) q.col(c++) = null_basis_.col(k);
  return q;
}

Mat SkewSpectrum::null_projector() const { return null_basis_ * null_basis_.transpose(); }

Mat SkewSpectrum::range_projector() const {
  Mat r = Mat::Zero(n_, n_);
  for (const auto& p : planes_) r += p.e1 * p.e1.transpose() + p.e2 * p.e2.transpose();
  return r;
}

Mat SkewSpectrum::pseudo_inverse() const {
  Mat r = Mat::Zero(n_, n_);
  for (const auto& p : planes_) r += (p.e1 * p.e2.transpose() - p.e2 * p.e1.transpose()) / p.omega;
  return r;
}

Mat skew_block_matrix(int n, const std::vector<double>& omegas) {
  if (2 * static_cast<int>(omegas.size()) > n)
    fail(ErrorCode::invalid_argument, "skew_block_matrix: too many blocks");
  Mat m = Mat::Zero(n, n);
  for (size_t j = 0; j < omegas.size(); ++j) {
    const auto i = static_cast<Eigen::Index>(2 * j);
    m(i + 1, i) = omegas[j];
    m(i, i + 1) = -omegas[j];
  }
  return m;
}

Mat rotation_exp(const SkewSpectrum& spectrum, double theta) {
  Mat r = spectrum.null_projector();
  for (const auto& p : spectrum.planes()) {
    const double c = std::cos(p.omega * theta);
    const double s = std::sin(p.omega * theta);
    r += c * (p.e1 * p.e1.transpose() + p.e2 * p.e2.transpose()) +
         s * (p.e2 * p.e1.transpose() - p.e1 * p.e2.transpose());
  }
  return r;
}

Mat dilate_rotate_exp(double alpha, const SkewSpectrum& spectrum, double sigma) {
  return std::exp(alpha * sigma) * rotation_exp(spectrum, sigma);
}

}  // namespace sl
