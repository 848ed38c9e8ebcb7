#pragma once

#include <optional>
#include <vector>

#include "solitonlab/common.hpp"

namespace sl {

// One invariant plane E_j of a skew matrix: M e1 = omega e2, M e2 = -omega e1.
struct RotationPlane {
  double omega = 0.0;
  Vec e1;
  Vec e2;
};

// Eigenspace F_k of M^2 for one distinct nonzero frequency. `basis` columns
// are orthonormal and come in (e1, e2) pairs; `complex_structure` is
// J_k = M|F_k / Omega_k expressed in that basis.
struct FrequencyClass {
  double omega = 0.0;
  Mat basis;
  Mat complex_structure;
  std::vector<int> plane_indices;
};

// Commensurability of the plane frequencies. When `resonant`, every omega_j
// equals multipliers[j] * base_rate. Otherwise `commensurate_groups` lists
// maximal sets of plane indices whose frequencies are pairwise rational.
struct ResonanceInfo {
  bool resonant = false;
  double base_rate = 0.0;
  std::vector<long> multipliers;
  std::vector<std::vector<int>> commensurate_groups;
};

// Normal form of a real antisymmetric matrix. Immutable once built.
class SkewSpectrum {
 public:
  int dimension() const { return n_; }
  const std::vector<RotationPlane>& planes() const { return planes_; }
  const Mat& null_basis() const { return null_basis_; }
  const std::vector<FrequencyClass>& distinct_frequencies() const { return classes_; }
  const ResonanceInfo& resonance() const { return resonance_; }

  // Rank of M divided by two.
  int plane_count() const { return static_cast<int>(planes_.size()); }
  bool is_zero() const { return planes_.empty(); }

  // The matrix assembled from the blocks.
  const Mat& matrix() const { return matrix_; }
  // Columns: e1_1, e2_1, ..., e1_m, e2_m, null basis. Orthogonal.
  Mat orthogonal_frame() const;

  Mat null_projector() const;
  Mat range_projector() const;
  // Moore-Penrose inverse, inverted per plane and zero on the null space.
  Mat pseudo_inverse() const;
  // Largest frequency; operator norm of M.
  double max_frequency() const { return planes_.empty() ? 0.0 : planes_.back().omega; }

 private:
  friend SkewSpectrum skew_normal_form(const Mat& m);
  friend SkewSpectrum skew_from_blocks(int n, const std::vector<RotationPlane>& planes);
  void finalize();

  int n_ = 0;
  std::vector<RotationPlane> planes_;
  Mat null_basis_;
  std::vector<FrequencyClass> classes_;
  ResonanceInfo resonance_;
  Mat matrix_;
};

// Relative tolerance for grouping frequencies into one eigenspace.
inline constexpr double kFrequencyGroupingTol = 1e-9;
// Largest denominator used when searching frequency ratios for resonances.
inline constexpr long kResonanceDenominatorBound = 64;

// Throws Error(not_antisymmetric) for non-square or non-skew input.
SkewSpectrum skew_normal_form(const Mat& m);

// Builds a spectrum directly from orthonormal plane data (used for configs
// given in block form). Planes must be orthonormal and mutually orthogonal.
SkewSpectrum skew_from_blocks(int n, const std::vector<RotationPlane>& planes);

// Convenience: block matrix with omega_j J in coordinate planes (2j, 2j+1).
Mat skew_block_matrix(int n, const std::vector<double>& omegas);

// e^{theta M}, assembled from per-plane rotations.
Mat rotation_exp(const SkewSpectrum& spectrum, double theta);

// e^{sigma (alpha + M)} = e^{alpha sigma} e^{sigma M}.
Mat dilate_rotate_exp(double alpha, const SkewSpectrum& spectrum, double sigma);

// Rational approximation p/q of x with q <= bound and |x - p/q| <= tol*|x|.
std::optional<std::pair<long, long>> rational_approximation(double x, long bound, double tol);

}  // namespace sl
