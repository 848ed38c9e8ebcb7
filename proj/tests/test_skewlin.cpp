#include "doctest.h"

#include <cmath>
#include <random>

#include "solitonlab/skewlin.hpp"

using namespace sl;

namespace {

Mat random_skew(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g;
  Mat m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = g(rng);
  return m - m.transpose();
}

// Truncated power series, independent of the spectral route.
Mat exp_series(const Mat& m, int terms) {
  Mat out = Mat::Identity(m.rows(), m.cols());
  Mat term = out;
  for (int k = 1; k < terms; ++k) {
    term = term * m / static_cast<double>(k);
    out += term;
  }
  return out;
}

}  // namespace

TEST_CASE("zero matrix has no planes and the standard null basis") {
  const auto s = skew_normal_form(Mat::Zero(3, 3));
  CHECK(s.plane_count() == 0);
  CHECK(s.is_zero());
  CHECK((s.null_basis() - Mat::Identity(3, 3)).norm() == 0.0);
}

TEST_CASE("single 2x2 block") {
  Mat m(2, 2);
  m << 0, -2, 2, 0;
  const auto s = skew_normal_form(m);
  REQUIRE(s.plane_count() == 1);
  CHECK(s.planes()[0].omega == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(s.null_basis().cols() == 0);
  const auto& p = s.planes()[0];
  CHECK((m * p.e1 - p.omega * p.e2).norm() < 1e-14);
  CHECK((m * p.e2 + p.omega * p.e1).norm() < 1e-14);
}

TEST_CASE("two distinct rates in R^4 give two eigenspaces") {
  const auto s = skew_normal_form(skew_block_matrix(4, {0.5, 2.0}));
  const auto& cl = s.distinct_frequencies();
  REQUIRE(cl.size() == 2);
  CHECK(cl[0].omega == doctest::Approx(0.5));
  CHECK(cl[1].omega == doctest::Approx(2.0));
  CHECK(cl[0].basis.cols() == 2);
  CHECK(cl[1].basis.cols() == 2);
  for (const auto& c : cl) {
    const Mat j2 = c.complex_structure * c.complex_structure;
    CHECK((j2 + Mat::Identity(2, 2)).norm() < 1e-12);
  }
}

TEST_CASE("repeated frequency forms one eigenspace") {
  const auto s = skew_normal_form(skew_block_matrix(5, {1.0, 1.0}));
  REQUIRE(s.distinct_frequencies().size() == 1);
  CHECK(s.distinct_frequencies()[0].basis.cols() == 4);
  CHECK(s.null_basis().cols() == 1);
}

TEST_CASE("non-antisymmetric input is rejected") {
  Mat m(2, 2);
  m << 0, 1, 1, 0;
  try {
    skew_normal_form(m);
    FAIL("expected an exception");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::not_antisymmetric);
  }
  CHECK_THROWS_AS(skew_normal_form(Mat::Zero(2, 3)), Error);
}

TEST_CASE("resonance detection") {
  const auto r = skew_normal_form(skew_block_matrix(4, {1.0, 2.0})).resonance();
  CHECK(r.resonant);
  CHECK(r.base_rate == doctest::Approx(1.0));
  REQUIRE(r.multipliers.size() == 2);
  CHECK(r.multipliers[0] == 1);
  CHECK(r.multipliers[1] == 2);
  const auto q = skew_normal_form(skew_block_matrix(4, {1.0, std::sqrt(2.0)})).resonance();
  CHECK_FALSE(q.resonant);
  CHECK(q.commensurate_groups.size() == 2);
}

TEST_CASE("rotation_exp basics") {
  const auto s = skew_normal_form(skew_block_matrix(2, {1.0}));
  CHECK((rotation_exp(s, 0.0) - Mat::Identity(2, 2)).norm() < 1e-15);
  Vec e1(2), e2(2);
  e1 << 1, 0;
  e2 << 0, 1;
  CHECK((rotation_exp(s, M_PI / 2) * e1 - e2).norm() < 1e-15);
}

TEST_CASE("rotation_exp against the power series") {
  std::mt19937_64 rng(11);
  for (int n : {2, 3, 5, 6}) {
    const Mat m = random_skew(rng, n);
    const auto s = skew_normal_form(m);
    const Mat q = rotation_exp(s, 0.7);
    CHECK((q - exp_series(0.7 * m, 60)).norm() < 1e-10);
    CHECK((q.transpose() * q - Mat::Identity(n, n)).norm() < 1e-12);
    CHECK(q.determinant() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("dilate_rotate_exp") {
  const auto zero = skew_normal_form(Mat::Zero(3, 3));
  CHECK((dilate_rotate_exp(0.3, zero, 0.0) - Mat::Identity(3, 3)).norm() < 1e-15);
  CHECK((dilate_rotate_exp(1.0, zero, std::log(2.0)) - 2.0 * Mat::Identity(3, 3)).norm() < 1e-14);

  // Planar logarithmic spiral: the radius grows by e^{2 pi} per turn and the
  // point is at polar angle sigma.
  const auto s = skew_normal_form(skew_block_matrix(2, {1.0}));
  Vec x(2);
  x << 1, 0;
  for (double sigma = 0.0; sigma <= 4.0 * M_PI; sigma += 0.25) {
    const Vec y = dilate_rotate_exp(1.0, s, sigma) * x;
    CHECK(std::abs(y.norm() - std::exp(sigma)) < 1e-9 * std::exp(sigma));
    CHECK(std::abs(y[0] - std::exp(sigma) * std::cos(sigma)) < 1e-9 * std::exp(sigma));
    CHECK(std::abs(y[1] - std::exp(sigma) * std::sin(sigma)) < 1e-9 * std::exp(sigma));
  }
  const Vec a = dilate_rotate_exp(1.0, s, 0.4) * x;
  const Vec b = dilate_rotate_exp(1.0, s, 0.4 + 2 * M_PI) * x;
  CHECK(b.norm() / a.norm() == doctest::Approx(std::exp(2 * M_PI)).epsilon(1e-9));
}

TEST_CASE("projectors and pseudo inverse") {
  std::mt19937_64 rng(5);
  for (int n : {3, 4, 5}) {
    // Rank-deficient skew matrix: embed a random block in a smaller space.
    Mat m = Mat::Zero(n, n);
    m.topLeftCorner(n - 1, n - 1) = random_skew(rng, n - 1);
    const auto s = skew_normal_form(m);
    const Mat pn = s.null_projector(), pr = s.range_projector(), I = Mat::Identity(n, n);
    CHECK((pn + pr - I).norm() < 1e-12);
    CHECK((pn * pr).norm() < 1e-12);
    CHECK((pn * m).norm() < 1e-12);
    CHECK((m * pn).norm() < 1e-12);
    CHECK((m * s.pseudo_inverse() * m - m).norm() < 1e-10);
  }
}

TEST_CASE("rational approximation") {
  const auto r = rational_approximation(1.5, 64, 1e-12);
  REQUIRE(r);
  CHECK(r->first == 3);
  CHECK(r->second == 2);
  CHECK_FALSE(rational_approximation(M_PI, 64, 1e-9));
}
