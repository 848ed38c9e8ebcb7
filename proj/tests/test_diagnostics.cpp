#include "doctest.h"

#include <cmath>
#include <random>

#include "solitonlab/diagnostics.hpp"

using namespace sl;

namespace {

Vec vec(std::initializer_list<double> xs) {
  Vec v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

Trajectory run(const SolitonParams& p, const PhaseState& st, double s_minus, double s_plus, double h) {
  IntegrateOptions o;
  o.grid_spacing = h;
  o.tol = 1e-12;
  o.c_cap = 1e8;
  return integrate_both(p, st, s_minus, s_plus, o);
}

}  // namespace

TEST_CASE("diagnostics on the unit circle") {
  const SolitonParams p(-1.0, skew_block_matrix(2, {1.0}), Vec::Zero(2));
  const auto d = sample(p, {vec({1, 0}), vec({0, 1})});
  CHECK(d.V == doctest::Approx(std::exp(-0.5)).epsilon(1e-15));
  CHECK(d.a_norm == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  REQUIRE(d.mu);
  REQUIRE(d.nu);
  CHECK(*d.mu == doctest::Approx(1 / std::sqrt(2.0)).epsilon(1e-15));
  CHECK(*d.nu == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(d.curvature == doctest::Approx(1.0).epsilon(1e-14));
  const auto r = sample(p, {vec({1, 0}), vec({0, -1})});
  CHECK(r.V == doctest::Approx(-std::exp(-0.5)).epsilon(1e-15));
  CHECK(*r.mu == doctest::Approx(-1 / std::sqrt(2.0)).epsilon(1e-15));
}

TEST_CASE("V vanishes on the null space and the rate on A C parallel to T") {
  const SolitonParams p(-0.7, skew_block_matrix(3, {2.0}), Vec::Zero(3));
  CHECK(lyapunov_value(p, {vec({0, 0, 1.3}), vec({1, 0, 0})}) == 0.0);
  const Vec C = vec({1, 0, 0.4});
  const Vec T = (p.A() * C).normalized();
  CHECK(lyapunov_rate(p, {C, T}) < 1e-30);
}

TEST_CASE("T orthogonal to the drive") {
  const SolitonParams p(0.5, skew_block_matrix(3, {1.0}), Vec::Zero(3));
  const Vec C = vec({1, 2, 0.5});
  const Vec a = p.drive(C);
  Vec T = vec({0, 0, 1});
  T = perp(T, a.normalized()).normalized();
  const auto d = sample(p, {C, T});
  CHECK(std::abs(*d.mu) < 1e-15);
  CHECK(d.curvature == doctest::Approx(a.norm()).epsilon(1e-14));
}

TEST_CASE("sample invariants on random states") {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g;
  const SolitonParams p(-0.3, skew_block_matrix(4, {0.5, 2.0}), Vec::Zero(4));
  for (int i = 0; i < 500; ++i) {
    Vec C(4), T(4);
    for (int k = 0; k < 4; ++k) C[k] = 2 * g(rng), T[k] = g(rng);
    T.normalize();
    const auto d = sample(p, {C, T});
    REQUIRE(d.mu);
    CHECK(std::abs(*d.mu) <= 1.0);
    CHECK(*d.nu >= 0.0);
    CHECK(sqr(d.curvature) == doctest::Approx(*d.nu / sqr(d.a_norm)).epsilon(1e-10));
  }
  // a = 0: direction undefined.
  const auto z = sample(p, {Vec::Zero(4), vec({1, 0, 0, 0})});
  CHECK_FALSE(z.mu);
  CHECK_FALSE(z.nu);
}

TEST_CASE("compact V agrees with V") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  const SolitonParams p(-0.8, skew_block_matrix(3, {1.5}), Vec::Zero(3));
  for (int i = 0; i < 200; ++i) {
    Vec C(3), T(3);
    for (int k = 0; k < 3; ++k) C[k] = 2 * g(rng), T[k] = g(rng);
    T.normalize();
    const double V = lyapunov_value(p, {C, T});
    const double Vc = lyapunov_value_compact(p, to_compact({C, T}));
    CHECK(std::abs(V - Vc) < 1e-10 * std::max(1.0, std::abs(V)));
  }
  CHECK(lyapunov_value_compact(p, {vec({0.6, 0.8, 0}), vec({0, 0, 1})}) == 0.0);
}

TEST_CASE("Lyapunov derivative along a shrinking-rotating orbit") {
  const SolitonParams p(-1.0, skew_block_matrix(3, {1.0}), Vec::Zero(3));
  const auto tr = run(p, {vec({0.3, 0.5, 1.0}), vec({0.6, 0, 0.8})}, -4, 8, 0.01);
  REQUIRE(tr.termination == Termination::completed);
  const auto lc = check_lyapunov(tr);
  CHECK(lc.worst_dip_per_length <= 1e-8);
  CHECK(lc.compared > 100);
  CHECK(lc.max_rel_error < 1e-4);
  CHECK(lc.strict_increase);
}

TEST_CASE("distance ODE residuals") {
  SUBCASE("straight line, closed form") {
    // delta = s^2/2, lambda = -alpha s: delta'' - lambda delta' - 2 alpha delta = 1 = |C_s|^2.
    const double alpha = -0.6;
    const SolitonParams p(alpha, skew_block_matrix(3, {1.0}), Vec::Zero(3));
    Trajectory tr(p);
    for (int i = -200; i <= 200; ++i) {
      const double s = 0.01 * i;
      TrajectorySample smp;
      smp.s = s;
      smp.state = {vec({0, 0, s}), vec({0, 0, 1})};
      smp.diag = sample(p, smp.state);
      tr.samples.push_back(smp);
    }
    CHECK(distance_ode_residual(tr, Mat::Identity(3, 3)).max < 1e-9);
  }
  SUBCASE("shrinker with B = I, second order") {
    const SolitonParams p(-1.0, skew_block_matrix(3, {1.0}), Vec::Zero(3));
    const PhaseState st{vec({0.3, 0.5, 1.0}), vec({0.6, 0, 0.8})};
    const double coarse = distance_ode_residual(run(p, st, -3, 3, 5e-4), Mat::Identity(3, 3)).max;
    const double fine = distance_ode_residual(run(p, st, -3, 3, 2.5e-4), Mat::Identity(3, 3)).max;
    CHECK(fine < 1e-6);
    CHECK(coarse / fine == doctest::Approx(4.0).epsilon(0.15));
  }
  SUBCASE("rotating-translating with B = range projector") {
    const SolitonParams p(0.0, skew_block_matrix(3, {1.0}), vec({0, 0, 1}));
    const PhaseState st{vec({1, 0, 0}), vec({0, 0.6, 0.8})};
    const double coarse = distance_ode_residual(run(p, st, -3, 3, 1e-3), p.range_projector()).max;
    const double fine = distance_ode_residual(run(p, st, -3, 3, 5e-4), p.range_projector()).max;
    CHECK(fine < 1e-5);
    CHECK(coarse / fine == doctest::Approx(4.0).epsilon(0.15));
    CHECK(z_ode_residual(run(p, st, -3, 3, 1e-3)).max < 1e-5);
  }
}

TEST_CASE("lambda derivative when alpha = 0") {
  const SolitonParams p(0.0, skew_block_matrix(3, {1.0}), vec({0, 0, 1}));
  const auto tr = run(p, {vec({1, 0, 0}), vec({0, 0.6, 0.8})}, -3, 3, 1e-3);
  CHECK(lambda_derivative_residual(tr).max < 1e-6);
}

TEST_CASE("extrema counting") {
  std::vector<double> s, x;
  for (int i = -100; i <= 100; ++i) {
    s.push_back(0.05 * i);
    x.push_back(std::cosh(0.05 * i));
  }
  const auto e = count_extrema(s, x);
  CHECK(e.minima == 1);
  CHECK(e.maxima == 0);
  CHECK(e.head_decreasing);
  CHECK(e.tail_increasing);
  const auto c = count_extrema(s, std::vector<double>(s.size(), 2.0));
  CHECK(c.constant);
}

TEST_CASE("monotonicity lemmas") {
  SUBCASE("expanding-rotating: one minimum of |C| and growing ends") {
    const SolitonParams p(1.0, skew_block_matrix(3, {1.0}), Vec::Zero(3));
    const auto tr = run(p, {vec({0.5, 0.2, 0.3}), vec({0.3, 0.3, 0.9}).normalized()}, -4, 4, 0.01);
    const auto rep = monotonicity_report(tr);
    CHECK(rep.regime == Regime::non_shrinking_rotating);
    CHECK(rep.c_norm.minima == 1);
    CHECK(rep.c_norm.maxima == 0);
    CHECK(rep.c_norm.tail_increasing);
    CHECK(rep.c_norm.head_decreasing);
    CHECK(rep.all_passed());
  }
  SUBCASE("translating-rotating: at most one minimum of z") {
    const SolitonParams p(0.0, skew_block_matrix(3, {1.0}), vec({0, 0, 1}));
    const auto tr = run(p, {vec({1, 0, 0}), vec({0, 0.6, 0.8})}, -15, 15, 0.01);
    const auto rep = monotonicity_report(tr);
    CHECK(rep.regime == Regime::translating_rotating);
    CHECK(rep.z.minima <= 1);
    CHECK(rep.w_norm.minima <= 1);
    CHECK(rep.all_passed());
  }
  SUBCASE("circle: constant, lemma not applicable") {
    const SolitonParams p(-1.0, skew_block_matrix(2, {1.0}), Vec::Zero(2));
    const auto tr = run(p, {vec({1, 0}), vec({0, 1})}, 0, 10, 0.01);
    const auto rep = monotonicity_report(tr, 1e-6);
    CHECK(rep.c_norm.constant);
    CHECK(rep.regime == Regime::shrinking);
  }
}

TEST_CASE("planarity") {
  SUBCASE("planar curve has rank 2") {
    const SolitonParams p(0.0, Mat::Zero(2, 2), vec({0, 1}));
    const auto tr = run(p, {vec({0, 0}), vec({1, 0})}, -2, 2, 0.01);
    CHECK(planarity_check(tr).rank == 2);
  }
  SUBCASE("dilating-rotating in R^5 with rank-2 A") {
    const SolitonParams p(0.5, skew_block_matrix(5, {1.0}), Vec::Zero(5));
    const auto tr = run(p, {vec({0.4, -0.2, 1.0, 0.3, -0.7}), vec({0.1, 0.5, -0.3, 0.6, 0.2}).normalized()}, -3, 3,
                        0.01);
    const auto rep = planarity_check(tr);
    REQUIRE(rep.singular_values.size() == 5);
    CHECK(rep.singular_values[2] < 1e-8 * rep.singular_values[0]);
    CHECK(rep.expected_max_rank == 2);
    CHECK(rep.passed);
  }
  SUBCASE("purely rotating in R^3 is a graph over the axis") {
    const SolitonParams p(0.0, skew_block_matrix(3, {1.0}), Vec::Zero(3));
    const auto tr = run(p, {vec({1, 0, 0}), vec({0, 0.6, 0.8})}, -6, 6, 0.01);
    const auto rep = planarity_check(tr);
    CHECK(rep.singular_values[1] < 1e-8 * rep.singular_values[0]);
    CHECK(rep.profile.strictly_increasing);
    // Phi_1 comes from trapezoid quadrature at spacing 0.01.
    CHECK(rep.line_deviation < 1e-4);
    CHECK(rep.passed);
  }
}
