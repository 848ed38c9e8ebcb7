#include "doctest.h"

#include <cmath>
#include <random>

#include "solitonlab/asymptotics.hpp"
#include "solitonlab/soliton.hpp"

using namespace sl;

namespace {

Vec vec(std::initializer_list<double> xs) {
  Vec v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

SolitonParams circle_params() { return SolitonParams(-1.0, skew_block_matrix(2, {1.0}), Vec::Zero(2)); }

// Rotating-translating soliton in R^3: rotation about e3, translation along e3.
SolitonParams rot_trans() { return SolitonParams(0.0, skew_block_matrix(3, {1.0}), vec({0, 0, 1})); }

SolitonParams rot_shrink() { return SolitonParams(-1.0, skew_block_matrix(3, {1.0}), Vec::Zero(3)); }

}  // namespace

TEST_CASE("parameter constraints") {
  CHECK_THROWS_AS(SolitonParams(0.0, skew_block_matrix(3, {1.0}), vec({1, 0, 0})), Error);
  CHECK_THROWS_AS(SolitonParams(0.5, Mat::Zero(2, 2), vec({1, 0})), Error);
  CHECK_NOTHROW(SolitonParams(0.0, skew_block_matrix(3, {1.0}), vec({0, 0, 1})));
  try {
    SolitonParams(0.5, Mat::Zero(2, 2), vec({1, 0}));
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::constraint_violation);
  }
  const auto p = circle_params();
  CHECK_THROWS_AS(check_state(p, {vec({1, 0}), vec({0, 2})}), Error);
  CHECK_THROWS_AS(check_state(p, {vec({1, 0, 0}), vec({0, 1, 0})}), Error);
}

TEST_CASE("vector field by direct substitution") {
  const auto p = circle_params();
  const auto f = vector_field(p, {vec({1, 0}), vec({0, 1})});
  CHECK((p.drive(vec({1, 0})) - vec({-1, 1})).norm() == 0.0);
  CHECK((f.dT - vec({-1, 0})).norm() < 1e-15);
  CHECK((f.dC - vec({0, 1})).norm() == 0.0);

  // T parallel to the drive.
  const Vec a = p.drive(vec({0.3, 0.4}));
  CHECK(vector_field(p, {vec({0.3, 0.4}), a.normalized()}).dT.norm() < 1e-15);

  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  const SolitonParams q(0.4, skew_block_matrix(4, {1.0, 2.5}), Vec::Zero(4));
  for (int i = 0; i < 100; ++i) {
    Vec C(4), T(4);
    for (int k = 0; k < 4; ++k) C[k] = 3 * g(rng), T[k] = g(rng);
    T.normalize();
    CHECK(std::abs(vector_field(q, {C, T}).dT.dot(T)) < 1e-14 * (1 + q.drive(C).norm()));
  }
}

TEST_CASE("lambda relation holds pointwise along trajectories") {
  const auto p = rot_trans();
  const auto tr = integrate_both(p, {vec({1, 0, 0}), vec({0, 0.6, 0.8})}, -6, 6);
  REQUIRE(tr.termination == Termination::completed);
  for (const auto& s : tr.samples) {
    const auto f = vector_field(p, s.state);
    const Vec a = p.drive(s.state.C);
    CHECK((f.dT - s.diag.lambda * s.state.T - a).norm() < 1e-12 * (1 + a.norm()));
    CHECK(std::abs(s.state.T.norm() - 1.0) < 1e-9);
  }
  for (std::size_t i = 1; i < tr.size(); ++i) CHECK(tr.samples[i].s > tr.samples[i - 1].s);
}

TEST_CASE("circle stays on the unit circle") {
  // The orientation against the rotation is forward-unstable (errors grow
  // like e^{s/2}), so it is only followed over a shorter span.
  for (double dir : {1.0, -1.0}) {
    const auto tr = integrate(circle_params(), {vec({1, 0}), vec({0, dir})}, dir > 0 ? 100.0 : 20.0);
    REQUIRE(tr.termination == Termination::completed);
    double worst = 0.0;
    for (const auto& s : tr.samples) worst = std::max(worst, std::abs(s.state.C.norm() - 1.0));
    CHECK(worst < 1e-6);
  }
}

TEST_CASE("line through the origin stays a line") {
  for (double alpha : {-1.0, 0.0, 2.0}) {
    const SolitonParams p(alpha, skew_block_matrix(3, {1.0}), Vec::Zero(3));
    const Vec T = vec({0, 0, 1});
    const auto tr = integrate(p, {vec({0, 0, 0.5}), T}, 10.0, IntegrateOptions{});
    for (const auto& s : tr.samples) {
      CHECK(s.state.C.head(2).norm() < 1e-12);
      CHECK((s.state.T - T).norm() < 1e-12);
      CHECK(s.diag.curvature < 1e-12);
    }
  }
}

TEST_CASE("translating soliton is the Grim Reaper") {
  const SolitonParams p(0.0, Mat::Zero(2, 2), vec({0, 1}));
  const auto tr = integrate_both(p, {vec({0, 0}), vec({1, 0})}, -8, 8);
  REQUIRE(tr.termination == Termination::completed);
  double worst = 0.0;
  for (const auto& s : tr.samples) {
    const double x = s.state.C[0], y = s.state.C[1];
    REQUIRE(std::abs(x) < M_PI / 2);
    worst = std::max(worst, std::abs(y + std::log(std::cos(x))));
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("reversing T traces the backward orbit") {
  const auto p = rot_shrink();
  const PhaseState st{vec({0.8, 0.2, 0.4}), vec({0.1, 0.7, -0.3}).normalized()};
  const auto back = integrate(p, st, -5.0);
  const auto rev = integrate(p, {st.C, -st.T}, 5.0);
  CHECK(hausdorff_distance(positions(back), positions(rev)) < 1e-6);
}

TEST_CASE("compactified flow") {
  const auto p = rot_shrink();
  SUBCASE("boundary sphere is stationary") {
    const CompactState st{vec({0.6, 0, 0.8}), vec({0, 1, 0})};
    Vec dP, dT;
    compact_field(p, st, dP, dT);
    CHECK(dP.norm() == 0.0);
  }
  SUBCASE("interior orbits match the standard flow") {
    const PhaseState st{vec({0.5, -0.3, 0.9}), vec({0.2, 0.9, 0.1}).normalized()};
    IntegrateOptions o;
    o.tol = 1e-12;
    const auto ct = integrate_compactified(p, to_compact(st), 3.0, o);
    REQUIRE(ct.termination == Termination::completed);
    const auto& last = ct.samples.back();
    const auto tr = integrate(p, st, last.s, o);
    CHECK((tr.samples.back().state.C - last.state.C).norm() < 1e-6);
    CHECK((tr.samples.back().state.T - last.state.T).norm() < 1e-6);
    for (const auto& s : ct.samples) CHECK(s.P.norm() <= 1.0 + 1e-12);
  }
  SUBCASE("V along the compact orbit is non-decreasing") {
    const PhaseState st{vec({2.0, -1.0, 0.5}), vec({0.3, 0.5, -0.8}).normalized()};
    IntegrateOptions o;
    o.grid_spacing = 0.01;
    const auto ct = integrate_compactified(p, to_compact(st), 10.0, o);
    for (std::size_t i = 1; i < ct.size(); ++i)
      CHECK(ct.samples[i].diag.V >= ct.samples[i - 1].diag.V - 1e-8 * 0.01);
  }
}

TEST_CASE("family evolution") {
  SUBCASE("reference time gives the profile") {
    const auto p = rot_shrink();
    const std::vector<Vec> prof{vec({1, 2, 3}), vec({-1, 0, 0.5})};
    const auto e = evolve_family(p, prof, family_reference_time(p));
    for (std::size_t i = 0; i < prof.size(); ++i) CHECK((e[i] - prof[i]).norm() < 1e-15);
  }
  SUBCASE("shrinking circle radius follows sqrt(1 + 2 alpha t)") {
    const double alpha = -0.5;
    const SolitonParams p(alpha, skew_block_matrix(2, {1.0}), Vec::Zero(2));
    const std::vector<Vec> prof{vec({std::sqrt(2.0), 0})};
    const double t0 = family_reference_time(p);
    for (double t : {0.1, 0.5, 0.9}) {
      const auto e = evolve_family(p, prof, t0 + t);
      CHECK(e[0].norm() == doctest::Approx(std::sqrt(1 + 2 * alpha * t) * std::sqrt(2.0)).epsilon(1e-14));
    }
  }
  SUBCASE("translating soliton shifts by t v") {
    const SolitonParams p(0.0, Mat::Zero(2, 2), vec({0, 1}));
    const std::vector<Vec> prof{vec({0.3, 0.1}), vec({-1, 2})};
    const auto e = evolve_family(p, prof, 1.7);
    for (std::size_t i = 0; i < prof.size(); ++i) CHECK((e[i] - prof[i] - vec({0, 1.7})).norm() < 1e-15);
  }
}

TEST_CASE("curve shortening residual") {
  SUBCASE("static line") {
    const SolitonParams p(0.0, skew_block_matrix(3, {1.0}), vec({0, 0, 1}));
    std::vector<Vec> prof;
    for (int i = 0; i < 50; ++i) prof.push_back(vec({0, 0, 0.01 * i}));
    CHECK(csf_residual(p, prof, 0.3, 0.01).max < 1e-10);
  }
  const auto check_family = [](const SolitonParams& p, const PhaseState& st, double t) {
    std::vector<double> res;
    for (double h : {2e-3, 1e-3}) {
      IntegrateOptions o;
      o.grid_spacing = h;
      o.tol = 1e-12;
      const auto tr = integrate_both(p, st, -3.0, 3.0, o);
      REQUIRE(tr.termination == Termination::completed);
      res.push_back(csf_residual(p, positions(tr), t, h).max);
    }
    CHECK(res[1] < 1e-4);
    // Second order: halving the grid divides the residual by about 4.
    CHECK(res[0] / res[1] == doctest::Approx(4.0).epsilon(0.15));
  };
  SUBCASE("rotating-translating in R^3") {
    check_family(rot_trans(), {vec({1, 0, 0}), vec({0, 0.6, 0.8})}, 0.5);
  }
  SUBCASE("rotating-shrinking in R^3") {
    check_family(rot_shrink(), {vec({0.7, 0, 0.3}), vec({0, 0.8, 0.6})}, -0.4);
  }
}
