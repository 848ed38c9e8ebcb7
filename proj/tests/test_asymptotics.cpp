#include "doctest.h"

#include <cmath>

#include "solitonlab/asymptotics.hpp"
#include "solitonlab/catalog.hpp"

using namespace sl;

namespace {

Vec vec(std::initializer_list<double> xs) {
  Vec v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

}  // namespace

TEST_CASE("region membership") {
  const SolitonParams circle(-1.0, skew_block_matrix(2, {1.0}), Vec::Zero(2));
  CHECK(region_membership(circle, {vec({1, 0}), vec({0, 1})}, {10.0}) == Region::neither);

  // Straight line along the drive: nu = 0, member as soon as |a| >= K.
  const SolitonParams line(0.5, Mat::Zero(2, 2), Vec::Zero(2));
  CHECK(region_membership(line, {vec({30, 0}), vec({1, 0})}, {10.0}) == Region::plus);
  CHECK(region_membership(line, {vec({30, 0}), vec({-1, 0})}, {10.0}) == Region::minus);
  CHECK(region_membership(line, {vec({10, 0}), vec({1, 0})}, {10.0}) == Region::neither);

  // mu = 0 with |a| = K: nu = K^4 > K.
  CHECK(region_membership(line, {vec({20, 0}), vec({0, 1})}, {10.0}) == Region::neither);

  CHECK(region_margin(line, {vec({30, 0}), vec({1, 0})}, {10.0}, Region::plus) > 0.0);
  CHECK(region_margin(line, {vec({30, 0}), vec({1, 0})}, {10.0}, Region::minus) < 0.0);
}

TEST_CASE("Grim Reaper arcs") {
  SUBCASE("straight line has none") {
    const SolitonParams p(0.5, Mat::Zero(2, 2), Vec::Zero(2));
    IntegrateOptions o;
    o.grid_spacing = 0.01;
    const auto tr = integrate(p, {vec({5, 0}), vec({1, 0})}, 5.0, o);
    CHECK(detect_gr_arcs(tr, 0.5).empty());
  }
  SUBCASE("exact Grim Reaper fits itself") {
    const auto gr = make_named("grim_reaper");
    IntegrateOptions o;
    o.grid_spacing = 0.01;
    const auto tr = integrate_both(gr.params, gr.initial_state, -6, 6, o);
    const auto arcs = detect_gr_arcs(tr, 0.5);
    REQUIRE(arcs.size() == 1);
    CHECK(std::abs(tr.samples[arcs[0].anchor].s) < 0.011);
    CHECK(arcs[0].fit_error < 1e-8);
  }
  SUBCASE("far-out turns of a rotating-translating soliton") {
    const SolitonParams p(0.0, skew_block_matrix(3, {1.0}), vec({0, 0, 1}));
    IntegrateOptions o;
    o.grid_spacing = 5e-4;
    o.tol = 1e-12;
    double prev_fit = 1.0;
    for (double R : {10.0, 20.0, 40.0}) {
      const auto tr = integrate_both(p, {vec({R, 0, 0}), vec({0.3, 0.1, 0.95}).normalized()}, -3, 3, o);
      const auto arcs = detect_gr_arcs(tr, 4.0);
      REQUIRE(arcs.size() == 1);
      CHECK(arcs[0].A0 == doctest::Approx(R).epsilon(0.01));
      CHECK(arcs[0].length <= arcs[0].length_bound);
      CHECK(arcs[0].fit_error < prev_fit);
      prev_fit = arcs[0].fit_error;
    }
  }
}

TEST_CASE("Hausdorff distance") {
  const std::vector<Vec> a{vec({0, 0}), vec({1, 0})};
  const std::vector<Vec> b{vec({0, 0.5}), vec({1, 0.5})};
  CHECK(hausdorff_distance(a, b) == doctest::Approx(0.5));
  CHECK(hausdorff_distance(a, a) == 0.0);
  // Point-to-segment: the midpoint of a lies on the segment b'.
  const std::vector<Vec> c{vec({0.5, 0})};
  CHECK(hausdorff_distance(c, a) == doctest::Approx(0.5));
}

TEST_CASE("spiral fit on an exact spiral") {
  const SolitonParams p(0.5, skew_block_matrix(3, {1.0}), Vec::Zero(3));
  const Vec gamma0 = vec({40, -10, 25});
  Trajectory tr(p);
  for (int i = 0; i <= 200; ++i) {
    const double sigma = 0.05 * i;
    TrajectorySample s;
    s.sigma = sigma;
    s.s = sigma;
    const Vec C = dilate_rotate_exp(p.alpha(), p.spectrum(), sigma) * gamma0;
    s.state = {C, p.drive(C).normalized()};
    s.diag = sample(p, s.state);
    tr.samples.push_back(s);
  }
  const auto fit = spiral_fit(tr, 1, 2.0, {10.0});
  CHECK((fit.gamma - gamma0).norm() < 1e-10 * gamma0.norm());
  for (double r : fit.residual) CHECK(r < 1e-9 * gamma0.norm());
}

TEST_CASE("spiral fit refuses tails outside the region") {
  const SolitonParams p(0.5, skew_block_matrix(3, {1.0}), Vec::Zero(3));
  Trajectory tr(p);
  for (int i = 0; i <= 40; ++i) {
    TrajectorySample s;
    s.sigma = 0.05 * i;
    s.state = {vec({1, 0, 0}), vec({0, 1, 0})};
    s.diag = sample(p, s.state);
    tr.samples.push_back(s);
  }
  CHECK_THROWS_AS(spiral_fit(tr, 1, 0.0, {10.0}), Error);
}

TEST_CASE("Brakke wedge ends are straight rays") {
  const auto w = make_named("brakke_wedge");
  const double K = default_threshold(w.params);
  std::vector<Vec> dirs;
  for (double sgn : {1.0, -1.0}) {
    const PhaseState st{w.initial_state.C, sgn * w.initial_state.T};
    const auto tr = integrate_spiral(w.params, st, 12.0, 1);
    REQUIRE(tr.termination == Termination::completed);
    const auto fit = spiral_fit(tr, 1, 6.0, {K});
    CHECK(fit.cauchy_converging);
    const Vec end = tr.samples.back().state.C.normalized();
    CHECK((end - fit.gamma.normalized()).norm() < 1e-6);
    dirs.push_back(fit.gamma.normalized());
  }
  // Two different rays, symmetric about the vertical axis.
  CHECK(std::abs(dirs[0][0] + dirs[1][0]) < 1e-8);
  CHECK(std::abs(dirs[0][1] - dirs[1][1]) < 1e-8);
  CHECK(dirs[0][0] > 0.0);
}

TEST_CASE("expanding-rotating spiral: convergence, decay rate, |a| growth") {
  const SolitonParams p(1.0, skew_block_matrix(3, {1.0}), Vec::Zero(3));
  const auto tr = integrate_spiral(p, {vec({1, 0, 0.5}), vec({0.2, 0.9, 0.3}).normalized()}, 15.0, 1);
  REQUIRE(tr.termination == Termination::completed);
  const RegionSpec K{default_threshold(p)};
  const auto fit = spiral_fit(tr, 1, 5.0, K);
  CHECK(fit.cauchy_converging);
  CHECK(fit.decay_rate == doctest::Approx(p.alpha()).epsilon(0.2));
  for (const auto& s : tr.samples)
    if (region_membership(p, s.state, K) == Region::plus) CHECK(a_norm_rate(p, s.state) >= p.alpha() / 2);
}

TEST_CASE("shooting into R-(K)") {
  for (int n : {2, 3}) {
    CAPTURE(n);
    const SolitonParams p(-1.0, skew_block_matrix(n, {1.0}), Vec::Zero(n));
    Vec C0 = Vec::Zero(n);
    C0[0] = 50.0;
    const RegionSpec K{10.0};
    const auto r = shoot_trapped_direction(p, C0, K);
    CHECK(r.trapped_span >= 50.0);
    CHECK(r.backward_ok);
    CHECK(std::abs(r.T0.norm() - 1.0) < 1e-12);
    CHECK(r.deviation <= r.cap_radius * (1 + 1e-9));

    // Rotate T0 by 0.1 rad toward a direction orthogonal to it.
    Vec u = Vec::Zero(n);
    u[1] = 1.0;
    u = perp(u, r.T0).normalized();
    const Vec T1 = std::cos(0.1) * r.T0 + std::sin(0.1) * u;
    CHECK(exit_span(p, C0, T1, K, 50.0) < 50.0);
  }
}
