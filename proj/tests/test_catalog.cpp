#include "doctest.h"

#include <cmath>

#include "solitonlab/catalog.hpp"
#include "solitonlab/diagnostics.hpp"

using namespace sl;

namespace {

Trajectory run(const NamedSoliton& f, double s_end = 20.0) {
  IntegrateOptions o;
  o.grid_spacing = 0.01;
  o.tol = 1e-12;
  return integrate(f.params, f.initial_state, s_end, o);
}

}  // namespace

TEST_CASE("all labels construct valid states") {
  for (const auto& label : catalog_labels()) {
    CAPTURE(label);
    const auto f = make_named(label);
    CHECK(f.label == label);
    CHECK_NOTHROW(check_state(f.params, f.initial_state));
  }
  CHECK_THROWS_AS(make_named("no_such_soliton"), Error);
}

TEST_CASE("shrinking circle") {
  SUBCASE("default: unit circle with the expected V") {
    const auto f = make_named("shrinking_circle");
    const double r = 1 / std::sqrt(-f.params.alpha());
    CHECK(f.initial_state.C.norm() == doctest::Approx(r));
    CHECK(std::abs(f.initial_state.C.dot(f.initial_state.T)) < 1e-15);
    REQUIRE(f.expected_V);
    const auto tr = run(f);
    REQUIRE(tr.termination == Termination::completed);
    for (const auto& s : tr.samples) {
      CHECK(std::abs(s.state.C.norm() - r) < 1e-6);
      CHECK(std::abs(s.diag.V - *f.expected_V) < 1e-8);
    }
    REQUIRE(f.closed_form);
    for (const auto& s : tr.samples) CHECK((s.state.C - f.closed_form(s.s)).norm() < 1e-6);
  }
  SUBCASE("alpha = -1/2 in R^3: radius sqrt 2 in the xy-plane") {
    CatalogOptions o;
    o.dimension = 3;
    o.alpha = -0.5;
    o.omegas = {1.0};
    const auto f = make_named("shrinking_circle", o);
    const auto tr = run(f);
    for (const auto& s : tr.samples) {
      CHECK(std::abs(s.state.C.norm() - std::sqrt(2.0)) < 1e-6);
      CHECK(std::abs(s.state.C[2]) < 1e-12);
    }
  }
  SUBCASE("circle in the second plane of an R^4 shrinker with V = Omega/sqrt(-e alpha)") {
    CatalogOptions o;
    o.dimension = 4;
    o.alpha = -1.0;
    o.omegas = {0.5, 2.0};
    o.plane = 1;
    const auto f = make_named("shrinking_circle", o);
    REQUIRE(f.expected_V);
    CHECK(*f.expected_V == doctest::Approx(2.0 / std::sqrt(std::exp(1.0))).epsilon(1e-14));
    CHECK(lyapunov_value(f.params, f.initial_state) == doctest::Approx(*f.expected_V).epsilon(1e-14));
    o.orientation = -1;
    const auto g = make_named("shrinking_circle", o);
    CHECK(lyapunov_value(g.params, g.initial_state) == doctest::Approx(-*f.expected_V).epsilon(1e-14));
  }
}

TEST_CASE("Grim Reaper is the graph of -log cos") {
  const auto f = make_named("grim_reaper");
  IntegrateOptions o;
  o.grid_spacing = 0.01;
  o.tol = 1e-12;
  const auto tr = integrate_both(f.params, f.initial_state, -20, 20, o);
  REQUIRE(tr.termination == Termination::completed);
  REQUIRE(f.closed_form);
  for (const auto& s : tr.samples) {
    CHECK((s.state.C - f.closed_form(s.s)).norm() < 1e-6);
    const double x = s.state.C[0], y = s.state.C[1];
    // Distance to the graph, to first order.
    CHECK(std::abs(y + std::log(std::cos(x))) * std::cos(x) < 1e-6);
  }
}

TEST_CASE("line") {
  const auto f = make_named("line");
  const auto tr = run(f);
  for (const auto& s : tr.samples) {
    CHECK(s.diag.curvature < 1e-12);
    CHECK(s.diag.V == 0.0);
  }
}

TEST_CASE("yin-yang end is unbounded after a single minimum") {
  const auto f = make_named("yin_yang");
  const auto tr = run(f);
  std::vector<double> s, r;
  for (const auto& x : tr.samples) s.push_back(x.s), r.push_back(x.state.C.norm());
  const auto e = count_extrema(s, r);
  CHECK(e.minima <= 1);
  CHECK(e.maxima == 0);
  // Strictly increasing after the minimum (at s = 0 here since C0 = 0).
  for (std::size_t i = 1; i < r.size(); ++i) CHECK(r[i] > r[i - 1]);
  CHECK(r.back() > 3.0);
}

TEST_CASE("Brakke wedge starts at its vertex") {
  CatalogOptions o;
  o.y0 = 0.7;
  const auto f = make_named("brakke_wedge", o);
  CHECK(f.params.alpha() > 0.0);
  CHECK(f.initial_state.C[1] == 0.7);
  CHECK(std::abs(f.initial_state.C.dot(f.initial_state.T)) < 1e-15);
}

TEST_CASE("Abresch-Langer profiles") {
  SUBCASE("circle data closes with rotation number 1") {
    const auto al = abresch_langer_profile(-1.0, 1.0, 20.0);
    CHECK(al.closed);
    CHECK(al.rotation_number == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(al.period == doctest::Approx(2 * M_PI).epsilon(1e-6));
  }
  SUBCASE("generic data oscillates between two positive radii") {
    const auto al = abresch_langer_profile(-1.0, 0.8, 60.0);
    CHECK(al.r_min > 0.0);
    CHECK(al.r_max > al.r_min + 0.05);
    std::vector<double> s, r;
    for (const auto& x : al.traj.samples) s.push_back(x.s), r.push_back(x.state.C.norm());
    const auto e = count_extrema(s, r);
    CHECK(e.minima >= 3);
    CHECK(e.maxima >= 3);
  }
}
