#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <sstream>

#include "solitonlab/export.hpp"
#include "solitonlab/ode.hpp"

using namespace sl;

TEST_CASE("DP45 on y' = -y hits the tolerance") {
  const OdeRhs f = [](double, const Vec& y, Vec& dy) { dy = -y; };
  for (double tol : {1e-6, 1e-9, 1e-12}) {
    DP45Options o;
    o.rtol = o.atol = tol;
    const auto r = dp45_integrate(f, 0.0, Vec::Ones(1), 5.0, o);
    REQUIRE(r.status == OdeStatus::completed);
    CHECK(r.s == 5.0);
    CHECK(std::abs(r.y[0] - std::exp(-5.0)) < 100 * tol);
  }
}

TEST_CASE("DP45 is fifth order at fixed step") {
  // Harmonic oscillator with a constant step forced through h_max and a
  // tolerance too loose to reject.
  const OdeRhs f = [](double, const Vec& y, Vec& dy) {
    dy.resize(2);
    dy << y[1], -y[0];
  };
  std::vector<double> err;
  for (double h : {0.1, 0.05}) {
    DP45Options o;
    o.rtol = o.atol = 1.0;
    o.h_init = o.h_max = h;
    Vec y0(2);
    y0 << 1, 0;
    const auto r = dp45_integrate(f, 0.0, y0, 2.0, o);
    err.push_back(std::abs(r.y[0] - std::cos(2.0)));
  }
  CHECK(std::log2(err[0] / err[1]) == doctest::Approx(5.0).epsilon(0.1));
}

TEST_CASE("backward integration, grid landing and events") {
  const OdeRhs f = [](double s, const Vec&, Vec& dy) { dy = Vec::Constant(1, std::cos(s)); };
  DP45Options o;
  o.rtol = o.atol = 1e-12;
  o.grid_spacing = 0.25;
  std::vector<double> seen;
  const OdeObserver obs = [&](double s, const Vec&) {
    seen.push_back(s);
    return true;
  };
  const auto r = dp45_integrate(f, 0.0, Vec::Zero(1), -2.0, o, {}, obs);
  CHECK(r.y[0] == doctest::Approx(std::sin(-2.0)).epsilon(1e-10));
  REQUIRE(seen.size() == 9);
  for (std::size_t k = 0; k < seen.size(); ++k) CHECK(seen[k] == doctest::Approx(-0.25 * k).epsilon(1e-14));

  // Event: y = sin s crosses 0.5 at s = pi/6.
  DP45Options e;
  e.rtol = e.atol = 1e-12;
  const OdeEvent ev = [](double, const Vec& y) { return 0.5 - y[0]; };
  const auto q = dp45_integrate(f, 0.0, Vec::Zero(1), 3.0, e, {}, {}, ev);
  CHECK(q.status == OdeStatus::event);
  CHECK(q.s == doctest::Approx(M_PI / 6).epsilon(1e-10));
}

TEST_CASE("non-finite right-hand side is reported") {
  const OdeRhs f = [](double s, const Vec& y, Vec& dy) { dy = y / (1.0 - s); };
  DP45Options o;
  const auto r = dp45_integrate(f, 0.0, Vec::Ones(1), 2.0, o);
  CHECK(r.status != OdeStatus::completed);
}

TEST_CASE("number formatting round-trips") {
  for (double x : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0}) CHECK(std::strtod(format_number(x).c_str(), nullptr) == x);
  CHECK(format_number(1.0) == "1");
}

TEST_CASE("RFC 4180 fields and rows") {
  CHECK(csv_field("plain") == "plain");
  CHECK(csv_field("a,b") == "\"a,b\"");
  CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(csv_field("two\nlines") == "\"two\nlines\"");
  CHECK(csv_row({"x", "y,z", ""}) == "x,\"y,z\",\r\n");
}

TEST_CASE("trajectory CSV") {
  const SolitonParams p(-1.0, skew_block_matrix(2, {1.0}), Vec::Zero(2));
  const auto header = trajectory_csv_header(2);
  CHECK(header.front() == "s");
  CHECK(header.size() == 3 + 4 + 8);
  Trajectory tr(p);
  TrajectorySample smp;
  smp.state = {Vec::Zero(2), Vec::Unit(2, 0)};
  smp.diag = sample(p, smp.state);  // a = 0: mu and nu are absent
  tr.samples.push_back(smp);
  const auto text = trajectory_csv(tr);
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  CHECK(line.substr(0, 13) == "s,sigma,varsi");
  std::getline(in, line);
  CHECK(line.find(",,") != std::string::npos);
}
