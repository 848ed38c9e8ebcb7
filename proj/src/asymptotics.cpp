#include "solitonlab/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

namespace sl {

const char* region_name(Region r) {
  switch (r) {
    case Region::plus: return "R+";
    case Region::minus: return "R-";
    case Region::neither: return "neither";
  }
  return "neither";
}

Region region_membership(const SolitonParams& p, const PhaseState& s, const RegionSpec& spec) {
  if (region_margin(p, s, spec, Region::plus) >= 0.0 && (p.drive(s.C).dot(s.T) > 0.0)) return Region::plus;
  if (region_margin(p, s, spec, Region::minus) >= 0.0 && (p.drive(s.C).dot(s.T) < 0.0)) return Region::minus;
  return Region::neither;
}

double region_margin(const SolitonParams& p, const PhaseState& s, const RegionSpec& spec, Region which) {
  const Vec a = p.drive(s.C);
  const double an = a.norm();
  if (an < kDriveFloor || which == Region::neither) return -1.0;
  const double mu = a.dot(s.T) / an;
  const double curv = perp(a, s.T).norm();
  const double nu = sqr(an) * sqr(curv);
  const double side = which == Region::plus ? mu : -mu;
  return std::min({an - spec.K, spec.K - nu, side});
}

StayInside stay_in_region(const RegionSpec& spec, Region which) {
  return [spec, which](const SolitonParams& p, const PhaseState& s) { return region_margin(p, s, spec, which); };
}

double default_threshold(const SolitonParams& p) { return 4.0 * p.drive_norm(); }

double a_norm_rate(const SolitonParams& p, const PhaseState& s) {
  const Vec a = p.drive(s.C);
  const double an = a.norm();
  if (an < kDriveFloor) return 0.0;
  const Vec BT = p.alpha() * s.T + p.A() * s.T;
  return a.dot(BT) / an;
}

double nu_rate(const SolitonParams& p, const PhaseState& s) {
  const Vec a = p.drive(s.C);
  const double an = a.norm();
  if (an < kDriveFloor) return 0.0;
  const Vec ah = a / an;
  const double mu = ah.dot(s.T);
  const Vec BT = p.alpha() * s.T + p.A() * s.T;
  const double mu_s = an * (1.0 - mu * mu) + perp(s.T, ah).dot(BT) / an;
  const double an_s = ah.dot(BT);
  return -2.0 * mu * std::pow(an, 4) * mu_s + 4.0 * std::pow(an, 3) * an_s * (1.0 - mu * mu);
}

// Grim Reaper arcs -----------------------------------------------------------

std::vector<Vec> grim_reaper_through(const Vec& a, const Vec& point, const Vec& T,
                                     const std::vector<double>& offsets) {
  const double A = a.norm();
  if (!(A > 0.0)) fail(ErrorCode::invalid_argument, "grim_reaper_through: velocity must be nonzero");
  const Vec ah = a / A;
  Vec e = perp(T, ah);
  const double en = e.norm();
  if (en < 1e-15) fail(ErrorCode::domain_error, "grim_reaper_through: tangent parallel to the velocity");
  e /= en;
  const double mu = std::clamp(ah.dot(T), -1.0 + 1e-16, 1.0 - 1e-16);
  const double s_star = std::atanh(mu) / A;
  const auto gr = [&](double s) {
    return Vec(e * (std::atan(std::sinh(A * s)) / A) + ah * (std::log(std::cosh(A * s)) / A));
  };
  const Vec tip = point - gr(s_star);
  std::vector<Vec> out;
  out.reserve(offsets.size());
  for (double o : offsets) out.push_back(tip + gr(s_star + o));
  return out;
}

namespace {

double point_segment(const Vec& p, const Vec& a, const Vec& b) {
  const Vec d = b - a;
  const double dd = d.squaredNorm();
  double t = dd > 0 ? (p - a).dot(d) / dd : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return (p - a - t * d).norm();
}

double directed(const std::vector<Vec>& a, const std::vector<Vec>& b) {
  double worst = 0.0;
  for (const auto& p : a) {
    double best = std::numeric_limits<double>::infinity();
    if (b.size() == 1) best = (p - b[0]).norm();
    for (std::size_t j = 0; j + 1 < b.size(); ++j) best = std::min(best, point_segment(p, b[j], b[j + 1]));
    worst = std::max(worst, best);
  }
  return worst;
}

}  // namespace

double hausdorff_distance(const std::vector<Vec>& a, const std::vector<Vec>& b) {
  if (a.empty() || b.empty()) return std::numeric_limits<double>::infinity();
  return std::max(directed(a, b), directed(b, a));
}

std::vector<GrArc> detect_gr_arcs(const Trajectory& traj, double c) {
  const auto& sm = traj.samples;
  std::vector<GrArc> arcs;
  const auto in_arc = [&](const TrajectorySample& x) {
    if (!x.diag.mu || x.diag.a_norm < c) return false;
    return std::abs(*x.diag.mu) <= 1.0 - c / std::pow(x.diag.a_norm, 4);
  };
  std::size_t i = 0;
  while (i < sm.size()) {
    if (!in_arc(sm[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < sm.size() && in_arc(sm[j + 1])) ++j;
    GrArc arc;
    arc.begin = i;
    arc.end = j;
    arc.length = sm[j].s - sm[i].s;
    arc.anchor = i;
    for (std::size_t k = i; k <= j; ++k)
      if (sm[k].diag.curvature > sm[arc.anchor].diag.curvature) arc.anchor = k;
    const auto& an = sm[arc.anchor];
    arc.A0 = an.diag.a_norm;
    arc.length_bound = arc.A0 > 1.0 ? c / arc.A0 * std::log(arc.A0) : std::numeric_limits<double>::infinity();
    arc.mu_begin = *sm[i].diag.mu;
    arc.mu_end = *sm[j].diag.mu;
    std::vector<double> offsets;
    std::vector<Vec> pts;
    for (std::size_t k = i; k <= j; ++k) {
      offsets.push_back(sm[k].s - an.s);
      pts.push_back(sm[k].state.C);
    }
    const auto model = grim_reaper_through(an.diag.a, an.state.C, an.state.T, offsets);
    arc.fit_error = hausdorff_distance(pts, model);
    arcs.push_back(arc);
    i = j + 1;
  }
  return arcs;
}

// Spiral asymptotics ------------------------------------------------------------

SpiralFit spiral_fit(const Trajectory& traj, int sign, double sigma_from, const RegionSpec& spec) {
  const auto& p = traj.params;
  if (p.alpha() == 0.0) fail(ErrorCode::invalid_argument, "spiral_fit: requires alpha != 0");
  if (sign != 1 && sign != -1) fail(ErrorCode::invalid_argument, "spiral_fit: sign must be +1 or -1");
  const Region want = sign > 0 ? Region::plus : Region::minus;
  const auto& sm = traj.samples;
  const bool have_gamma = traj.gamma_sign == sign && traj.gamma.size() == sm.size();

  std::vector<std::size_t> tail;
  for (std::size_t i = 0; i < sm.size(); ++i) {
    if (sm[i].sigma < sigma_from) continue;
    if (region_membership(p, sm[i].state, spec) != want) {
      std::ostringstream os;
      os << "spiral_fit: tail leaves " << region_name(want) << " at sample " << i << " (s = " << sm[i].s
         << ", sigma = " << sm[i].sigma << ")";
      fail(ErrorCode::domain_error, os.str());
    }
    tail.push_back(i);
  }
  if (tail.size() < 10) fail(ErrorCode::invalid_argument, "spiral_fit: fewer than 10 tail samples");

  const auto G = [&](std::size_t i) -> Vec {
    if (have_gamma) return traj.gamma[i];
    return dilate_rotate_exp(p.alpha(), p.spectrum(), -sign * sm[i].sigma) * sm[i].state.C;
  };

  SpiralFit fit;
  fit.sign = sign;
  const double s0 = sm[tail.front()].sigma, s1 = sm[tail.back()].sigma;
  // Checkpoints equally spaced in sigma (nearest sample).
  const int ncp = 12;
  std::vector<std::size_t> cps;
  {
    std::size_t k = 0;
    for (int c = 0; c < ncp; ++c) {
      const double target = s0 + (s1 - s0) * c / (ncp - 1);
      while (k + 1 < tail.size() && std::abs(sm[tail[k + 1]].sigma - target) <= std::abs(sm[tail[k]].sigma - target))
        ++k;
      if (cps.empty() || cps.back() != tail[k]) cps.push_back(tail[k]);
    }
  }
  std::vector<Vec> Gc;
  for (auto i : cps) {
    fit.checkpoint_sigma.push_back(sm[i].sigma);
    Gc.push_back(G(i));
  }
  for (std::size_t c = 1; c < Gc.size(); ++c) fit.cauchy_steps.push_back((Gc[c] - Gc[c - 1]).norm());
  {
    // Steps at round-off level count as converged.
    const double floor = 1e-12 * std::max(1.0, Gc.back().norm());
    const auto& st = fit.cauchy_steps;
    const std::size_t m = st.size();
    bool ok = m >= 3 && (st.back() < st.front() || st.front() <= floor);
    for (std::size_t c = m / 2 + 1; c < m && ok; ++c)
      if (!(st[c] < st[c - 1] || st[c] <= floor)) ok = false;
    fit.cauchy_converging = ok;
  }
  // Last-two-sample Richardson, with the contraction ratio measured from the
  // last three checkpoints.
  fit.gamma = Gc.back();
  if (Gc.size() >= 3) {
    const Vec d2 = Gc[Gc.size() - 1] - Gc[Gc.size() - 2];
    const Vec d1 = Gc[Gc.size() - 2] - Gc[Gc.size() - 3];
    const double r = d1.norm() > 0 ? d2.norm() / d1.norm() : 0.0;
    if (r < 1.0) fit.gamma = Gc.back() + d2 * (r / (1.0 - r));
  }

  // Residual series on at most ~400 tail samples.
  const std::size_t stride = std::max<std::size_t>(1, tail.size() / 400);
  for (std::size_t k = 0; k < tail.size(); k += stride) {
    const std::size_t i = tail[k];
    const double sg = sm[i].sigma;
    // |e^{sign sg B}(G - Gamma)| = e^{sign alpha sg} |G - Gamma|.
    const double r = std::exp(sign * p.alpha() * sg) * (G(i) - fit.gamma).norm();
    fit.sigma.push_back(sg);
    fit.residual.push_back(r);
  }
  // Decay rate from the first 75% of the tail; the end is dominated by the
  // error in the Gamma estimate itself.
  std::vector<double> xs, ys;
  const double cut = s0 + 0.75 * (s1 - s0);
  for (std::size_t k = 0; k < fit.sigma.size(); ++k) {
    if (fit.sigma[k] > cut || !(fit.residual[k] > 0.0)) continue;
    xs.push_back(fit.sigma[k]);
    ys.push_back(std::log(fit.residual[k]));
  }
  if (xs.size() >= 10) {
    double mx = 0, my = 0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
      mx += xs[k];
      my += ys[k];
    }
    mx /= static_cast<double>(xs.size());
    my /= static_cast<double>(xs.size());
    double sxy = 0, sxx = 0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
      sxy += (xs[k] - mx) * (ys[k] - my);
      sxx += sqr(xs[k] - mx);
    }
    fit.decay_rate = sxx > 0 ? -sxy / sxx : 0.0;
  }
  return fit;
}

// Shooting ----------------------------------------------------------------

namespace {

struct ExitInfo {
  double span = 0.0;
  Vec T_exit;
  bool trapped = false;
};

ExitInfo forward_exit(const SolitonParams& p, const Vec& C0, const Vec& T0, const RegionSpec& spec, double horizon,
                      double tol) {
  IntegrateOptions o;
  o.tol = tol;
  o.record = false;
  o.h_init = 1e-4;
  o.h_max = 0.05;
  o.stay_inside = stay_in_region(spec, Region::minus);
  o.c_cap = 1e300;
  const Trajectory tr = integrate(p, {C0, T0}, horizon, o);
  ExitInfo e;
  e.span = tr.samples.back().s;
  e.T_exit = tr.samples.back().state.T;
  e.trapped = tr.termination == Termination::completed;
  return e;
}

// Orthonormal basis of the complement of u, built from the standard basis.
Mat complement_basis(const Vec& u) {
  const auto n = u.size();
  Mat out(n, n - 1);
  Eigen::Index k = 0;
  std::vector<Vec> taken{u};
  for (Eigen::Index i = 0; i < n && k < n - 1; ++i) {
    Vec x = Vec::Unit(n, i);
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& t : taken) x -= t.dot(x) * t;
    if (x.norm() < 1e-8) continue;
    x.normalize();
    taken.push_back(x);
    out.col(k++) = x;
  }
  return out;
}

// Point of the cap around -a_hat with tangent-plane coordinates x.
Vec cap_point(const Vec& ah, const Mat& F, const Vec& x) {
  const double r = x.norm();
  if (r == 0.0) return -ah;
  return Vec(-ah * std::cos(r) + F * x * (std::sin(r) / r));
}

template <class Fn>
std::vector<double> parallel_eval(int threads, const std::vector<Vec>& xs, const Fn& fn) {
  std::vector<double> out(xs.size());
  const int nt = std::max(1, std::min<int>(threads, static_cast<int>(xs.size())));
  if (nt == 1) {
    for (std::size_t i = 0; i < xs.size(); ++i) out[i] = fn(xs[i]);
    return out;
  }
  std::vector<std::thread> pool;
  for (int t = 0; t < nt; ++t)
    pool.emplace_back([&, t] {
      for (std::size_t i = static_cast<std::size_t>(t); i < xs.size(); i += static_cast<std::size_t>(nt))
        out[i] = fn(xs[i]);
    });
  for (auto& th : pool) th.join();
  return out;
}

}  // namespace

double exit_span(const SolitonParams& p, const Vec& C0, const Vec& T0, const RegionSpec& spec, double horizon,
                 double tol) {
  return forward_exit(p, C0, T0, spec, horizon, tol).span;
}

ShootResult shoot_trapped_direction(const SolitonParams& p, const Vec& C0, const RegionSpec& spec,
                                    const ShootOptions& opts) {
  if (!(p.alpha() < 0.0)) fail(ErrorCode::invalid_argument, "shoot_trapped_direction: requires alpha < 0");
  const int n = p.dimension();
  if (C0.size() != n) fail(ErrorCode::invalid_argument, "shoot_trapped_direction: C0 has the wrong dimension");
  const Vec a0 = p.drive(C0);
  const double A0 = a0.norm();
  if (A0 < spec.K) fail(ErrorCode::invalid_argument, "shoot_trapped_direction: |a(C0)| must be at least K");
  const Vec ah = a0 / A0;
  const Mat F = complement_basis(ah);

  ShootResult res(p);
  // nu <= K on the cap means |T + a_hat| <= sqrt(K) / |a|^2 to leading order.
  res.cap_radius = opts.cap_factor * std::sqrt(spec.K) / sqr(A0);
  const double rho = 0.999 * res.cap_radius;
  const double horizon = opts.horizon;

  const auto eval = [&](const Vec& x, const std::string& stage) {
    const ExitInfo e = forward_exit(p, C0, cap_point(ah, F, x), spec, horizon, opts.tol);
    res.candidates.push_back({cap_point(ah, F, x), e.span, stage});
    return e;
  };
  // Component of the exit tangent along direction d of the initial frame.
  const auto exit_side = [&](const ExitInfo& e, const Vec& d) { return (F * d).dot(e.T_exit); };

  Vec best_x = Vec::Zero(n - 1);
  double best_span = -1.0;
  const auto consider = [&](const Vec& x, double span) {
    if (span > best_span) {
      best_span = span;
      best_x = x;
    }
  };

  // Bisection along the segment {t d : |t| <= rho} on the exit side.
  const auto bisect_line = [&](const Vec& d, const std::string& stage) {
    double lo = -rho, hi = rho;
    ExitInfo elo = eval(lo * d, stage), ehi = eval(hi * d, stage);
    consider(lo * d, elo.span);
    consider(hi * d, ehi.span);
    double slo = exit_side(elo, d), shi = exit_side(ehi, d);
    if ((slo < 0) == (shi < 0)) return std::make_pair(0.5 * (lo + hi), false);
    while (hi - lo > opts.cap_tolerance * res.cap_radius) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      const ExitInfo em = eval(mid * d, stage);
      consider(mid * d, em.span);
      if (em.trapped) return std::make_pair(mid, true);
      const double sm = exit_side(em, d);
      if ((sm < 0) == (slo < 0)) lo = mid; else hi = mid;
    }
    return std::make_pair(0.5 * (lo + hi), true);
  };

  if (n == 2) {
    res.method = "bisection";
    const Vec d = Vec::Ones(1);
    const auto [t, ok] = bisect_line(d, "bisection");
    const ExitInfo e = eval(t * d, "bisection");
    consider(t * d, e.span);
    if (!ok) res.method = "bisection_failed";
  } else if (n == 3) {
    res.method = "nested_bisection+pattern";
    const auto dir = [](double beta) { return Vec((Vec(2) << std::cos(beta), std::sin(beta)).finished()); };
    const auto outer = [&](double beta, double& t_star) {
      const Vec d = dir(beta);
      t_star = bisect_line(d, "nested_bisection").first;
      const ExitInfo e = eval(t_star * d, "nested_bisection");
      consider(t_star * d, e.span);
      const Vec dp = (Vec(2) << -std::sin(beta), std::cos(beta)).finished();
      return exit_side(e, dp);
    };
    double t0 = 0.0, t1 = 0.0;
    double blo = 0.0, bhi = M_PI;
    double glo = outer(blo, t0);
    double ghi = outer(bhi, t1);
    if ((glo < 0) != (ghi < 0)) {
      for (int it = 0; it < 50 && bhi - blo > opts.cap_tolerance; ++it) {
        const double bm = 0.5 * (blo + bhi);
        double tm = 0.0;
        const double gm = outer(bm, tm);
        if ((gm < 0) == (glo < 0)) {
          blo = bm;
          glo = gm;
        } else {
          bhi = bm;
        }
      }
    }
  } else {
    res.method = "pattern";
    consider(best_x, eval(best_x, "pattern").span);
  }

  // Pattern search on the exit span around the best point.
  if (n >= 3 && best_span < horizon) {
    double step = n == 3 ? 1e-3 * res.cap_radius : 0.25 * res.cap_radius;
    for (int it = 0; it < opts.pattern_iterations && step > 1e-20; ++it) {
      std::vector<Vec> pts;
      for (int i = 0; i < n - 1; ++i)
        for (double sgn : {1.0, -1.0}) {
          Vec x = best_x;
          x[i] += sgn * step;
          if (x.norm() <= rho) pts.push_back(x);
        }
      const auto spans = parallel_eval(opts.threads, pts, [&](const Vec& x) {
        return forward_exit(p, C0, cap_point(ah, F, x), spec, horizon, opts.tol).span;
      });
      bool improved = false;
      for (std::size_t k = 0; k < pts.size(); ++k) {
        res.candidates.push_back({cap_point(ah, F, pts[k]), spans[k], "pattern"});
        if (spans[k] > best_span) {
          best_span = spans[k];
          best_x = pts[k];
          improved = true;
        }
      }
      if (!improved) step *= 0.5;
      if (best_span >= horizon) break;
    }
  }
  res.forward_T0 = cap_point(ah, F, best_x);
  res.forward_span = best_span;
  res.T0 = res.forward_T0;
  res.trapped_span = res.forward_span;

  if (opts.backward) {
    // Stable-manifold construction: start far out on the spiral through C0
    // with T = -a_hat, integrate backward to the level |a| = |a(C0)| and
    // adjust the far point until the crossing lands on C0.
    const double absalpha = std::abs(p.alpha());
    const double A_far = A0 + 1.5 * horizon * absalpha + 10.0;
    const double sigma_far = std::log(A_far / A0) / absalpha;
    const Mat Bm = p.alpha() * Mat::Identity(n, n) + p.A();
    const Mat Binv = Bm.inverse();
    const Vec C_guess = dilate_rotate_exp(p.alpha(), p.spectrum(), -sigma_far) * C0;
    const Vec u0 = (Bm * C_guess).normalized();
    const Mat Fu = complement_basis(u0);
    const double s_max = 3.0 * (A_far - A0) / absalpha + 10.0;

    IntegrateOptions o;
    o.tol = opts.tol;
    o.h_init = 1e-3;
    o.h_max = 0.05;
    o.c_cap = 1e300;
    o.stay_inside = [A0](const SolitonParams& pp, const PhaseState& st) { return pp.drive(st.C).norm() - A0; };

    const auto far_state = [&](const Vec& y) {
      Vec u = u0 + Fu * y;
      u.normalize();
      return PhaseState{Binv * (A_far * u), -u};
    };
    const auto run = [&](const Vec& y, bool record) {
      IntegrateOptions oo = o;
      oo.record = record;
      return integrate(p, far_state(y), -s_max, oo);
    };
    const auto hit = [&](const Trajectory& tr) { return tr.samples.front().state.C; };

    Vec y = Vec::Zero(n - 1);
    Trajectory tr = run(y, false);
    double rn = (hit(tr) - C0).norm();
    const double h_fd = 1e-7;
    for (int it = 0; it < 40 && tr.termination == Termination::left_region; ++it) {
      if (rn < 1e-11 * std::max(1.0, C0.norm())) break;
      const Vec r = hit(tr) - C0;
      Mat J(n, n - 1);
      for (int j = 0; j < n - 1; ++j) {
        Vec yj = y;
        yj[j] += h_fd;
        J.col(j) = (hit(run(yj, false)) - hit(tr)) / h_fd;
      }
      Eigen::JacobiSVD<Mat> svd(J, Eigen::ComputeThinU | Eigen::ComputeThinV);
      svd.setThreshold(1e-10);
      Vec dy = -svd.solve(r);
      double lam = 1.0;
      bool accepted = false;
      for (int bt = 0; bt < 30; ++bt) {
        const Vec yt = y + lam * dy;
        Trajectory tt = run(yt, false);
        const double rt = (hit(tt) - C0).norm();
        if (tt.termination == Termination::left_region && rt < rn) {
          y = yt;
          tr = std::move(tt);
          rn = rt;
          accepted = true;
          break;
        }
        lam *= 0.5;
      }
      if (!accepted) break;
    }
    if (tr.termination == Termination::left_region) {
      Trajectory full = run(y, true);
      const auto& first = full.samples.front();
      res.backward_hit_error = (first.state.C - C0).norm();
      const double s_hit = first.s, sig_hit = first.sigma, vs_hit = first.varsigma;
      Trajectory orbit(p);
      orbit.rtol = full.rtol;
      orbit.atol = full.atol;
      orbit.stats = full.stats;
      orbit.samples = std::move(full.samples);
      for (auto& smp : orbit.samples) {
        smp.s -= s_hit;
        smp.sigma -= sig_hit;
        smp.varsigma -= vs_hit;
      }
      res.backward_span = orbit.samples.back().s;
      res.backward_in_region = std::all_of(orbit.samples.begin(), orbit.samples.end(), [&](const TrajectorySample& x) {
        return region_membership(p, x.state, spec) == Region::minus;
      });
      const Vec Tb = orbit.samples.front().state.T;
      res.backward_ok = res.backward_hit_error < 1e-8 * std::max(1.0, C0.norm()) && res.backward_in_region;
      res.forward_backward_angle = (Tb - res.forward_T0).norm();
      if (res.backward_ok) {
        res.T0 = Tb;
        res.trapped_span = res.backward_span;
        res.method += "+stable_manifold";
        res.orbit = std::move(orbit);
      }
    }
  }
  res.deviation = (res.T0 + ah).norm();
  res.reintegrated_span = exit_span(p, C0, res.T0, spec, horizon, opts.tol);
  if (!res.backward_ok) {
    // Certified span is what forward re-integration reaches.
    res.trapped_span = res.reintegrated_span;
    IntegrateOptions o;
    o.tol = opts.tol;
    o.h_max = 0.05;
    o.c_cap = 1e300;
    o.stay_inside = stay_in_region(spec, Region::minus);
    res.orbit = integrate(p, {C0, res.T0}, horizon, o);
  }
  return res;
}

}  // namespace sl
