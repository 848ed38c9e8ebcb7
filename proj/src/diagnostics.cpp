#include "solitonlab/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace sl {

double uniform_spacing(const Trajectory& traj) {
  const auto& sm = traj.samples;
  if (sm.size() < 5) fail(ErrorCode::invalid_argument, "need at least five samples");
  const double h = (sm.back().s - sm.front().s) / static_cast<double>(sm.size() - 1);
  for (std::size_t i = 1; i < sm.size(); ++i) {
    if (std::abs(sm[i].s - sm[i - 1].s - h) > 1e-9 * std::max(h, 1.0))
      fail(ErrorCode::invalid_argument, "trajectory is not on a uniform arc-length grid");
  }
  return h;
}

namespace {

// Five-point first derivative at interior index i.
template <class F>
double d1_five(const F& f, std::size_t i, double h) {
  return (f(i - 2) - 8.0 * f(i - 1) + 8.0 * f(i + 1) - f(i + 2)) / (12.0 * h);
}

template <class F>
double d1_seven(const F& f, std::size_t i, double h) {
  return (-f(i - 3) + 9.0 * f(i - 2) - 45.0 * f(i - 1) + 45.0 * f(i + 1) - 9.0 * f(i + 2) + f(i + 3)) / (60.0 * h);
}

void accumulate(ResidualStats& st, double& sum, double r) {
  st.max = std::max(st.max, std::abs(r));
  sum += r * r;
  ++st.count;
}

void finish(ResidualStats& st, double sum) {
  st.rms = st.count ? std::sqrt(sum / static_cast<double>(st.count)) : 0.0;
}

bool monotone_window(const std::vector<double>& x, std::size_t from, std::size_t to, double sign) {
  if (to <= from + 1) return false;
  for (std::size_t i = from + 1; i < to; ++i)
    if (!(sign * (x[i] - x[i - 1]) > 0.0)) return false;
  return true;
}

double fit_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  const double n = static_cast<double>(xs.size());
  if (xs.size() < 2) return 0.0;
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += sqr(xs[i] - mx);
  }
  return sxx > 0 ? sxy / sxx : 0.0;
}

}  // namespace

LyapunovCheck check_lyapunov(const Trajectory& traj, double rate_floor) {
  const auto& sm = traj.samples;
  const double h = uniform_spacing(traj);
  const auto& p = traj.params;
  LyapunovCheck out;
  for (std::size_t i = 0; i + 1 < sm.size(); ++i) {
    const double dip = sm[i].diag.V - sm[i + 1].diag.V;
    out.worst_dip_per_length = std::max(out.worst_dip_per_length, std::max(0.0, dip) / (sm[i + 1].s - sm[i].s));
    const double r0 = lyapunov_rate(p, sm[i].state);
    const double r1 = lyapunov_rate(p, sm[i + 1].state);
    if (std::min(r0, r1) > 1e-8 && !(sm[i + 1].diag.V > sm[i].diag.V)) out.strict_increase = false;
  }
  const auto V = [&](std::size_t i) { return sm[i].diag.V; };
  // The rate has double zeros (T parallel to A C) while V stays O(1), so the
  // stencil must be accurate well below the rate floor.
  for (std::size_t i = 3; i + 3 < sm.size(); ++i) {
    const double rate = lyapunov_rate(p, sm[i].state);
    if (rate <= rate_floor) continue;
    const double fd = d1_seven(V, i, h);
    out.max_rel_error = std::max(out.max_rel_error, std::abs(fd - rate) / rate);
    ++out.compared;
  }
  return out;
}

ResidualStats distance_ode_residual(const Trajectory& traj, const Mat& B) {
  const auto& p = traj.params;
  const int n = p.dimension();
  if (B.rows() != n || B.cols() != n) fail(ErrorCode::invalid_argument, "B must be n x n");
  const double scale = std::max(1.0, B.norm() * std::max(1.0, p.A().norm()));
  if ((B * p.A() - p.A() * B).norm() > 1e-10 * scale)
    fail(ErrorCode::invalid_argument, "B must commute with A");
  if ((B * p.v()).norm() > 1e-10 * std::max(1.0, B.norm() * p.v().norm()))
    fail(ErrorCode::invalid_argument, "B must annihilate v");
  const double h = uniform_spacing(traj);
  const auto& sm = traj.samples;
  std::vector<double> delta(sm.size());
  for (std::size_t i = 0; i < sm.size(); ++i) delta[i] = 0.5 * (B * sm[i].state.C).squaredNorm();
  ResidualStats st;
  double sum = 0.0;
  for (std::size_t i = 1; i + 1 < sm.size(); ++i) {
    const double ds = (delta[i + 1] - delta[i - 1]) / (2.0 * h);
    const double dss = (delta[i + 1] - 2.0 * delta[i] + delta[i - 1]) / sqr(h);
    const double rhs = (B * sm[i].state.T).squaredNorm();
    accumulate(st, sum, dss - sm[i].diag.lambda * ds - 2.0 * p.alpha() * delta[i] - rhs);
  }
  finish(st, sum);
  return st;
}

ResidualStats z_ode_residual(const Trajectory& traj) {
  const double h = uniform_spacing(traj);
  const auto& sm = traj.samples;
  const double vv = traj.params.v().squaredNorm();
  ResidualStats st;
  double sum = 0.0;
  for (std::size_t i = 1; i + 1 < sm.size(); ++i) {
    const double zs = (sm[i + 1].diag.z - sm[i - 1].diag.z) / (2.0 * h);
    const double zss = (sm[i + 1].diag.z - 2.0 * sm[i].diag.z + sm[i - 1].diag.z) / sqr(h);
    accumulate(st, sum, zss - sm[i].diag.lambda * zs - vv);
  }
  finish(st, sum);
  return st;
}

ResidualStats lambda_derivative_residual(const Trajectory& traj) {
  const double h = uniform_spacing(traj);
  const auto& sm = traj.samples;
  const auto lam = [&](std::size_t i) { return sm[i].diag.lambda; };
  ResidualStats st;
  double sum = 0.0;
  for (std::size_t i = 2; i + 2 < sm.size(); ++i)
    accumulate(st, sum, d1_five(lam, i, h) + sqr(sm[i].diag.curvature));
  finish(st, sum);
  return st;
}

ExtremaCount count_extrema(const std::vector<double>& s, const std::vector<double>& x, double band_rel,
                           double end_fraction) {
  ExtremaCount out;
  if (x.empty()) return out;
  const auto [lo_it, hi_it] = std::minmax_element(x.begin(), x.end());
  const double range = *hi_it - *lo_it;
  if (range <= 1e-12 * std::max(1.0, std::abs(*hi_it))) {
    out.constant = true;
    return out;
  }
  const double band = band_rel * range;
  int dir = 0;
  double hi = x[0], lo = x[0], cand = x[0];
  std::size_t cand_i = 0;
  for (std::size_t i = 1; i < x.size(); ++i) {
    const double xi = x[i];
    if (dir == 0) {
      hi = std::max(hi, xi);
      lo = std::min(lo, xi);
      if (xi > lo + band) {
        dir = 1;
        cand = xi;
        cand_i = i;
      } else if (xi < hi - band) {
        dir = -1;
        cand = xi;
        cand_i = i;
      }
    } else if (dir > 0) {
      if (xi > cand) {
        cand = xi;
        cand_i = i;
      } else if (xi < cand - band) {
        ++out.maxima;
        dir = -1;
        cand = xi;
        cand_i = i;
      }
    } else {
      if (xi < cand) {
        cand = xi;
        cand_i = i;
      } else if (xi > cand + band) {
        ++out.minima;
        out.minima_s.push_back(s[cand_i]);
        dir = 1;
        cand = xi;
        cand_i = i;
      }
    }
  }
  const double s0 = s.front(), s1 = s.back();
  const double w = end_fraction * (s1 - s0);
  std::size_t head_end = 0, tail_begin = s.size();
  while (head_end < s.size() && s[head_end] <= s0 + w) ++head_end;
  while (tail_begin > 0 && s[tail_begin - 1] >= s1 - w) --tail_begin;
  out.head_decreasing = monotone_window(x, 0, head_end, -1.0);
  out.head_increasing = monotone_window(x, 0, head_end, 1.0);
  out.tail_increasing = monotone_window(x, tail_begin, s.size(), 1.0);
  out.tail_decreasing = monotone_window(x, tail_begin, s.size(), -1.0);
  return out;
}

const char* regime_name(Regime r) {
  switch (r) {
    case Regime::non_shrinking_rotating: return "non_shrinking_rotating";
    case Regime::translating_rotating: return "translating_rotating";
    case Regime::purely_rotating: return "purely_rotating";
    case Regime::shrinking: return "shrinking";
    case Regime::other: return "other";
  }
  return "other";
}

Regime classify_regime(const SolitonParams& p) {
  const bool rotating = !p.spectrum().is_zero();
  const bool translating = p.v().norm() > 0.0;
  if (p.alpha() < 0.0) return Regime::shrinking;
  if (!rotating) return Regime::other;
  if (p.alpha() == 0.0 && translating) return Regime::translating_rotating;
  if (p.alpha() == 0.0) return Regime::purely_rotating;
  return Regime::non_shrinking_rotating;
}

bool MonotonicityReport::all_passed() const {
  return std::all_of(findings.begin(), findings.end(), [](const LemmaFinding& f) { return !f.applicable || f.passed; });
}

MonotonicityReport monotonicity_report(const Trajectory& traj, double band_rel) {
  MonotonicityReport rep;
  const auto& p = traj.params;
  rep.regime = classify_regime(p);
  std::vector<double> s, cn, wn, z, lam;
  for (const auto& smp : traj.samples) {
    s.push_back(smp.s);
    cn.push_back(smp.state.C.norm());
    wn.push_back(smp.diag.W.norm());
    z.push_back(smp.diag.z);
    lam.push_back(smp.diag.lambda);
  }
  rep.c_norm = count_extrema(s, cn, band_rel);
  rep.w_norm = count_extrema(s, wn, band_rel);
  rep.z = count_extrema(s, z, band_rel);

  const auto describe = [](const ExtremaCount& e) {
    std::ostringstream os;
    if (e.constant) {
      os << "degenerate: constant";
      return os.str();
    }
    os << e.minima << " minima, " << e.maxima << " maxima";
    return os.str();
  };
  const bool w_nonzero = !rep.w_norm.constant || wn.front() > 0.0;
  const bool one_min_regime =
      rep.regime == Regime::non_shrinking_rotating || rep.regime == Regime::translating_rotating;

  {
    LemmaFinding f{"W_norm_at_most_one_minimum", one_min_regime && w_nonzero, true, describe(rep.w_norm)};
    f.passed = rep.w_norm.minima <= 1 && rep.w_norm.maxima == 0;
    rep.findings.push_back(f);
  }
  {
    const bool app = rep.regime == Regime::non_shrinking_rotating;
    LemmaFinding f{"C_norm_at_most_one_minimum", app, true, describe(rep.c_norm)};
    f.passed = rep.c_norm.minima <= 1 && rep.c_norm.maxima == 0;
    rep.findings.push_back(f);
    LemmaFinding g{"C_norm_unbounded_ends", app, true, ""};
    g.passed = rep.c_norm.head_decreasing && rep.c_norm.tail_increasing;
    g.detail = std::string("head ") + (rep.c_norm.head_decreasing ? "decreasing" : "not decreasing") + ", tail " +
               (rep.c_norm.tail_increasing ? "increasing" : "not increasing");
    rep.findings.push_back(g);
  }
  {
    const bool app = rep.regime == Regime::translating_rotating;
    LemmaFinding f{"z_at_most_one_minimum", app, true, describe(rep.z)};
    f.passed = rep.z.minima <= 1;
    rep.findings.push_back(f);
    // |z| grows on both ends; the direction may differ (the Grim Reaper has
    // z -> +inf at both).
    LemmaFinding g{"z_unbounded_ends", app, true, ""};
    const auto dir = [](bool inc, bool dec) { return inc ? "increasing" : (dec ? "decreasing" : "not monotone"); };
    g.passed = (rep.z.head_increasing || rep.z.head_decreasing) && (rep.z.tail_increasing || rep.z.tail_decreasing);
    g.detail = std::string("head ") + dir(rep.z.head_increasing, rep.z.head_decreasing) + ", tail " +
               dir(rep.z.tail_increasing, rep.z.tail_decreasing);
    rep.findings.push_back(g);
    LemmaFinding w{"W_norm_eventually_monotone", app, true, ""};
    w.passed = (rep.w_norm.head_decreasing || rep.w_norm.head_increasing || rep.w_norm.constant) &&
               (rep.w_norm.tail_increasing || rep.w_norm.tail_decreasing || rep.w_norm.constant);
    w.detail = w.passed ? "monotone on both end windows" : "an end window is not monotone";
    rep.findings.push_back(w);
  }
  if (p.alpha() == 0.0) {
    // lambda' = -|C_ss|^2 <= 0.
    const double band = 1e-12 * std::max(1.0, *std::max_element(lam.begin(), lam.end()) -
                                                   *std::min_element(lam.begin(), lam.end()));
    for (std::size_t i = 1; i < lam.size(); ++i)
      if (lam[i] > lam[i - 1] + band) rep.lambda_non_increasing = false;
    LemmaFinding f{"lambda_non_increasing", true, rep.lambda_non_increasing,
                   rep.lambda_non_increasing ? "lambda non-increasing" : "lambda increases somewhere"};
    rep.findings.push_back(f);
  }
  if (rep.regime == Regime::shrinking && rep.c_norm.constant) {
    rep.findings.push_back({"C_norm_constant", false, true, "degenerate: constant"});
  }
  return rep;
}

ProjectionProfile projection_profile(const Trajectory& traj) {
  const auto& sm = traj.samples;
  ProjectionProfile out;
  if (sm.empty()) return out;
  std::size_t i0 = 0;
  for (std::size_t i = 1; i < sm.size(); ++i)
    if (std::abs(sm[i].s) < std::abs(sm[i0].s)) i0 = i;
  std::vector<double> Lam(sm.size(), 0.0);
  out.phi1.assign(sm.size(), 0.0);
  for (std::size_t i = i0 + 1; i < sm.size(); ++i) {
    const double ds = sm[i].s - sm[i - 1].s;
    Lam[i] = Lam[i - 1] + 0.5 * ds * (sm[i].diag.lambda + sm[i - 1].diag.lambda);
    out.phi1[i] = out.phi1[i - 1] + 0.5 * ds * (std::exp(Lam[i]) + std::exp(Lam[i - 1]));
  }
  for (std::size_t i = i0; i-- > 0;) {
    const double ds = sm[i + 1].s - sm[i].s;
    Lam[i] = Lam[i + 1] - 0.5 * ds * (sm[i].diag.lambda + sm[i + 1].diag.lambda);
    out.phi1[i] = out.phi1[i + 1] - 0.5 * ds * (std::exp(Lam[i]) + std::exp(Lam[i + 1]));
  }
  out.strictly_increasing = true;
  for (std::size_t i = 1; i < sm.size(); ++i)
    if (!(out.phi1[i] > out.phi1[i - 1])) out.strictly_increasing = false;
  out.phi_minus = out.phi1.front();
  out.phi_plus = out.phi1.back();
  return out;
}

PlanarityReport planarity_check(const Trajectory& traj, double threshold) {
  const auto& sm = traj.samples;
  const auto& p = traj.params;
  PlanarityReport rep;
  if (sm.empty()) return rep;
  const int n = p.dimension();
  Mat Z(static_cast<Eigen::Index>(sm.size()), n);
  for (std::size_t i = 0; i < sm.size(); ++i) Z.row(static_cast<Eigen::Index>(i)) = sm[i].diag.Z.transpose();
  const Eigen::RowVectorXd mean = Z.colwise().mean();
  Z.rowwise() -= mean;
  Eigen::JacobiSVD<Mat> svd(Z);
  const Vec sv = svd.singularValues();
  for (int i = 0; i < sv.size(); ++i) rep.singular_values.push_back(sv[i]);
  const double top = sv.size() ? sv[0] : 0.0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv[i] > threshold * top && top > 0.0) ++rep.rank;

  const Regime reg = classify_regime(p);
  if (!p.spectrum().is_zero()) {
    if (reg == Regime::purely_rotating)
      rep.expected_max_rank = 1;
    else if (p.alpha() != 0.0 || reg == Regime::translating_rotating)
      rep.expected_max_rank = 2;
  }
  rep.passed = rep.expected_max_rank < 0 || rep.rank <= rep.expected_max_rank;

  if (reg == Regime::purely_rotating) {
    rep.profile = projection_profile(traj);
    std::size_t i0 = 0;
    for (std::size_t i = 1; i < sm.size(); ++i)
      if (std::abs(sm[i].s) < std::abs(sm[i0].s)) i0 = i;
    const Vec z0 = sm[i0].diag.Z;
    const Vec dz0 = p.null_projector() * sm[i0].state.T;
    for (std::size_t i = 0; i < sm.size(); ++i)
      rep.line_deviation = std::max(rep.line_deviation, (sm[i].diag.Z - z0 - rep.profile.phi1[i] * dz0).norm());
    rep.passed = rep.passed && rep.profile.strictly_increasing;

    // Exponential approach of Z to its end points, fitted on the middle of
    // each end window.
    const auto rate = [&](bool plus) {
      const Vec end = plus ? sm.back().diag.Z : sm.front().diag.Z;
      std::vector<double> xs, ys;
      const std::size_t m = sm.size();
      for (std::size_t k = m / 2; k < m - m / 10; ++k) {
        const std::size_t i = plus ? k : m - 1 - k;
        const double d = (sm[i].diag.Z - end).norm();
        if (d <= 0.0) continue;
        xs.push_back(std::abs(sm[i].s));
        ys.push_back(std::log(d));
      }
      return -fit_slope(xs, ys);
    };
    rep.approach_rate_plus = rate(true);
    rep.approach_rate_minus = rate(false);
  }
  return rep;
}

}  // namespace sl
