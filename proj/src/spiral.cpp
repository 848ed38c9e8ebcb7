#include <boost/numeric/odeint.hpp>

#include <cmath>
#include <sstream>

#include "solitonlab/asymptotics.hpp"

namespace sl {

namespace {

namespace odeint = boost::numeric::odeint;
using UVec = boost::numeric::ublas::vector<double>;
using UMat = boost::numeric::ublas::matrix<double>;

// Right-hand side in sigma for y = (Gamma, T, s, varsigma, sigma), with
// C = E Gamma, E = e^{sign sigma B}, B = alpha + A and a = B C. Sigma is
// carried as a state component: the stepper's time-derivative stage terms
// lose order on non-autonomous systems.
struct SpiralSystem {
  const SolitonParams& p;
  int sign;
  int n;
  Mat B;

  struct Frame {
    Mat E, Einv;
    Vec Gamma, T, C, a, ah;
    double r = 0.0;
    double w = 0.0;  // sqrt(1 + |C|^2)
  };

  Frame frame(const UVec& x) const {
    const double sigma = x[2 * n + 2];
    Frame f;
    f.E = dilate_rotate_exp(p.alpha(), p.spectrum(), sign * sigma);
    f.Einv = dilate_rotate_exp(p.alpha(), p.spectrum(), -sign * sigma);
    f.Gamma = Vec(n);
    f.T = Vec(n);
    for (int i = 0; i < n; ++i) {
      f.Gamma[i] = x[i];
      f.T[i] = x[n + i];
    }
    f.C = f.E * f.Gamma;
    f.a = B * f.C;
    f.r = f.a.norm();
    f.ah = f.r > 0 ? Vec(f.a / f.r) : Vec(Vec::Zero(n));
    f.w = std::sqrt(1.0 + f.C.squaredNorm());
    return f;
  }

  void operator()(const UVec& x, UVec& dx, double) const {
    const Frame f = frame(x);
    const Vec dG = f.r * (f.Einv * f.T) - sign * (B * f.Gamma);
    const Vec dT = f.r * (f.a - f.a.dot(f.T) * f.T);
    for (int i = 0; i < n; ++i) {
      dx[i] = dG[i];
      dx[n + i] = dT[i];
    }
    dx[2 * n] = f.r;
    dx[2 * n + 1] = f.r * f.w;
    dx[2 * n + 2] = 1.0;
  }
};

struct SpiralJacobian {
  const SpiralSystem& sys;

  void operator()(const UVec& x, UMat& J, double, UVec& dfdt) const {
    const int n = sys.n;
    const int sg = sys.sign;
    const auto f = sys.frame(x);
    const Mat& B = sys.B;
    const Mat BE = B * f.E;
    const Eigen::RowVectorXd dr = f.ah.transpose() * BE;  // d r / d Gamma
    const Mat I = Mat::Identity(n, n);
    const Vec pTa = f.a - f.a.dot(f.T) * f.T;
    const Vec EinvT = f.Einv * f.T;

    const int dim = 2 * n + 3;
    Mat Jf = Mat::Zero(dim, dim);
    Jf.block(0, 0, n, n) = EinvT * dr - sg * B;
    Jf.block(0, n, n, n) = f.r * f.Einv;
    Jf.block(n, 0, n, n) = pTa * dr + f.r * (I - f.T * f.T.transpose()) * BE;
    Jf.block(n, n, n, n) = f.r * (-f.T * f.a.transpose() - f.a.dot(f.T) * I);
    Jf.block(2 * n, 0, 1, n) = dr;
    Jf.block(2 * n + 1, 0, 1, n) = f.w * dr + (f.r / f.w) * (f.C.transpose() * f.E);

    // Dependence on the sigma component through E.
    const Vec da = sg * (B * f.a);
    const double drs = f.ah.dot(da);
    const Vec dC = sg * (B * f.C);
    Jf.block(0, dim - 1, n, 1) = drs * EinvT - f.r * sg * (B * EinvT);
    Jf.block(n, dim - 1, n, 1) = drs * pTa + f.r * (da - da.dot(f.T) * f.T);
    Jf(2 * n, dim - 1) = drs;
    Jf(2 * n + 1, dim - 1) = drs * f.w + f.r * f.C.dot(dC) / f.w;

    for (int i = 0; i < dim; ++i) {
      dfdt[i] = 0.0;
      for (int j = 0; j < dim; ++j) J(i, j) = Jf(i, j);
    }
  }
};

}  // namespace

Trajectory integrate_spiral(const SolitonParams& p, const PhaseState& state0, double sigma_end, int sign,
                            const SpiralIntegrateOptions& opts) {
  check_state(p, state0);
  if (p.alpha() == 0.0) fail(ErrorCode::invalid_argument, "integrate_spiral: requires alpha != 0");
  if (sign != 1 && sign != -1) fail(ErrorCode::invalid_argument, "integrate_spiral: sign must be +1 or -1");
  if (!(sigma_end > 0.0)) fail(ErrorCode::invalid_argument, "integrate_spiral: sigma_end must be positive");
  if (!(opts.sigma_grid > 0.0)) fail(ErrorCode::invalid_argument, "integrate_spiral: sigma_grid must be positive");
  const int n = p.dimension();
  const int dim = 2 * n + 3;
  const Mat B = p.alpha() * Mat::Identity(n, n) + p.A();
  if (p.drive(state0.C).norm() < kDriveFloor)
    fail(ErrorCode::domain_error, "integrate_spiral: the drive vanishes at the initial point");

  SpiralSystem sys{p, sign, n, B};
  SpiralJacobian jac{sys};

  UVec x(dim);
  for (int i = 0; i < n; ++i) {
    x[i] = state0.C[i];
    x[n + i] = state0.T[i];
  }
  x[2 * n] = 0.0;
  x[2 * n + 1] = 0.0;
  x[2 * n + 2] = 0.0;

  Trajectory traj(p);
  traj.rtol = opts.rtol;
  traj.atol = opts.atol;
  traj.gamma_sign = sign;

  const auto record = [&](double sigma) {
    const auto f = sys.frame(x);
    TrajectorySample smp;
    smp.s = x[2 * n];
    smp.sigma = sigma;
    smp.varsigma = x[2 * n + 1];
    smp.state = {f.C, f.T};
    smp.P = f.C / f.w;
    smp.diag = sample(p, smp.state);
    traj.samples.push_back(std::move(smp));
    traj.gamma.push_back(f.Gamma);
  };

  auto stepper = odeint::make_controlled<odeint::rosenbrock4<double>>(opts.atol, opts.rtol);
  double sigma = 0.0;
  double h = opts.h_init;
  record(sigma);
  long steps = 0;
  long k = 1;
  while (sigma < sigma_end) {
    const double next = std::min(sigma_end, k * opts.sigma_grid);
    if (steps++ >= opts.max_steps) {
      traj.termination = Termination::max_steps;
      traj.message = "integrate_spiral: step limit reached";
      break;
    }
    const double h_old = h;
    bool hit = false;
    if (sigma + h >= next) {
      h = next - sigma;
      hit = true;
    }
    const auto res = stepper.try_step(std::make_pair(sys, jac), x, sigma, h);
    if (res == odeint::fail) {
      ++traj.stats.rejected;
      if (!(h > 1e-15 * std::max(1.0, std::abs(sigma)))) {
        traj.termination = Termination::step_underflow;
        std::ostringstream os;
        os << "integrate_spiral: step size underflow at sigma = " << sigma;
        traj.message = os.str();
        break;
      }
      continue;
    }
    ++traj.stats.accepted;
    bool finite = true;
    for (int i = 0; i < dim; ++i) finite = finite && std::isfinite(x[i]);
    if (!finite) {
      traj.termination = Termination::non_finite;
      traj.message = "integrate_spiral: non-finite state";
      break;
    }
    double tn = 0.0;
    for (int i = 0; i < n; ++i) tn += x[n + i] * x[n + i];
    tn = std::sqrt(tn);
    for (int i = 0; i < n; ++i) x[n + i] /= tn;
    if (hit) {
      // try_step advanced sigma by the clipped step; snap to the grid point.
      sigma = next;
      x[2 * n + 2] = next;
      record(sigma);
      ++k;
      h = std::max(h, h_old);
    }
  }
  return traj;
}

}  // namespace sl
