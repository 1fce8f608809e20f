// se3fiber - geodesics and fiber sections on SE(3)/SO(2)
// SPDX-License-Identifier: Apache-2.0
//
// Small dense optimizers used by the boundary-value and fiber solvers.

#ifndef SE3FIBER_OPTIM_HPP
#define SE3FIBER_OPTIM_HPP

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <vector>

namespace se3fiber::optim {

using VectorX = Eigen::VectorXd;
using MatrixX = Eigen::MatrixXd;

// ---------------------------------------------------------------------------
// Nelder-Mead simplex

struct SimplexOptions {
  double initial_step = 0.1;
  double f_target = -std::numeric_limits<double>::infinity();  // stop once f <= f_target
  double f_tol = 1e-14;                                         // spread of simplex values
  double x_tol = 1e-12;
  int max_evaluations = 2000;
};

struct SimplexResult {
  VectorX x;
  double f = std::numeric_limits<double>::infinity();
  int evaluations = 0;
};

/// Adaptive-parameter Nelder-Mead (Gao and Han coefficients).
inline SimplexResult nelder_mead(const std::function<double(const VectorX&)>& f, const VectorX& x0,
                                 const SimplexOptions& opt = {}) {
  const int n = static_cast<int>(x0.size());
  const double dn = n;
  const double rho = 1.0, chi = 1.0 + 2.0 / dn, psi = 0.75 - 0.5 / dn, sigma = 1.0 - 1.0 / dn;

  SimplexResult out;
  auto eval = [&](const VectorX& x) {
    ++out.evaluations;
    const double v = f(x);
    return std::isfinite(v) ? v : std::numeric_limits<double>::max();
  };

  std::vector<VectorX> pts(n + 1, x0);
  std::vector<double> vals(n + 1);
  vals[0] = eval(x0);
  for (int i = 0; i < n; ++i) {
    pts[i + 1][i] += opt.initial_step;
    vals[i + 1] = eval(pts[i + 1]);
  }
  std::vector<int> order(n + 1);

  while (out.evaluations < opt.max_evaluations) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return vals[a] < vals[b]; });
    const int best = order.front(), worst = order.back(), second = order[n - 1];
    if (vals[best] <= opt.f_target) break;
    double spread = 0.0;
    for (int i = 0; i <= n; ++i) spread = std::max(spread, (pts[i] - pts[best]).cwiseAbs().maxCoeff());
    if (vals[worst] - vals[best] <= opt.f_tol && spread <= opt.x_tol) break;
    if (spread <= opt.x_tol) break;

    VectorX centroid = VectorX::Zero(n);
    for (int i = 0; i <= n; ++i)
      if (i != worst) centroid += pts[i];
    centroid /= dn;

    const VectorX xr = centroid + rho * (centroid - pts[worst]);
    const double fr = eval(xr);
    if (fr < vals[best]) {
      const VectorX xe = centroid + chi * (xr - centroid);
      const double fe = eval(xe);
      if (fe < fr) {
        pts[worst] = xe, vals[worst] = fe;
      } else {
        pts[worst] = xr, vals[worst] = fr;
      }
      continue;
    }
    if (fr < vals[second]) {
      pts[worst] = xr, vals[worst] = fr;
      continue;
    }
    const bool outside = fr < vals[worst];
    const VectorX xc = outside ? VectorX(centroid + psi * (xr - centroid))
                               : VectorX(centroid - psi * (centroid - pts[worst]));
    const double fc = eval(xc);
    if (fc < std::min(fr, vals[worst])) {
      pts[worst] = xc, vals[worst] = fc;
      continue;
    }
    for (int i = 0; i <= n; ++i) {
      if (i == best) continue;
      pts[i] = pts[best] + sigma * (pts[i] - pts[best]);
      vals[i] = eval(pts[i]);
    }
  }
  const auto it = std::min_element(vals.begin(), vals.end());
  out.x = pts[it - vals.begin()];
  out.f = *it;
  return out;
}

// ---------------------------------------------------------------------------
// Levenberg-Marquardt on a residual with a forward-difference Jacobian

struct LeastSquaresOptions {
  double tol = 1e-8;  // stop once |r| <= tol
  int max_iterations = 40;
  double fd_step = 1e-7;
};

struct LeastSquaresResult {
  VectorX x;
  VectorX residual;
  double norm = std::numeric_limits<double>::infinity();
  bool converged = false;
  int iterations = 0;
};

/// `r` returns an empty vector when the point is infeasible.
inline LeastSquaresResult levenberg_marquardt(const std::function<VectorX(const VectorX&)>& r,
                                              const VectorX& x0,
                                              const LeastSquaresOptions& opt = {}) {
  LeastSquaresResult out;
  out.x = x0;
  out.residual = r(x0);
  if (out.residual.size() == 0 || !out.residual.allFinite()) return out;
  out.norm = out.residual.norm();
  const int n = static_cast<int>(x0.size());
  double mu = 1e-3;

  while (out.norm > opt.tol && out.iterations < opt.max_iterations) {
    ++out.iterations;
    MatrixX J(out.residual.size(), n);
    bool ok = true;
    for (int j = 0; j < n && ok; ++j) {
      const double h = opt.fd_step * std::max(1.0, std::abs(out.x[j]));
      VectorX xp = out.x;
      xp[j] += h;
      const VectorX rp = r(xp);
      ok = rp.size() == out.residual.size() && rp.allFinite();
      if (ok) J.col(j) = (rp - out.residual) / h;
    }
    if (!ok) break;

    const MatrixX JtJ = J.transpose() * J;
    const VectorX g = J.transpose() * out.residual;
    bool accepted = false;
    for (int attempt = 0; attempt < 12 && !accepted; ++attempt) {
      MatrixX A = JtJ;
      A.diagonal() += mu * JtJ.diagonal().cwiseMax(1e-12);
      const VectorX step = A.ldlt().solve(-g);
      const VectorX xn = out.x + step;
      const VectorX rn = r(xn);
      if (rn.size() == out.residual.size() && rn.allFinite() && rn.norm() < out.norm) {
        out.x = xn;
        out.residual = rn;
        out.norm = rn.norm();
        mu = std::max(mu / 4.0, 1e-12);
        accepted = true;
      } else {
        mu *= 6.0;
      }
    }
    if (!accepted) break;
  }
  out.converged = out.norm <= opt.tol;
  return out;
}

// ---------------------------------------------------------------------------
// Golden-section search on [lo, hi]

struct ScalarMinimum {
  double x;
  double f;
};

inline ScalarMinimum golden_section(const std::function<double(double)>& f, double lo, double hi,
                                    double x_tol) {
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - invphi * (b - a), d = a + invphi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > x_tol) {
    if (fc <= fd) {
      b = d, d = c, fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c, c = d, fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
  }
  return fc <= fd ? ScalarMinimum{c, fc} : ScalarMinimum{d, fd};
}

}  // namespace se3fiber::optim

#endif  // SE3FIBER_OPTIM_HPP
