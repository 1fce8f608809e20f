// se3fiber - geodesics and fiber sections on SE(3)/SO(2)
// SPDX-License-Identifier: Apache-2.0
//
// Geodesic distance d_G(target, e) by shooting on the initial momentum, and an
// independent path-energy minimizer used to cross-check it.

#ifndef SE3FIBER_SHOOTING_HPP
#define SE3FIBER_SHOOTING_HPP

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "se3fiber/geodesic.hpp"
#include "se3fiber/optim.hpp"

namespace se3fiber {

struct ShootingConfig {
  double tol = 1e-8;     // endpoint error accepted as converged
  int restarts = 8;      // random starts after the exponential-curve seed
  int steps = 1000;      // integrator steps over unit time
  double max_rho = 3.0;  // Euclidean bound on |log target|
  std::uint64_t seed = 0;
  bool record_trajectory = true;
};

struct ShootingResult {
  double distance = 0.0;
  Covector lam0 = Covector::Zero();
  double endpoint_error = 0.0;
  bool converged = false;
  Trajectory trajectory;
  /// Other converged initial momenta whose length is within 1e-6 of `distance`.
  std::vector<Covector> ties;
};

namespace detail {

// Shooting unknowns: the momentum coordinates the mode lets vary.
struct ShootingProblem {
  const RigidMotion& target;
  const MetricParams& metric;
  int steps;
  std::vector<int> free;  // indices of lambda that are unknowns

  ShootingProblem(const RigidMotion& t, const MetricParams& m, int s)
      : target(t), metric(m), steps(s) {
    for (int i = 0; i < 6; ++i)
      if (!(m.mode == MetricMode::GaugeInvariant && i == kFiber)) free.push_back(i);
  }

  Covector momentum(const optim::VectorX& p) const {
    Covector lam = Covector::Zero();
    for (std::size_t k = 0; k < free.size(); ++k) lam[free[k]] = p[k];
    return lam;
  }

  optim::VectorX parameters(const Covector& lam) const {
    optim::VectorX p(free.size());
    for (std::size_t k = 0; k < free.size(); ++k) p[k] = lam[free[k]];
    return p;
  }

  // R/SR: log of the endpoint mismatch. GI: mismatch of position and
  // orientation only, since fiber motion is free.
  optim::VectorX residual(const optim::VectorX& p) const {
    const PhaseState end = integrate_endpoint({RigidMotion::identity(), momentum(p)}, metric, 1.0, steps);
    if (metric.mode == MetricMode::GaugeInvariant) {
      optim::VectorX r(6);
      r.head<3>() = end.g.x - target.x;
      r.tail<3>() = end.g.R.col(2) - target.R.col(2);
      return r;
    }
    try {
      return log_se3(compose(inverse(end.g), target));
    } catch (const AngleAtCutLocus&) {
      return {};
    }
  }

  Covector exp_seed() const {
    const AlgebraVector c = log_se3(target);
    Covector lam = Covector::Zero();
    const Vector6 g = metric.diagonal();
    for (int i = 0; i < 6; ++i)
      if (metric.inverse_diagonal()[i] != 0.0) lam[i] = g[i] * c[i];
    return lam;
  }
};

struct Candidate {
  Covector lam0;
  double distance;
  double error;
};

// Local solve from one start. Levenberg-Marquardt runs on a coarse integrator
// grid first, falling back to the simplex when it stalls, and is then polished
// on the full grid where the tolerance is checked.
inline std::optional<Candidate> solve_from(const ShootingProblem& fine, const ShootingProblem& coarse,
                                           const Covector& start, double tol, double scale) {
  auto r_fine = [&](const optim::VectorX& p) { return fine.residual(p); };
  auto r_coarse = [&](const optim::VectorX& p) { return coarse.residual(p); };
  optim::LeastSquaresOptions lm;
  lm.tol = std::max(tol, 1e-6 * scale);

  optim::VectorX p = fine.parameters(start);
  optim::LeastSquaresResult fit = optim::levenberg_marquardt(r_coarse, p, lm);
  if (!fit.converged) {
    optim::SimplexOptions nm;
    nm.initial_step = 0.1 * std::max(p.norm(), 0.1);
    nm.f_target = 1e-3 * scale;
    nm.max_evaluations = 600;
    auto objective = [&](const optim::VectorX& q) {
      const optim::VectorX rq = r_coarse(q);
      return rq.size() == 0 ? std::numeric_limits<double>::infinity() : rq.norm();
    };
    fit = optim::levenberg_marquardt(r_coarse, optim::nelder_mead(objective, p, nm).x, lm);
    if (!fit.converged) return std::nullopt;
  }
  lm.tol = tol;
  fit = optim::levenberg_marquardt(r_fine, fit.x, lm);
  if (!fit.converged) return std::nullopt;
  const Covector lam = fine.momentum(fit.x);
  return Candidate{lam, std::sqrt(2.0 * hamiltonian(lam, fine.metric)), fit.norm};
}

}  // namespace detail

namespace detail {

struct ShootingSetup {
  AlgebraVector log_target;
  double scale;
};

inline ShootingSetup prepare_shooting(const RigidMotion& target, const MetricParams& m,
                                      const ShootingConfig& cfg) {
  m.validated();
  if (cfg.steps < 1 || cfg.restarts < 0 || !(cfg.tol > 0))
    throw std::invalid_argument("shoot_distance: invalid ShootingConfig");
  const AlgebraVector log_target = log_se3(target);
  if (log_target.norm() > cfg.max_rho) {
    throw DomainError("shoot_distance: |log target| exceeds maxRho");
  }
  return {log_target, std::max(1.0, log_target.norm())};
}

inline int coarse_steps(int steps) { return std::min(steps, std::max(64, steps / 8)); }

inline ShootingResult finish(const Candidate& best, const MetricParams& m, const ShootingConfig& cfg) {
  ShootingResult out;
  out.distance = best.distance;
  out.lam0 = best.lam0;
  out.endpoint_error = best.error;
  out.converged = true;
  if (cfg.record_trajectory) out.trajectory = integrate({{}, out.lam0}, m, 1.0, cfg.steps);
  return out;
}

}  // namespace detail

/// Length of the shortest geodesic from e to `target` found by multi-start
/// shooting. Starts are tried in the order: `warm_starts`, the exponential-curve
/// seed lambda = G log(target), then `cfg.restarts` random perturbations of it.
///
/// In GI mode the fiber is free, lambda_6 = 0 and the endpoint is matched only
/// up to the fiber of `target`. In SR mode all six momenta are unknowns.
inline ShootingResult shoot_distance(const RigidMotion& target, const MetricParams& m,
                                     const ShootingConfig& cfg,
                                     const std::vector<Covector>& warm_starts = {}) {
  const detail::ShootingSetup setup = detail::prepare_shooting(target, m, cfg);
  if (setup.log_target.norm() == 0.0) {
    return detail::finish({Covector::Zero(), 0.0, 0.0}, m, cfg);
  }

  const detail::ShootingProblem prob(target, m, cfg.steps);
  const detail::ShootingProblem coarse(target, m, detail::coarse_steps(cfg.steps));
  const Covector seed = prob.exp_seed();

  std::vector<Covector> starts = warm_starts;
  starts.push_back(seed);
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double spread = 0.3 * std::max(seed.norm(), 0.1);
  for (int k = 0; k < cfg.restarts; ++k) {
    Covector lam = seed;
    for (int i : prob.free) lam[i] += spread * normal(rng);
    starts.push_back(lam);
  }

  std::vector<detail::Candidate> found;
  for (const Covector& s : starts) {
    if (auto c = detail::solve_from(prob, coarse, admissible_momentum(s, m), cfg.tol, setup.scale)) {
      found.push_back(*c);
    }
  }
  if (found.empty()) {
    throw NoConvergence("shoot_distance: no start reached endpoint tolerance");
  }
  std::sort(found.begin(), found.end(),
            [](const auto& a, const auto& b) { return a.distance < b.distance; });
  const detail::Candidate& best = found.front();
  ShootingResult out = detail::finish(best, m, cfg);
  for (std::size_t k = 1; k < found.size(); ++k) {
    if (found[k].distance - best.distance > 1e-6) break;
    const bool distinct = (found[k].lam0 - best.lam0).norm() > 1e-6 * std::max(1.0, best.lam0.norm());
    const bool known = std::any_of(out.ties.begin(), out.ties.end(), [&](const Covector& t) {
      return (found[k].lam0 - t).norm() <= 1e-6 * std::max(1.0, t.norm());
    });
    if (distinct && !known) out.ties.push_back(found[k].lam0);
  }
  return out;
}

/// A single local solve started at `start`: the geodesic found need not be
/// minimizing. Returns nullopt when the solve does not converge.
inline std::optional<ShootingResult> shoot_from(const RigidMotion& target, const MetricParams& m,
                                                const ShootingConfig& cfg, const Covector& start) {
  const detail::ShootingSetup setup = detail::prepare_shooting(target, m, cfg);
  if (setup.log_target.norm() == 0.0) return detail::finish({Covector::Zero(), 0.0, 0.0}, m, cfg);
  const detail::ShootingProblem prob(target, m, cfg.steps);
  const detail::ShootingProblem coarse(target, m, detail::coarse_steps(cfg.steps));
  if (auto c = detail::solve_from(prob, coarse, admissible_momentum(start, m), cfg.tol, setup.scale))
    return detail::finish(*c, m, cfg);
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Independent oracle: minimal length of a chain of exponential segments

struct EnergyOracleOptions {
  int max_iterations = 20000;
  double gradient_tol = 1e-10;
  double fd_step = 1e-6;
};

/// Minimizes the discrete path energy N * sum |c_i|_G^2 over chains
/// e = g_0, g_1, ..., g_N = target with c_i = log(g_{i-1}^{-1} g_i), by
/// metric-preconditioned gradient descent on the interior nodes, starting from
/// the exponential curve. Returns the chain length sum |c_i|_G.
inline double energy_oracle_distance(const RigidMotion& target, const MetricParams& m,
                                     int segments = 32, const EnergyOracleOptions& opt = {}) {
  m.validated();
  if (segments < 8) throw std::invalid_argument("energy_oracle_distance: segments must be >= 8");
  if (m.mode == MetricMode::SubRiemannian)
    throw Unsupported("energy_oracle_distance: sub-Riemannian metrics are not supported");

  const AlgebraVector c = log_se3(target);
  if (c.norm() == 0.0) return 0.0;
  const int N = segments;
  const Vector6 g = m.diagonal();
  Vector6 precond = g;
  if (precond[kFiber] == 0.0) precond[kFiber] = g[3];

  std::vector<RigidMotion> nodes(N + 1);
  for (int i = 0; i <= N; ++i) nodes[i] = exp_se3(c * (double(i) / N));
  nodes[N] = target;

  auto seg_energy = [&](const RigidMotion& a, const RigidMotion& b) {
    const AlgebraVector s = log_se3(compose(inverse(a), b));
    return s.dot(g.cwiseProduct(s));
  };
  auto total_energy = [&](const std::vector<RigidMotion>& pts) {
    double e = 0.0;
    for (int i = 1; i <= N; ++i) e += seg_energy(pts[i - 1], pts[i]);
    return N * e;
  };
  auto length = [&](const std::vector<RigidMotion>& pts) {
    double l = 0.0;
    for (int i = 1; i <= N; ++i) l += algebra_norm(log_se3(compose(inverse(pts[i - 1]), pts[i])), m);
    return l;
  };

  std::vector<Vector6> grad(N + 1, Vector6::Zero()), prev_grad(N + 1, Vector6::Zero());
  std::vector<Vector6> prev_step(N + 1, Vector6::Zero());
  auto compute_gradient = [&]() {
    double norm2 = 0.0;
    for (int i = 1; i < N; ++i) {
      for (int a = 0; a < 6; ++a) {
        const RigidMotion plus = compose(nodes[i], exp_se3(opt.fd_step * AlgebraVector::Unit(a)));
        const RigidMotion minus = compose(nodes[i], exp_se3(-opt.fd_step * AlgebraVector::Unit(a)));
        const double ep = seg_energy(nodes[i - 1], plus) + seg_energy(plus, nodes[i + 1]);
        const double em = seg_energy(nodes[i - 1], minus) + seg_energy(minus, nodes[i + 1]);
        grad[i][a] = N * (ep - em) / (2.0 * opt.fd_step);
      }
      norm2 += grad[i].dot(grad[i].cwiseQuotient(precond));
    }
    return std::sqrt(norm2);
  };

  double energy = total_energy(nodes);
  const double energy_scale = std::max(energy, 1e-300);
  double step = 0.5 / N;
  int stalled = 0;
  for (int iter = 0; iter < opt.max_iterations; ++iter) {
    const double gnorm = compute_gradient();
    if (gnorm <= opt.gradient_tol * std::sqrt(energy_scale)) return length(nodes);

    // Barzilai-Borwein step in the preconditioned metric, then Armijo backtracking.
    if (iter > 0) {
      double sy = 0.0, yy = 0.0;
      for (int i = 1; i < N; ++i) {
        const Vector6 y = grad[i] - prev_grad[i];
        sy += prev_step[i].dot(y);
        yy += y.dot(y.cwiseQuotient(precond));
      }
      if (sy > 0 && yy > 0) step = sy / yy;
    }
    std::vector<RigidMotion> trial(nodes);
    double trial_energy = energy;
    bool accepted = false;
    for (int bt = 0; bt < 40; ++bt) {
      for (int i = 1; i < N; ++i)
        trial[i] = compose(nodes[i], exp_se3(-step * grad[i].cwiseQuotient(precond)));
      try {
        trial_energy = total_energy(trial);
      } catch (const AngleAtCutLocus&) {
        trial_energy = std::numeric_limits<double>::infinity();
      }
      if (trial_energy <= energy - 1e-4 * step * gnorm * gnorm) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      // No further decrease representable: accept the current chain if it is flat enough.
      if (gnorm <= 1e-6 * std::sqrt(energy_scale)) return length(nodes);
      throw NoConvergence("energy_oracle_distance: descent stalled");
    }
    for (int i = 1; i < N; ++i) {
      prev_step[i] = -step * grad[i].cwiseQuotient(precond);
      prev_grad[i] = grad[i];
    }
    stalled = (energy - trial_energy <= 1e-15 * energy) ? stalled + 1 : 0;
    nodes.swap(trial);
    energy = trial_energy;
    if (stalled >= 20) return length(nodes);
  }
  throw NoConvergence("energy_oracle_distance: iteration limit reached");
}

}  // namespace se3fiber

#endif  // SE3FIBER_SHOOTING_HPP
