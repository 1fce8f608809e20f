// se3fiber - geodesics and fiber sections on SE(3)/SO(2)
// SPDX-License-Identifier: Apache-2.0
//
// Left-invariant Hamiltonian geodesic flow on SE(3).
//
// With momentum lambda in dual-frame coordinates and velocity u in the
// left-invariant frame the flow reads
//
//   gamma^{-1} dgamma/dt = u = G^{-1} lambda      (G^{-1} P_Delta^* lambda in SR mode)
//   dlambda/dt           = coad(u) lambda
//
// with Hamiltonian h = 1/2 <lambda, G^{-1} lambda>, so that a unit-time
// geodesic has length sqrt(2 h).

#ifndef SE3FIBER_GEODESIC_HPP
#define SE3FIBER_GEODESIC_HPP

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "se3fiber/metric.hpp"

namespace se3fiber {

struct PhaseState {
  RigidMotion g;
  Covector lam = Covector::Zero();
};

struct Trajectory {
  MetricParams metric;
  std::vector<double> times;
  std::vector<PhaseState> states;
  std::vector<AlgebraVector> velocities;

  bool empty() const { return states.empty(); }
  std::size_t size() const { return states.size(); }
};

inline double hamiltonian(const Covector& lam, const MetricParams& m) {
  return 0.5 * lam.dot(m.inverse_diagonal().cwiseProduct(lam));
}

/// u = G^{-1} lambda restricted to the directions the mode allows.
inline AlgebraVector velocity_from_momentum(const Covector& lam, const MetricParams& m) {
  return m.inverse_diagonal().cwiseProduct(lam);
}

/// Momentum constraint of the mode: GI metrics leave the fiber free, which forces lambda_6 = 0.
inline Covector admissible_momentum(Covector lam, const MetricParams& m) {
  if (m.mode == MetricMode::GaugeInvariant) lam[kFiber] = 0.0;
  return lam;
}

struct FlowDerivative {
  AlgebraVector velocity;
  Covector lam_dot;
};

inline FlowDerivative flow_rhs(const PhaseState& s, const MetricParams& m) {
  const AlgebraVector u = velocity_from_momentum(s.lam, m);
  return {u, coad(u, s.lam)};
}

namespace detail {

// Closed forms of ad and coad in (translation, rotation) blocks, used on the
// integrator's hot path.
inline AlgebraVector bracket(const AlgebraVector& a, const AlgebraVector& b) {
  AlgebraVector out;
  out.head<3>() = a.tail<3>().cross(b.head<3>()) - b.tail<3>().cross(a.head<3>());
  out.tail<3>() = a.tail<3>().cross(b.tail<3>());
  return out;
}

inline Covector coadjoint(const AlgebraVector& u, const Covector& lam) {
  Covector out;
  out.head<3>() = lam.head<3>().cross(u.tail<3>());
  out.tail<3>() = lam.head<3>().cross(u.head<3>()) + lam.tail<3>().cross(u.tail<3>());
  return out;
}

// Inverse of the right-trivialized dexp, truncated after the second bracket,
// which is enough for a fourth-order Munthe-Kaas scheme.
inline AlgebraVector dexpinv(const AlgebraVector& theta, const AlgebraVector& u) {
  const AlgebraVector b1 = bracket(theta, u);
  return u + 0.5 * b1 + bracket(theta, b1) / 12.0;
}

// One RK4 / Runge-Kutta-Munthe-Kaas step of size dt. The momentum equation
// does not depend on the configuration, so its stages are plain RK4 stages.
inline PhaseState rkmk4_step(const PhaseState& s, const MetricParams& m, double dt) {
  const Vector6 ginv = m.inverse_diagonal();
  const Covector& l1 = s.lam;
  const AlgebraVector u1 = ginv.cwiseProduct(l1);
  const Covector k1 = coadjoint(u1, l1);

  const Covector l2 = l1 + 0.5 * dt * k1;
  const AlgebraVector u2 = ginv.cwiseProduct(l2);
  const Covector k2 = coadjoint(u2, l2);

  const Covector l3 = l1 + 0.5 * dt * k2;
  const AlgebraVector u3 = ginv.cwiseProduct(l3);
  const Covector k3 = coadjoint(u3, l3);

  const Covector l4 = l1 + dt * k3;
  const AlgebraVector u4 = ginv.cwiseProduct(l4);
  const Covector k4 = coadjoint(u4, l4);

  const AlgebraVector f1 = dt * u1;
  const AlgebraVector f2 = dt * dexpinv(0.5 * f1, u2);
  const AlgebraVector f3 = dt * dexpinv(0.5 * f2, u3);
  const AlgebraVector f4 = dt * dexpinv(f3, u4);
  const AlgebraVector theta = (f1 + 2.0 * f2 + 2.0 * f3 + f4) / 6.0;

  return {compose(s.g, exp_se3(theta)), l1 + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)};
}

inline void check_integration_args(double T, int steps) {
  if (!(T > 0.0) || !std::isfinite(T)) throw std::invalid_argument("integrate: T must be positive");
  if (steps < 1) throw std::invalid_argument("integrate: steps must be >= 1");
}

}  // namespace detail

/// Final state of the flow after time T, without recording the path.
inline PhaseState integrate_endpoint(const PhaseState& s0, const MetricParams& m, double T,
                                     int steps) {
  detail::check_integration_args(T, steps);
  const double dt = T / steps;
  PhaseState s{s0.g, admissible_momentum(s0.lam, m)};
  for (int k = 0; k < steps; ++k) s = detail::rkmk4_step(s, m, dt);
  return s;
}

/// Integrates the geodesic flow on [0, T] with `steps` uniform steps. Throws
/// StepCountTooSmall when the Hamiltonian drifts by more than 1e-6 max(1, h0).
inline Trajectory integrate(const PhaseState& s0, const MetricParams& m, double T, int steps) {
  detail::check_integration_args(T, steps);
  const double dt = T / steps;
  Trajectory tr;
  tr.metric = m;
  tr.times.reserve(steps + 1);
  tr.states.reserve(steps + 1);
  tr.velocities.reserve(steps + 1);

  PhaseState s{s0.g, admissible_momentum(s0.lam, m)};
  const double h0 = hamiltonian(s.lam, m);
  const double allowed = tol::kHamiltonianDrift * std::max(1.0, h0);
  for (int k = 0; k <= steps; ++k) {
    if (k > 0) {
      s = detail::rkmk4_step(s, m, dt);
      const double drift = std::abs(hamiltonian(s.lam, m) - h0);
      if (!(drift <= allowed)) {
        std::ostringstream msg;
        msg << "integrate: Hamiltonian drift " << drift << " after " << k << " of " << steps
            << " steps; refine the step count";
        throw StepCountTooSmall(msg.str());
      }
    }
    tr.times.push_back(k == steps ? T : k * dt);
    tr.states.push_back(s);
    tr.velocities.push_back(velocity_from_momentum(s.lam, m));
  }
  return tr;
}

struct MomentumDiagnostics {
  double max_lam6_drift = 0.0;
  double max_hamiltonian_drift = 0.0;
  double max_u6_drift = 0.0;
};

/// Largest deviation of lambda_6, h and u^6 from their initial values.
inline MomentumDiagnostics momentum_diagnostics(const Trajectory& tr) {
  if (tr.empty()) throw std::invalid_argument("momentum_diagnostics: empty trajectory");
  MomentumDiagnostics d;
  const Covector& lam0 = tr.states.front().lam;
  const double h0 = hamiltonian(lam0, tr.metric);
  const double u60 = tr.velocities.front()[kFiber];
  for (std::size_t k = 0; k < tr.size(); ++k) {
    d.max_lam6_drift = std::max(d.max_lam6_drift, std::abs(tr.states[k].lam[kFiber] - lam0[kFiber]));
    d.max_hamiltonian_drift =
        std::max(d.max_hamiltonian_drift, std::abs(hamiltonian(tr.states[k].lam, tr.metric) - h0));
    d.max_u6_drift = std::max(d.max_u6_drift, std::abs(tr.velocities[k][kFiber] - u60));
  }
  return d;
}

}  // namespace se3fiber

#endif  // SE3FIBER_GEODESIC_HPP
