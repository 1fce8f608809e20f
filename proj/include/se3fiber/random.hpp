// se3fiber - geodesics and fiber sections on SE(3)/SO(2)
// SPDX-License-Identifier: Apache-2.0
//
// Seeded samplers shared by the verification suites and the tests.

#ifndef SE3FIBER_RANDOM_HPP
#define SE3FIBER_RANDOM_HPP

#include <cstdint>
#include <random>

#include "se3fiber/sections.hpp"

namespace se3fiber {

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(rng_); }

  Vector3 gaussian3() { return {normal(), normal(), normal()}; }
  Vector6 gaussian6() {
    Vector6 v;
    for (int i = 0; i < 6; ++i) v[i] = normal();
    return v;
  }

  Vector3 unit_vector() {
    Vector3 v;
    do v = gaussian3();
    while (v.norm() < 1e-6);
    return v.normalized();
  }

  /// Uniformly distributed rotation vector direction with angle in [0, max_angle].
  Vector3 rotation_vector(double max_angle) { return uniform(0.0, max_angle) * unit_vector(); }

  Matrix3 rotation() { return exp_so3(rotation_vector(kPi - 1e-3)); }

  RigidMotion motion(double translation_scale = 1.0) {
    return {translation_scale * gaussian3(), rotation()};
  }

  /// Algebra vector with translation part of norm <= v_max and angle <= q_max.
  AlgebraVector algebra(double v_max, double q_max) {
    AlgebraVector c;
    c.head<3>() = uniform(0.0, v_max) * unit_vector();
    c.tail<3>() = rotation_vector(q_max);
    return c;
  }

  /// Orientation with polar angle in [beta_lo, beta_hi].
  Vector3 orientation(double beta_lo, double beta_hi) {
    const double beta = uniform(beta_lo, beta_hi);
    const double gamma = uniform(0.0, kTwoPi);
    return {std::sin(beta) * std::cos(gamma), std::sin(beta) * std::sin(gamma), std::cos(beta)};
  }

  /// Riemannian metric of the diagonal family with coefficients in [lo, hi].
  MetricParams riemannian_metric(double lo = 0.2, double hi = 3.0) {
    return MetricParams::riemannian(uniform(lo, hi), uniform(lo, hi), uniform(lo, hi), uniform(lo, hi));
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace se3fiber

#endif  // SE3FIBER_RANDOM_HPP
