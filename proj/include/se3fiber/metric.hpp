// se3fiber - geodesics and fiber sections on SE(3)/SO(2)
// SPDX-License-Identifier: Apache-2.0
//
// Left-invariant metrics
//
//   G = g11 (w1 w1 + w2 w2) + g33 w3 w3 + g44 (w4 w4 + w5 w5) + g66 w6 w6
//
// on SE(3), their Ad(H)-invariance, and the reductive split g = h + m with
// h = span{A6}.

#ifndef SE3FIBER_METRIC_HPP
#define SE3FIBER_METRIC_HPP

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

#include "se3fiber/se3.hpp"

namespace se3fiber {

enum class MetricMode {
  Riemannian,     // all coefficients finite and positive
  SubRiemannian,  // g11 = infinity, motion restricted to span{A3, A4, A5}
  GaugeInvariant  // g66 = 0, fiber motion is free
};

inline const char* to_string(MetricMode mode) {
  switch (mode) {
    case MetricMode::Riemannian: return "R";
    case MetricMode::SubRiemannian: return "SR";
    case MetricMode::GaugeInvariant: return "GI";
  }
  return "?";
}

struct MetricParams {
  double g11 = 1.0;
  double g33 = 1.0;
  double g44 = 1.0;
  double g66 = 1.0;
  MetricMode mode = MetricMode::Riemannian;

  static MetricParams riemannian(double g11, double g33, double g44, double g66) {
    return MetricParams{g11, g33, g44, g66, MetricMode::Riemannian}.validated();
  }
  static MetricParams sub_riemannian(double g33, double g44, double g66) {
    return MetricParams{std::numeric_limits<double>::infinity(), g33, g44, g66,
                        MetricMode::SubRiemannian}
        .validated();
  }
  static MetricParams gauge_invariant(double g11, double g33, double g44) {
    return MetricParams{g11, g33, g44, 0.0, MetricMode::GaugeInvariant}.validated();
  }

  /// Throws std::invalid_argument unless the coefficients fit the mode.
  const MetricParams& validated() const {
    auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
    switch (mode) {
      case MetricMode::Riemannian:
        if (!(positive(g11) && positive(g33) && positive(g44) && positive(g66)))
          throw std::invalid_argument("Riemannian metric needs finite positive g11, g33, g44, g66");
        break;
      case MetricMode::SubRiemannian:
        if (!(std::isinf(g11) && g11 > 0 && positive(g33) && positive(g44) && positive(g66)))
          throw std::invalid_argument("sub-Riemannian metric needs g11 = inf and positive g33, g44, g66");
        break;
      case MetricMode::GaugeInvariant:
        if (!(positive(g11) && positive(g33) && positive(g44) && g66 == 0.0))
          throw std::invalid_argument("gauge-invariant metric needs g66 = 0 and positive g11, g33, g44");
        break;
    }
    return *this;
  }

  /// diag(g11, g11, g33, g44, g44, g66); entries 0 and 1 are +inf in SR mode.
  Vector6 diagonal() const {
    Vector6 d;
    d << g11, g11, g33, g44, g44, g66;
    return d;
  }

  /// Coefficients g^ii mapping momentum to velocity. Zero on directions the mode
  /// forbids or leaves free: 1, 2, 6 in SR mode and 6 in GI mode.
  Vector6 inverse_diagonal() const {
    Vector6 d;
    d << 1.0 / g11, 1.0 / g11, 1.0 / g33, 1.0 / g44, 1.0 / g44, 1.0 / g66;
    if (mode == MetricMode::SubRiemannian) d[0] = d[1] = d[5] = 0.0;
    if (mode == MetricMode::GaugeInvariant) d[5] = 0.0;
    return d;
  }

  /// Which momentum coordinates drive the flow.
  std::array<bool, 6> active() const {
    const Vector6 inv = inverse_diagonal();
    std::array<bool, 6> a{};
    for (int i = 0; i < 6; ++i) a[i] = inv[i] != 0.0;
    return a;
  }
};

/// sqrt of the metric quadratic form at the identity.
inline double algebra_norm(const AlgebraVector& c, const MetricParams& m) {
  if (m.mode == MetricMode::SubRiemannian) {
    if (std::abs(c[0]) > tol::kHorizontal || std::abs(c[1]) > tol::kHorizontal ||
        std::abs(c[5]) > tol::kHorizontal) {
      throw NotHorizontal("algebra_norm: vector leaves span{A3, A4, A5}");
    }
    return std::sqrt(m.g33 * c[2] * c[2] + m.g44 * (c[3] * c[3] + c[4] * c[4]));
  }
  return std::sqrt(m.g11 * (c[0] * c[0] + c[1] * c[1]) + m.g33 * c[2] * c[2] +
                   m.g44 * (c[3] * c[3] + c[4] * c[4]) + m.g66 * c[5] * c[5]);
}

/// Logarithmic norm rho(g) = |log g|_G.
inline double log_norm(const RigidMotion& g, const MetricParams& m) {
  return algebra_norm(log_se3(g), m);
}

// ---------------------------------------------------------------------------
// General inner products on the Lie algebra

class GeneralInnerProduct {
 public:
  explicit GeneralInnerProduct(const Matrix6& M) : M_(M) {
    if ((M - M.transpose()).cwiseAbs().maxCoeff() > tol::kSymmetric)
      throw std::invalid_argument("inner product matrix is not symmetric");
    Eigen::SelfAdjointEigenSolver<Matrix6> eig(M);
    if (eig.eigenvalues().minCoeff() < -tol::kSymmetric)
      throw std::invalid_argument("inner product matrix is not positive semidefinite");
  }

  /// Only finite metrics (R and GI modes) have a matrix.
  static GeneralInnerProduct from_metric(const MetricParams& m) {
    if (m.mode == MetricMode::SubRiemannian)
      throw Unsupported("sub-Riemannian metric has no finite inner product matrix");
    return GeneralInnerProduct(Matrix6(m.diagonal().asDiagonal()));
  }

  const Matrix6& matrix() const { return M_; }

 private:
  Matrix6 M_;
};

struct LegalityReport {
  bool legal = false;
  double max_violation = 0.0;
};

/// Ad(h_alpha)^T M Ad(h_alpha) = M for h_alpha = (0, Rz(alpha)), sampled on a
/// uniform grid of `samples` angles plus 16 seeded random ones.
inline LegalityReport legality_check(const GeneralInnerProduct& ip, int samples = 64) {
  if (samples < 8) throw std::invalid_argument("legality_check needs at least 8 samples");
  const Matrix6& M = ip.matrix();
  LegalityReport report;
  auto probe = [&](double alpha) {
    const Matrix6 Ad = adjoint_matrix(stabilizer_element(alpha));
    report.max_violation =
        std::max(report.max_violation, (Ad.transpose() * M * Ad - M).cwiseAbs().maxCoeff());
  };
  for (int s = 0; s < samples; ++s) probe(kTwoPi * s / samples);
  std::mt19937_64 rng(0x1e9a1);
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  for (int s = 0; s < 16; ++s) probe(angle(rng));
  report.legal = report.max_violation <= tol::kLegality;
  return report;
}

struct ReductiveReport {
  bool reductive = false;
  double max_violation = 0.0;
  /// Columns span the complement m of h = span{A6}.
  Eigen::Matrix<double, 6, 5> complement;
};

/// Builds m = h^perp (M-orthogonal complement of A6) and checks that Ad(H) and
/// ad(A6) map it into itself. Throws NotLegal for non-invariant M.
inline ReductiveReport reductive_check(const GeneralInnerProduct& ip, int samples = 64) {
  const LegalityReport legality = legality_check(ip, samples);
  if (!legality.legal) {
    throw NotLegal("reductive_check: inner product is not Ad(H)-invariant (violation " +
                   std::to_string(legality.max_violation) + ")");
  }
  const Matrix6& M = ip.matrix();
  const Vector6 a = M.col(kFiber);
  // With M66 = 0 the metric does not see the fiber and A1..A5 is the complement.
  const bool degenerate = M(kFiber, kFiber) <= tol::kSymmetric;

  ReductiveReport report;
  for (int k = 0; k < 5; ++k) {
    Vector6 basis = Vector6::Unit(k);
    if (!degenerate) basis[kFiber] = -a[k] / a[kFiber];
    report.complement.col(k) = basis;
  }
  // h-component of v in the decomposition g = h + m.
  auto fiber_part = [&](const Vector6& v) {
    return degenerate ? v[kFiber] : a.dot(v) / a[kFiber];
  };
  const AlgebraVector fiber = AlgebraVector::Unit(kFiber);
  for (int k = 0; k < 5; ++k) {
    const Vector6 mk = report.complement.col(k);
    report.max_violation = std::max(report.max_violation, std::abs(fiber_part(ad(fiber, mk))));
    for (int s = 0; s < samples; ++s) {
      const AlgebraVector moved = adjoint_action(stabilizer_element(kTwoPi * s / samples), mk);
      report.max_violation = std::max(report.max_violation, std::abs(fiber_part(moved)));
    }
  }
  report.reductive = report.max_violation <= tol::kLegality;
  return report;
}

// ---------------------------------------------------------------------------
// Vertical, horizontal and sub-Riemannian projections in the left-invariant frame

struct SubbundleProjections {
  Matrix6 vertical;      // onto span{A6}
  Matrix6 horizontal;    // I - vertical
  Matrix6 distribution;  // onto span{A3, A4, A5}
};

inline SubbundleProjections projections(const MetricParams& m) {
  m.validated();
  SubbundleProjections p;
  p.vertical = Matrix6::Zero();
  p.vertical(kFiber, kFiber) = 1.0;
  p.horizontal = Matrix6::Identity() - p.vertical;
  p.distribution = Matrix6::Zero();
  p.distribution(2, 2) = p.distribution(3, 3) = p.distribution(4, 4) = 1.0;
  return p;
}

}  // namespace se3fiber

#endif  // SE3FIBER_METRIC_HPP
