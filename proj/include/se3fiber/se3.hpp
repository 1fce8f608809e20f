// se3fiber - geodesics and fiber sections on SE(3)/SO(2)
// SPDX-License-Identifier: Apache-2.0
//
// Group and Lie-algebra arithmetic for SE(3).
//
// Lie algebra coordinates c = (c1..c6) refer to the basis
//   A1, A2, A3 : unit translations along e_x, e_y, e_z
//   A4, A5, A6 : infinitesimal rotations about e_x, e_y, e_z
// so that in the 4x4 homogeneous representation
//
//   hat(c) = [ [w]x  v ]      v = (c1, c2, c3),  w = (c4, c5, c6)
//            [   0   0 ]
//
// Code indices are 0-based: index 5 is the fiber generator A6.

#ifndef SE3FIBER_SE3_HPP
#define SE3FIBER_SE3_HPP

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <Eigen/SVD>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "se3fiber/config.hpp"
#include "se3fiber/errors.hpp"

namespace se3fiber {

using Vector3 = Eigen::Vector3d;
using Vector6 = Eigen::Matrix<double, 6, 1>;
using Matrix3 = Eigen::Matrix3d;
using Matrix4 = Eigen::Matrix4d;
using Matrix6 = Eigen::Matrix<double, 6, 6>;

/// Coordinates of a Lie algebra element in the basis {A_i}.
using AlgebraVector = Vector6;
/// Momentum coordinates with respect to the dual frame {omega^i}.
using Covector = Vector6;

inline constexpr int kFiber = 5;
inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

inline Matrix3 skew(const Vector3& v) {
  Matrix3 s;
  // clang-format off
  s <<     0, -v.z(),  v.y(),
       v.z(),      0, -v.x(),
      -v.y(),  v.x(),      0;
  // clang-format on
  return s;
}

inline Matrix3 rot_x(double a) {
  return Eigen::AngleAxisd(a, Vector3::UnitX()).toRotationMatrix();
}
inline Matrix3 rot_y(double a) {
  return Eigen::AngleAxisd(a, Vector3::UnitY()).toRotationMatrix();
}
inline Matrix3 rot_z(double a) {
  return Eigen::AngleAxisd(a, Vector3::UnitZ()).toRotationMatrix();
}

/// RᵀR = I and det R = +1 within `tol`.
inline bool is_rotation(const Matrix3& R, double tol = tol::kRotation) {
  return (R.transpose() * R - Matrix3::Identity()).cwiseAbs().maxCoeff() <= tol &&
         std::abs(R.determinant() - 1.0) <= tol;
}

/// Closest rotation in the Frobenius norm (polar factor).
inline Matrix3 project_to_rotation(const Matrix3& M) {
  Eigen::JacobiSVD<Matrix3> svd(M, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Matrix3 U = svd.matrixU();
  const Matrix3& V = svd.matrixV();
  if ((U * V.transpose()).determinant() < 0) U.col(2) *= -1.0;
  return U * V.transpose();
}

/// Wraps an angle into [0, 2pi).
inline double wrap_two_pi(double a) {
  double r = std::fmod(a, kTwoPi);
  if (r < 0) r += kTwoPi;
  return r >= kTwoPi ? 0.0 : r;
}

/// Wraps an angle into [-pi, pi).
inline double wrap_pi(double a) {
  return wrap_two_pi(a + kPi) - kPi;
}

// ---------------------------------------------------------------------------
// Group

/// Rigid motion g = (x, R) acting as p -> R p + x.
struct RigidMotion {
  Vector3 x = Vector3::Zero();
  Matrix3 R = Matrix3::Identity();

  static RigidMotion identity() { return {}; }
  static RigidMotion pure_translation(const Vector3& t) { return {t, Matrix3::Identity()}; }
  static RigidMotion pure_rotation(const Matrix3& rot) { return {Vector3::Zero(), rot}; }

  Matrix4 matrix() const {
    Matrix4 m = Matrix4::Identity();
    m.topLeftCorner<3, 3>() = R;
    m.topRightCorner<3, 1>() = x;
    return m;
  }

  static RigidMotion from_matrix(const Matrix4& m) {
    return {m.topRightCorner<3, 1>(), m.topLeftCorner<3, 3>()};
  }
};

/// (x1 + R1 x2, R1 R2). Re-projects the rotation onto SO(3) once drift exceeds 1e-10.
inline RigidMotion compose(const RigidMotion& a, const RigidMotion& b) {
  RigidMotion out{a.x + a.R * b.x, a.R * b.R};
  if ((out.R.transpose() * out.R - Matrix3::Identity()).cwiseAbs().maxCoeff() >
      tol::kReorthonormalize) {
    out.R = project_to_rotation(out.R);
  }
  return out;
}

inline RigidMotion operator*(const RigidMotion& a, const RigidMotion& b) { return compose(a, b); }

inline RigidMotion inverse(const RigidMotion& g) {
  return {-(g.R.transpose() * g.x), g.R.transpose()};
}

/// Max-abs componentwise difference of translations and rotation matrices.
inline double motion_distance_inf(const RigidMotion& a, const RigidMotion& b) {
  return std::max((a.x - b.x).cwiseAbs().maxCoeff(), (a.R - b.R).cwiseAbs().maxCoeff());
}

// ---------------------------------------------------------------------------
// Euler angles R = Rz(gamma) Ry(beta) Rz(alpha)

struct EulerZYZ {
  double gamma = 0.0;  // [0, 2pi)
  double beta = 0.0;   // [0, pi]
  double alpha = 0.0;  // [0, 2pi)
  /// beta in {0, pi}: only alpha + gamma (resp. alpha - gamma) is determined and gamma = 0.
  bool degenerate = false;
};

inline Matrix3 rotation_from_euler(double gamma, double beta, double alpha) {
  return rot_z(gamma) * rot_y(beta) * rot_z(alpha);
}

inline Matrix3 rotation_from_euler(const EulerZYZ& a) {
  return rotation_from_euler(a.gamma, a.beta, a.alpha);
}

inline EulerZYZ euler_zyz(const Matrix3& R) {
  EulerZYZ e;
  if (std::hypot(R(0, 2), R(1, 2)) > tol::kEulerDegenerate &&
      std::hypot(R(2, 0), R(2, 1)) > tol::kEulerDegenerate) {
    e.beta = std::atan2(std::hypot(R(0, 2), R(1, 2)), R(2, 2));
    e.gamma = wrap_two_pi(std::atan2(R(1, 2), R(0, 2)));
    e.alpha = wrap_two_pi(std::atan2(R(2, 1), -R(2, 0)));
    return e;
  }
  e.degenerate = true;
  e.gamma = 0.0;
  if (R(2, 2) > 0) {
    // R = Rz(alpha + gamma)
    e.beta = 0.0;
    e.alpha = wrap_two_pi(std::atan2(R(1, 0), R(0, 0)));
  } else {
    // R = Rz(gamma - alpha) Ry(pi)
    e.beta = kPi;
    e.alpha = wrap_two_pi(std::atan2(R(1, 0), -R(0, 0)));
  }
  return e;
}

// ---------------------------------------------------------------------------
// SO(3) exponential and logarithm

namespace detail {

// sin(t)/t
inline double sinc(double t) {
  if (std::abs(t) < tol::kRodriguesSeries) return 1.0 - t * t / 6.0 + t * t * t * t / 120.0;
  return std::sin(t) / t;
}

// (1 - cos t)/t^2, written without cancellation
inline double cosc(double t) {
  if (std::abs(t) < tol::kRodriguesSeries) return 0.5 - t * t / 24.0 + t * t * t * t / 720.0;
  const double s = std::sin(0.5 * t) / t;
  return 2.0 * s * s;
}

// (t - sin t)/t^3
inline double sinc3(double t) {
  const double t2 = t * t;
  if (std::abs(t) < tol::kSeriesCoefficient) {
    return 1.0 / 6.0 +
           t2 * (-1.0 / 120.0 +
                 t2 * (1.0 / 5040.0 + t2 * (-1.0 / 362880.0 + t2 * (1.0 / 39916800.0 - t2 / 6227020800.0))));
  }
  return (t - std::sin(t)) / (t2 * t);
}

inline Vector3 vee_skew_part(const Matrix3& R) {
  return {R(2, 1) - R(1, 2), R(0, 2) - R(2, 0), R(1, 0) - R(0, 1)};
}

}  // namespace detail

/// sin(q)/q with value 1 at q = 0.
inline double sinc(double q) { return detail::sinc(q); }

inline Matrix3 exp_so3(const Vector3& w) {
  const double t = w.norm();
  const Matrix3 W = skew(w);
  return Matrix3::Identity() + detail::sinc(t) * W + detail::cosc(t) * W * W;
}

/// Rotation vector of R with angle in [0, pi). Throws AngleAtCutLocus at angle pi.
inline Vector3 log_so3(const Matrix3& R) {
  const Vector3 skew_part = detail::vee_skew_part(R);
  const double s = 0.5 * skew_part.norm();
  const double c = 0.5 * (R.trace() - 1.0);
  const double t = std::atan2(s, c);
  if (kPi - t <= tol::kCutLocus) {
    throw AngleAtCutLocus("log_so3: rotation angle at pi");
  }
  if (t < tol::kRodriguesSeries) {
    const double t2 = t * t;
    return 0.5 * (1.0 + t2 / 6.0 + 7.0 * t2 * t2 / 360.0) * skew_part;
  }
  if (t < 2.5) {
    return (0.5 * t / std::sin(t)) * skew_part;
  }
  // Near pi the skew part is small; recover the axis from the symmetric part.
  const Matrix3 aat = (0.5 * (R + R.transpose()) - c * Matrix3::Identity()) / (1.0 - c);
  int k = 0;
  aat.diagonal().maxCoeff(&k);
  Vector3 axis = aat.col(k) / std::sqrt(aat(k, k));
  axis.normalize();
  if (axis.dot(skew_part) < 0) axis = -axis;
  return t * axis;
}

// ---------------------------------------------------------------------------
// SE(3) exponential and logarithm

/// Rotation angle q of an algebra element, the norm of (c4, c5, c6).
inline double rotation_angle(const AlgebraVector& c) { return c.tail<3>().norm(); }

/// f(q) = (1 - (q/2) cot(q/2)) / q^2, the W^2 coefficient of the inverse V matrix.
inline double f_coefficient(double q) {
  if (!(q >= 0.0) || q >= kTwoPi) {
    throw DomainError("f_coefficient: q must lie in [0, 2pi)");
  }
  if (q < tol::kSeriesCoefficient) {
    const double q2 = q * q;
    return 1.0 / 12.0 +
           q2 * (1.0 / 720.0 +
                 q2 * (1.0 / 30240.0 +
                       q2 * (1.0 / 1209600.0 + q2 * (1.0 / 47900160.0 +
                                                         q2 * (691.0 / 1307674368000.0 + q2 / 74724249600.0)))));
  }
  const double h = 0.5 * q;
  return (1.0 - h * std::cos(h) / std::sin(h)) / (q * q);
}

inline RigidMotion exp_se3(const AlgebraVector& c) {
  const Vector3 v = c.head<3>();
  const Vector3 w = c.tail<3>();
  const double t = w.norm();
  const Matrix3 W = skew(w);
  const Matrix3 W2 = W * W;
  const Matrix3 V = Matrix3::Identity() + detail::cosc(t) * W + detail::sinc3(t) * W2;
  return {V * v, Matrix3::Identity() + detail::sinc(t) * W + detail::cosc(t) * W2};
}

/// Principal logarithm; requires rotation angle < pi.
inline AlgebraVector log_se3(const RigidMotion& g) {
  const Vector3 w = log_so3(g.R);
  const double q = w.norm();
  const Vector3 wx = w.cross(g.x);
  AlgebraVector c;
  c.head<3>() = g.x - 0.5 * wx + f_coefficient(q) * w.cross(wx);
  c.tail<3>() = w;
  return c;
}

// ---------------------------------------------------------------------------
// Lie algebra structure

/// 4x4 homogeneous matrix of sum c_i A_i.
inline Matrix4 hat(const AlgebraVector& c) {
  Matrix4 m = Matrix4::Zero();
  m.topLeftCorner<3, 3>() = skew(c.tail<3>());
  m.topRightCorner<3, 1>() = c.head<3>();
  return m;
}

/// Inverse of hat on the image of the Lie algebra.
inline AlgebraVector vee(const Matrix4& m) {
  AlgebraVector c;
  c << m(0, 3), m(1, 3), m(2, 3), m(2, 1), m(0, 2), m(1, 0);
  return c;
}

inline Matrix4 generator(int i) { return hat(AlgebraVector::Unit(i)); }

/// c(k, i, j) with [A_i, A_j] = sum_k c(k, i, j) A_k, all indices 0-based.
class StructureConstants {
 public:
  struct Entry {
    int k, i, j;
    double value;
  };

  StructureConstants() {
    for (int i = 0; i < 6; ++i) {
      for (int j = 0; j < 6; ++j) {
        const Matrix4 bracket = generator(i) * generator(j) - generator(j) * generator(i);
        const AlgebraVector coords = vee(bracket);
        for (int k = 0; k < 6; ++k) {
          table_[k][i][j] = coords[k];
          if (coords[k] != 0.0) entries_.push_back({k, i, j, coords[k]});
        }
      }
    }
  }

  double operator()(int k, int i, int j) const { return table_[k][i][j]; }

  /// Nonzero entries only.
  const std::vector<Entry>& entries() const { return entries_; }

 private:
  std::array<std::array<std::array<double, 6>, 6>, 6> table_{};
  std::vector<Entry> entries_;
};

/// Cached table; initialization is thread-safe.
inline const StructureConstants& structure_constants() {
  static const StructureConstants table;
  return table;
}

/// ad(v) w = [v, w].
inline AlgebraVector ad(const AlgebraVector& v, const AlgebraVector& w) {
  AlgebraVector out = AlgebraVector::Zero();
  for (const auto& e : structure_constants().entries()) out[e.k] += e.value * v[e.i] * w[e.j];
  return out;
}

/// coad(v) mu, the dual of ad(v): <coad(v) mu, w> = <mu, [v, w]>.
inline Covector coad(const AlgebraVector& v, const Covector& mu) {
  Covector out = Covector::Zero();
  for (const auto& e : structure_constants().entries()) out[e.j] += e.value * v[e.i] * mu[e.k];
  return out;
}

/// Ad(h) v computed by conjugating the homogeneous matrix.
inline AlgebraVector adjoint_action(const RigidMotion& h, const AlgebraVector& v) {
  const Matrix4 H = h.matrix();
  return vee(H * hat(v) * inverse(h).matrix());
}

/// Ad(h) as a 6x6 matrix acting on algebra coordinates.
inline Matrix6 adjoint_matrix(const RigidMotion& h) {
  Matrix6 m = Matrix6::Zero();
  m.topLeftCorner<3, 3>() = h.R;
  m.topRightCorner<3, 3>() = skew(h.x) * h.R;
  m.bottomRightCorner<3, 3>() = h.R;
  return m;
}

/// Element exp(alpha A6) of the stabilizer H of (0, e_z).
inline RigidMotion stabilizer_element(double alpha) {
  return RigidMotion::pure_rotation(rot_z(alpha));
}

}  // namespace se3fiber

#endif  // SE3FIBER_SE3_HPP
