// se3fiber - geodesics and fiber sections on SE(3)/SO(2)
// SPDX-License-Identifier: Apache-2.0

#ifndef SE3FIBER_CONFIG_HPP
#define SE3FIBER_CONFIG_HPP

namespace se3fiber::tol {

// Global numerical tolerances. All routines read these instead of literals.
inline constexpr double kRotation = 1e-12;       // orthonormality / det check
inline constexpr double kReorthonormalize = 1e-10;
inline constexpr double kCutLocus = 1e-9;        // |q - pi| below which log fails
inline constexpr double kEulerDegenerate = 1e-12;
inline constexpr double kHorizontal = 1e-12;     // SR membership in span{A3,A4,A5}
inline constexpr double kLegality = 1e-10;
inline constexpr double kSymmetric = 1e-12;
inline constexpr double kFiberDegenerate = 1e-10;
inline constexpr double kHamiltonianDrift = 1e-6;  // integrate() refuses beyond this

// Series switch-over points for the small-angle coefficients.
inline constexpr double kRodriguesSeries = 1e-6;
inline constexpr double kSeriesCoefficient = 0.5;  // f(q) and (t - sin t)/t^3

}  // namespace se3fiber::tol

#endif  // SE3FIBER_CONFIG_HPP
