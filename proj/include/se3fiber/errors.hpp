// se3fiber - geodesics and fiber sections on SE(3)/SO(2)
// SPDX-License-Identifier: Apache-2.0

#ifndef SE3FIBER_ERRORS_HPP
#define SE3FIBER_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace se3fiber {

/// Base class of every error raised by the library.
class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Logarithm requested at a rotation angle of pi.
class AngleAtCutLocus : public GeometryError {
 public:
  explicit AngleAtCutLocus(const std::string& what) : GeometryError(what) {}
};

/// Argument outside the domain of a scalar function.
class DomainError : public GeometryError {
 public:
  explicit DomainError(const std::string& what) : GeometryError(what) {}
};

/// Sub-Riemannian norm evaluated on a vector that leaves span{A3,A4,A5}.
class NotHorizontal : public GeometryError {
 public:
  explicit NotHorizontal(const std::string& what) : GeometryError(what) {}
};

/// Inner product that is not Ad(H)-invariant.
class NotLegal : public GeometryError {
 public:
  explicit NotLegal(const std::string& what) : GeometryError(what) {}
};

/// Fiber over n = -e_z, where the closed-form section is undefined.
class DegenerateFiber : public GeometryError {
 public:
  explicit DegenerateFiber(const std::string& what) : GeometryError(what) {}
};

/// Every sampled fiber element sits on the cut locus.
class AllAtCutLocus : public GeometryError {
 public:
  explicit AllAtCutLocus(const std::string& what) : GeometryError(what) {}
};

/// Iterative solver failed to reach its tolerance.
class NoConvergence : public GeometryError {
 public:
  explicit NoConvergence(const std::string& what) : GeometryError(what) {}
};

/// Integrator drift exceeded the admissible Hamiltonian error.
class StepCountTooSmall : public GeometryError {
 public:
  explicit StepCountTooSmall(const std::string& what) : GeometryError(what) {}
};

/// Mode or argument combination the requested routine does not support.
class Unsupported : public GeometryError {
 public:
  explicit Unsupported(const std::string& what) : GeometryError(what) {}
};

}  // namespace se3fiber

#endif  // SE3FIBER_ERRORS_HPP
