// se3fiber - geodesics and fiber sections on SE(3)/SO(2)
// SPDX-License-Identifier: Apache-2.0
//
// The quotient SE(3)/SO(2) of positions and orientations, and three sections
// picking one representative in each fiber [g] = gH, H = {(0, Rz(alpha))}:
//
//   sigma      closed form, Euler angles with alpha = -gamma (c6(log) = 0)
//   sigma_rho  minimizer of the logarithmic norm |log p|_G over the fiber
//   sigma_d    minimizer of the geodesic distance d_G(p, e) over the fiber

#ifndef SE3FIBER_SECTIONS_HPP
#define SE3FIBER_SECTIONS_HPP

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "se3fiber/shooting.hpp"

namespace se3fiber {

/// Point [g] = (x, n) of SE(3)/SO(2), n = R e_z.
struct CosetPoint {
  Vector3 x = Vector3::Zero();
  Vector3 n = Vector3::UnitZ();

  /// Normalizes n; throws std::invalid_argument for a zero orientation.
  static CosetPoint make(const Vector3& x, const Vector3& n) {
    const double len = n.norm();
    if (!(len > 0.0) || !std::isfinite(len)) throw std::invalid_argument("CosetPoint: zero orientation");
    return {x, n / len};
  }
};

inline CosetPoint project(const RigidMotion& g) { return {g.x, g.R.col(2)}; }

/// Max-abs difference of two coset points.
inline double coset_distance_inf(const CosetPoint& a, const CosetPoint& b) {
  return std::max((a.x - b.x).cwiseAbs().maxCoeff(), (a.n - b.n).cwiseAbs().maxCoeff());
}

/// det(x | n | e_z); zero exactly for co-planar configurations.
inline double coplanarity(const CosetPoint& p) {
  Matrix3 m;
  m.col(0) = p.x;
  m.col(1) = p.n;
  m.col(2) = Vector3::UnitZ();
  return m.determinant();
}

/// True when n = +-e_z, where the Euler angle gamma is undefined.
inline bool fiber_degenerate(const CosetPoint& p) {
  return std::hypot(p.n.x(), p.n.y()) <= tol::kFiberDegenerate;
}

namespace detail {

// Rz(gamma) Ry(beta) Rz(-gamma): the rotation by beta about e_z x n, carrying
// e_z onto n. At n = -e_z the convention gamma = 0 gives Ry(pi).
inline Matrix3 sigma_rotation(const Vector3& n) {
  const Vector3 k = Vector3::UnitZ().cross(n);
  const double c = n.z();
  if (1.0 + c <= tol::kFiberDegenerate * tol::kFiberDegenerate / 2.0 ||
      (std::hypot(n.x(), n.y()) <= tol::kFiberDegenerate && c < 0)) {
    return rot_y(kPi);
  }
  const Matrix3 K = skew(k);
  return Matrix3::Identity() + K + K * K / (1.0 + c);
}

inline bool antipodal(const CosetPoint& p) { return fiber_degenerate(p) && p.n.z() < 0; }

}  // namespace detail

/// sigma([g]) = (x, Rz(gamma) Ry(beta) Rz(-gamma)) with (gamma, beta) the
/// spherical angles of n. Throws DegenerateFiber at n = -e_z.
inline RigidMotion section_sigma(const CosetPoint& p) {
  if (detail::antipodal(p)) throw DegenerateFiber("section_sigma: orientation n = -e_z");
  return {p.x, detail::sigma_rotation(p.n)};
}

/// sigma(p) * (0, Rz(alpha)). Uses gamma = 0 on degenerate fibers (see fiber_degenerate).
inline RigidMotion fiber_element(const CosetPoint& p, double alpha) {
  return {p.x, detail::sigma_rotation(p.n) * rot_z(alpha)};
}

namespace detail {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Uniform grid on [-pi, pi) with `n` points.
inline std::vector<double> angle_grid(int n) {
  std::vector<double> a(n);
  for (int k = 0; k < n; ++k) a[k] = -kPi + kTwoPi * k / n;
  return a;
}

// Profile value or +inf on the cut locus.
inline double log_norm_or_inf(const RigidMotion& g, const MetricParams& m) {
  try {
    return log_norm(g, m);
  } catch (const AngleAtCutLocus&) {
    return kInf;
  }
}

struct FiberMinimum {
  double alpha;
  double value;
  std::vector<double> tied_alphas;
};

// Grid scan then golden-section refinement inside every grid-local minimum;
// minima within `tie_tol` of the best are reported as ties.
inline FiberMinimum minimize_on_circle(const std::function<double(double)>& f, int grid,
                                       double x_tol, double tie_tol) {
  const std::vector<double> alphas = angle_grid(grid);
  std::vector<double> vals(grid);
  for (int k = 0; k < grid; ++k) vals[k] = f(alphas[k]);
  const double h = kTwoPi / grid;

  std::vector<std::pair<double, double>> refined;
  for (int k = 0; k < grid; ++k) {
    const double v = vals[k];
    if (!std::isfinite(v)) continue;
    if (v > vals[(k + grid - 1) % grid] || v > vals[(k + 1) % grid]) continue;
    const optim::ScalarMinimum local = optim::golden_section(f, alphas[k] - h, alphas[k] + h, x_tol);
    if (local.f <= v) {
      refined.emplace_back(wrap_pi(local.x), local.f);
    } else {
      refined.emplace_back(alphas[k], v);
    }
  }
  if (refined.empty()) throw AllAtCutLocus("fiber minimization: no admissible fiber element");
  std::sort(refined.begin(), refined.end(),
            [](const auto& a, const auto& b) { return a.second < b.second; });
  FiberMinimum out{refined.front().first, refined.front().second, {}};
  for (std::size_t k = 1; k < refined.size(); ++k) {
    const double d = std::abs(wrap_pi(refined[k].first - out.alpha));
    if (refined[k].second - out.value <= tie_tol && d > 10.0 * x_tol)
      out.tied_alphas.push_back(refined[k].first);
  }
  return out;
}

}  // namespace detail

struct SigmaRhoResult {
  RigidMotion element;
  double alpha_star = 0.0;
  double rho_star = 0.0;
  std::vector<double> tied_alphas;
};

/// Minimizes alpha -> |log fiber_element(p, alpha)|_G with a 256-point scan and
/// golden-section refinement to 1e-10. Fiber elements on the cut locus are skipped.
inline SigmaRhoResult section_sigma_rho(const CosetPoint& p, const MetricParams& m) {
  m.validated();
  if (detail::antipodal(p)) throw DegenerateFiber("section_sigma_rho: orientation n = -e_z");
  auto profile = [&](double a) { return detail::log_norm_or_inf(fiber_element(p, a), m); };
  const detail::FiberMinimum best = detail::minimize_on_circle(profile, 256, 1e-10, 1e-9);
  return {fiber_element(p, best.alpha), best.alpha, best.value, best.tied_alphas};
}

/// Error_G([g]) = rho(sigma([g])) - rho(sigma_rho([g])).
inline double error_G(const CosetPoint& p, const MetricParams& m) {
  return log_norm(section_sigma(p), m) - section_sigma_rho(p, m).rho_star;
}

struct SigmaDResult {
  RigidMotion element;
  double alpha_star = 0.0;
  double dist_star = 0.0;
  ShootingResult shot;
  std::vector<double> tied_alphas;
};

namespace detail {

// Distance profile along a fiber with warm-started shooting.
class FiberDistance {
 public:
  FiberDistance(const CosetPoint& p, const MetricParams& m, const ShootingConfig& cfg)
      : p_(p), m_(m), cfg_(cfg) {
    cfg_.record_trajectory = false;
  }

  // Multi-start solve at alpha; nullopt when shooting fails.
  std::optional<ShootingResult> shoot(double alpha, const std::vector<Covector>& warm, int restarts) const {
    ShootingConfig c = cfg_;
    c.restarts = restarts;
    try {
      return shoot_distance(fiber_element(p_, alpha), m_, c, warm);
    } catch (const AngleAtCutLocus&) {
    } catch (const NoConvergence&) {
    } catch (const DomainError&) {
    }
    return std::nullopt;
  }

  // Single local solve at alpha continued from a nearby solution.
  std::optional<ShootingResult> continue_from(double alpha, const Covector& start) const {
    try {
      return shoot_from(fiber_element(p_, alpha), m_, cfg_, start);
    } catch (const AngleAtCutLocus&) {
    } catch (const DomainError&) {
    }
    return std::nullopt;
  }

 private:
  CosetPoint p_;
  MetricParams m_;
  ShootingConfig cfg_;
};

struct FiberSample {
  double alpha;
  ShootingResult shot;
};

// Samples the distance on `alphas`, sweeping outward from the middle sample so
// every solve is warm-started by its neighbor.
inline std::vector<std::optional<ShootingResult>> sample_fiber_distance(
    const FiberDistance& fd, const std::vector<double>& alphas, int restarts) {
  const int n = static_cast<int>(alphas.size());
  std::vector<std::optional<ShootingResult>> shots(n);
  const int mid = n / 2;
  shots[mid] = fd.shoot(alphas[mid], {}, restarts);
  for (int dir : {+1, -1}) {
    for (int k = mid + dir; k >= 0 && k < n; k += dir) {
      std::vector<Covector> warm;
      if (shots[k - dir]) warm.push_back(shots[k - dir]->lam0);
      shots[k] = fd.shoot(alphas[k], warm, restarts);
    }
  }
  return shots;
}

inline double relative_lam6(const ShootingResult& s) {
  return std::abs(s.lam0[kFiber]) / std::max(1.0, s.lam0.norm());
}

// Refines the grid minimum at index k. Since d(E)/d(alpha) = lambda_6(0) for
// E = d^2/2, the minimizer is a root of lambda_6, bracketed by the neighbors
// when they straddle a sign change; otherwise golden-section search on d is used.
inline FiberSample refine_fiber_minimum(const FiberDistance& fd, const std::vector<double>& alphas,
                                        const std::vector<std::optional<ShootingResult>>& shots,
                                        int k) {
  const int n = static_cast<int>(alphas.size());
  const double h = kTwoPi / n;
  FiberSample best{alphas[k], *shots[k]};
  auto consider = [&](double a, const ShootingResult& s) {
    if (s.distance < best.shot.distance - 1e-12 ||
        (s.distance <= best.shot.distance + 1e-10 && relative_lam6(s) < relative_lam6(best.shot)))
      best = {a, s};
  };

  const double l6 = shots[k]->lam0[kFiber];
  const int side = l6 > 0 ? -1 : +1;
  const auto& nb = shots[(k + side + n) % n];
  if (nb && (nb->lam0[kFiber] > 0) != (l6 > 0) && l6 != 0.0) {
    // Illinois regula falsi on lambda_6 over [a0, a1].
    double a0 = alphas[k], a1 = alphas[k] + side * h;
    double f0 = l6, f1 = nb->lam0[kFiber];
    Covector warm0 = shots[k]->lam0, warm1 = nb->lam0;
    int last = 0;
    for (int it = 0; it < 60; ++it) {
      if (relative_lam6(best.shot) <= 1e-10 || std::abs(a1 - a0) <= 1e-12) break;
      const double a = (a0 * f1 - a1 * f0) / (f1 - f0);
      const Covector& warm = std::abs(a - a0) < std::abs(a - a1) ? warm0 : warm1;
      const auto s = fd.continue_from(a, warm);
      if (!s) break;
      consider(a, *s);
      const double f = s->lam0[kFiber];
      if ((f > 0) == (f1 > 0)) {
        a1 = a, f1 = f, warm1 = s->lam0;
        if (last == +1) f0 *= 0.5;
        last = +1;
      } else {
        a0 = a, f0 = f, warm0 = s->lam0;
        if (last == -1) f1 *= 0.5;
        last = -1;
      }
    }
    best.alpha = wrap_pi(best.alpha);
    return best;
  }

  Covector warm = shots[k]->lam0;
  auto profile = [&](double a) {
    const auto s = fd.continue_from(a, warm);
    if (!s) return kInf;
    warm = s->lam0;
    consider(a, *s);
    return s->distance;
  };
  optim::golden_section(profile, alphas[k] - h, alphas[k] + h, 1e-6);
  best.alpha = wrap_pi(best.alpha);
  return best;
}

}  // namespace detail

/// Minimizes alpha -> d_G(fiber_element(p, alpha), e): a 32-point scan with
/// warm-started shooting (at most 4 random restarts per sample), then local
/// refinement of every grid minimum with continued single-start solves.
inline SigmaDResult section_sigma_d(const CosetPoint& p, const MetricParams& m,
                                    const ShootingConfig& cfg) {
  m.validated();
  if (detail::antipodal(p)) throw DegenerateFiber("section_sigma_d: orientation n = -e_z");
  SigmaDResult out;
  if (p.x.norm() == 0.0 && fiber_degenerate(p)) {
    out.element = RigidMotion::identity();
    out.shot.converged = true;
    if (cfg.record_trajectory) out.shot.trajectory = integrate({}, m, 1.0, cfg.steps);
    return out;
  }

  const detail::FiberDistance fd(p, m, cfg);
  const std::vector<double> alphas = detail::angle_grid(32);
  const auto shots = detail::sample_fiber_distance(fd, alphas, std::min(cfg.restarts, 4));
  const int n = static_cast<int>(alphas.size());

  auto dist_at = [&](int k) { return shots[k] ? shots[k]->distance : detail::kInf; };
  std::vector<detail::FiberSample> refined;
  for (int k = 0; k < n; ++k) {
    if (!shots[k]) continue;
    if (dist_at(k) <= dist_at((k + n - 1) % n) && dist_at(k) <= dist_at((k + 1) % n))
      refined.push_back(detail::refine_fiber_minimum(fd, alphas, shots, k));
  }
  if (refined.empty()) throw NoConvergence("section_sigma_d: shooting failed on every sample");
  std::sort(refined.begin(), refined.end(),
            [](const auto& a, const auto& b) { return a.shot.distance < b.shot.distance; });

  const detail::FiberSample& best = refined.front();
  out.alpha_star = best.alpha;
  out.dist_star = best.shot.distance;
  out.element = fiber_element(p, best.alpha);
  out.shot = best.shot;
  if (cfg.record_trajectory) out.shot.trajectory = integrate({{}, best.shot.lam0}, m, 1.0, cfg.steps);
  for (std::size_t k = 1; k < refined.size(); ++k) {
    if (refined[k].shot.distance - best.shot.distance <= 1e-6 &&
        std::abs(wrap_pi(refined[k].alpha - best.alpha)) > 1e-5)
      out.tied_alphas.push_back(refined[k].alpha);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Aggregate result and diagnostics

struct SectionResult {
  RigidMotion sigma;
  RigidMotion sigma_rho;
  std::optional<RigidMotion> sigma_d;
  double rho_at_sigma = 0.0;
  double rho_at_sigma_rho = 0.0;
  std::optional<double> dist_at_sigma_d;
  double error_G = 0.0;
  double alpha_rho = 0.0;
  std::optional<double> alpha_d;
  std::optional<double> lam6_relative;  // |lambda_6(0)| / |lambda(0)| of the sigma_d geodesic

  /// rho(sigma) >= rho(sigma_rho) >= d(sigma_d, e) - 1e-6, with sigma_d optional.
  bool inequality_chain_holds() const {
    bool ok = rho_at_sigma >= rho_at_sigma_rho - 1e-9;
    if (dist_at_sigma_d) ok = ok && rho_at_sigma_rho >= *dist_at_sigma_d - 1e-6;
    return ok;
  }
};

/// All three sections of p. sigma_d is skipped (left empty) when `with_distance`
/// is false or when shooting fails; NoConvergence is not raised.
inline SectionResult compute_sections(const CosetPoint& p, const MetricParams& m,
                                      const ShootingConfig& cfg, bool with_distance = true) {
  SectionResult r;
  r.sigma = section_sigma(p);
  r.rho_at_sigma = log_norm(r.sigma, m);
  const SigmaRhoResult sr = section_sigma_rho(p, m);
  r.sigma_rho = sr.element;
  r.rho_at_sigma_rho = sr.rho_star;
  r.alpha_rho = sr.alpha_star;
  r.error_G = r.rho_at_sigma - r.rho_at_sigma_rho;
  if (with_distance) {
    try {
      ShootingConfig c = cfg;
      c.record_trajectory = false;
      const SigmaDResult sd = section_sigma_d(p, m, c);
      r.sigma_d = sd.element;
      r.dist_at_sigma_d = sd.dist_star;
      r.alpha_d = sd.alpha_star;
      const double norm = sd.shot.lam0.norm();
      r.lam6_relative = norm > 0 ? std::abs(sd.shot.lam0[kFiber]) / norm : 0.0;
    } catch (const NoConvergence&) {
    }
  }
  return r;
}

struct FiberSweep {
  CosetPoint base;
  std::vector<double> alphas;
  std::vector<std::optional<double>> rho;
  std::vector<std::optional<double>> dist;  // empty entries when not computed
  double argmin_rho = 0.0;
  std::optional<double> argmin_dist;
  /// Central-difference E''(0) with step 2pi / nsamples.
  std::optional<double> rho_second_derivative;
};

/// Tabulates the log-norm (and optionally the distance) profile of the fiber
/// over a uniform grid on [-pi, pi).
inline FiberSweep fiber_sweep(const CosetPoint& p, const MetricParams& m, int nsamples,
                              bool with_distance, const ShootingConfig& cfg) {
  if (nsamples < 16) throw std::invalid_argument("fiber_sweep: nsamples must be >= 16");
  m.validated();
  FiberSweep s;
  s.base = p;
  s.alphas = detail::angle_grid(nsamples);
  s.rho.resize(nsamples);
  s.dist.resize(nsamples);
  for (int k = 0; k < nsamples; ++k) {
    const double v = detail::log_norm_or_inf(fiber_element(p, s.alphas[k]), m);
    if (std::isfinite(v)) s.rho[k] = v;
  }
  s.argmin_rho = section_sigma_rho(p, m).alpha_star;

  const double h = kTwoPi / nsamples;
  const double e0 = detail::log_norm_or_inf(fiber_element(p, 0.0), m);
  const double ep = detail::log_norm_or_inf(fiber_element(p, h), m);
  const double em = detail::log_norm_or_inf(fiber_element(p, -h), m);
  if (std::isfinite(e0) && std::isfinite(ep) && std::isfinite(em))
    s.rho_second_derivative = (ep - 2.0 * e0 + em) / (h * h);

  if (with_distance) {
    const detail::FiberDistance fd(p, m, cfg);
    const auto shots = detail::sample_fiber_distance(fd, s.alphas, std::min(cfg.restarts, 4));
    int best = -1;
    for (int k = 0; k < nsamples; ++k) {
      if (!shots[k]) continue;
      s.dist[k] = shots[k]->distance;
      if (best < 0 || *s.dist[k] < *s.dist[best]) best = k;
    }
    if (best >= 0) s.argmin_dist = detail::refine_fiber_minimum(fd, s.alphas, shots, best).alpha;
  }
  return s;
}

struct AngularVelocityCheck {
  bool holds = false;
  double alpha_star = 0.0;
  double value_at_sigma = 0.0;
  double min_value = 0.0;
};

/// Checks that sigma minimizes the rotational part |(c4, c5, c6)|_G of the
/// logarithm over the fiber.
inline AngularVelocityCheck angular_velocity_min_check(const CosetPoint& p, const MetricParams& m) {
  m.validated();
  if (detail::antipodal(p)) throw DegenerateFiber("angular_velocity_min_check: orientation n = -e_z");
  auto rot_norm = [&](double a) {
    try {
      const Vector3 w = log_so3(fiber_element(p, a).R);
      return std::sqrt(m.g44 * (w[0] * w[0] + w[1] * w[1]) + m.g66 * w[2] * w[2]);
    } catch (const AngleAtCutLocus&) {
      return detail::kInf;
    }
  };
  const detail::FiberMinimum best = detail::minimize_on_circle(rot_norm, 256, 1e-10, 1e-9);
  AngularVelocityCheck out;
  out.alpha_star = best.alpha;
  out.min_value = best.value;
  out.value_at_sigma = rot_norm(0.0);
  out.holds = out.value_at_sigma <= out.min_value + 1e-9;
  return out;
}

}  // namespace se3fiber

#endif  // SE3FIBER_SECTIONS_HPP
