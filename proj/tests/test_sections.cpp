#include <gtest/gtest.h>

#include "se3fiber/random.hpp"
#include "se3fiber/sections.hpp"

using namespace se3fiber;

namespace {

AlgebraVector coords(double a, double b, double c, double d, double e, double f) {
  AlgebraVector v;
  v << a, b, c, d, e, f;
  return v;
}

CosetPoint figure_top() { return project(exp_se3(coords(0, 0, 2, 7 * kPi / 16, 7 * kPi / 16, 0))); }
CosetPoint figure_bottom() { return project(exp_se3(coords(0, 0.25, 0.25, 0, 0.25 * kPi / 14, 0))); }

CosetPoint random_coset(Sampler& s, double beta_max = kPi - 0.1) {
  return {s.gaussian3(), s.orientation(0.0, beta_max)};
}

ShootingConfig quick() {
  ShootingConfig c;
  c.restarts = 4;
  c.record_trajectory = false;
  return c;
}

}  // namespace

TEST(Project, Examples) {
  const CosetPoint e = project(RigidMotion::identity());
  EXPECT_EQ(e.x, Vector3::Zero());
  EXPECT_EQ(e.n, Vector3::UnitZ());
  const double b = 0.8;
  const CosetPoint p = project(RigidMotion::pure_rotation(rot_y(b)));
  EXPECT_LE((p.n - Vector3(std::sin(b), 0, std::cos(b))).norm(), 1e-15);
}

TEST(Project, RightStabilizerInvariance) {
  Sampler s(51);
  for (int k = 0; k < 100; ++k) {
    const RigidMotion g = s.motion();
    const RigidMotion h = stabilizer_element(s.uniform(0, kTwoPi));
    EXPECT_LE(coset_distance_inf(project(g * h), project(g)), 1e-15);
  }
}

TEST(CosetPoint, MakeNormalizes) {
  const CosetPoint p = CosetPoint::make(Vector3(1, 2, 3), Vector3(0, 3, 4));
  EXPECT_NEAR(p.n.norm(), 1.0, 1e-15);
  EXPECT_THROW(CosetPoint::make(Vector3::Zero(), Vector3::Zero()), std::invalid_argument);
}

TEST(Coplanarity, Examples) {
  Sampler s(52);
  const Vector3 n = s.unit_vector();
  EXPECT_EQ(coplanarity({Vector3::Zero(), n}), 0.0);
  EXPECT_NEAR(coplanarity({Vector3(0, 0, 2.5), n}), 0.0, 1e-15);
  EXPECT_DOUBLE_EQ(coplanarity({Vector3::UnitX(), Vector3::UnitY()}), 1.0);
  // The first figure's configuration lies in a plane through e_z.
  EXPECT_LE(std::abs(coplanarity(figure_top())), 1e-12);
}

TEST(SectionSigma, IdentityFiberAndDegeneracy) {
  EXPECT_LE(motion_distance_inf(section_sigma({Vector3::Zero(), Vector3::UnitZ()}), RigidMotion::identity()), 0.0);
  EXPECT_THROW(section_sigma({Vector3::Zero(), -Vector3::UnitZ()}), DegenerateFiber);
  EXPECT_TRUE(fiber_degenerate({Vector3::Zero(), Vector3::UnitZ()}));
  EXPECT_TRUE(fiber_degenerate({Vector3::Zero(), -Vector3::UnitZ()}));
  EXPECT_FALSE(fiber_degenerate({Vector3::Zero(), Vector3(1e-6, 0, 1).normalized()}));
}

TEST(SectionSigma, ZeroFiberCoordinate) {
  Sampler s(53);
  for (int k = 0; k < 1000; ++k) {
    const CosetPoint p = random_coset(s);
    const RigidMotion g = section_sigma(p);
    EXPECT_LE(std::abs(log_se3(g)[kFiber]), 1e-10);
    EXPECT_EQ(g.x, p.x);
    EXPECT_LE(coset_distance_inf(project(g), p), 1e-12);
  }
}

TEST(SectionSigma, MatchesEulerConstruction) {
  Sampler s(54);
  for (int k = 0; k < 100; ++k) {
    const double gamma = s.uniform(0, kTwoPi), beta = s.uniform(0.01, kPi - 0.01);
    const Matrix3 R = rotation_from_euler(gamma, beta, -gamma);
    const RigidMotion g = section_sigma({Vector3::Zero(), R.col(2)});
    EXPECT_LE((g.R - R).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(SectionSigma, TranslationEquivariance) {
  Sampler s(55);
  for (int k = 0; k < 100; ++k) {
    const CosetPoint p = random_coset(s);
    const Vector3 d = s.gaussian3();
    EXPECT_LE(motion_distance_inf(section_sigma({p.x + d, p.n}), RigidMotion::pure_translation(d) * section_sigma(p)),
              1e-15);
  }
}

TEST(FiberElement, ParametrizesTheFiber) {
  Sampler s(56);
  for (int k = 0; k < 50; ++k) {
    const CosetPoint p = random_coset(s);
    EXPECT_EQ(motion_distance_inf(fiber_element(p, 0.0), section_sigma(p)), 0.0);
    for (int j = 0; j < 10; ++j) {
      const double a = s.uniform(-kPi, kPi);
      EXPECT_LE(coset_distance_inf(project(fiber_element(p, a)), p), 1e-12);
      EXPECT_LE(motion_distance_inf(fiber_element(p, a), section_sigma(p) * stabilizer_element(a)), 1e-15);
    }
  }
}

TEST(FiberElement, FiberCoordinateFollowsSine) {
  Sampler s(57);
  for (int k = 0; k < 50; ++k) {
    const CosetPoint p = random_coset(s, 2.5);
    for (double a : {1e-3, -1e-3, 0.05, -0.05}) {
      const double c6 = log_se3(fiber_element(p, a))[kFiber];
      EXPECT_EQ(std::signbit(c6), std::signbit(std::sin(a)));
    }
  }
}

TEST(SigmaRho, SphereWithIsotropicRotation) {
  Sampler s(58);
  for (int k = 0; k < 20; ++k) {
    const MetricParams m = MetricParams::riemannian(s.uniform(0.3, 3), s.uniform(0.3, 3), 1.7, 1.7);
    const CosetPoint p{Vector3::Zero(), s.orientation(0.05, kPi - 0.1)};
    const SigmaRhoResult r = section_sigma_rho(p, m);
    EXPECT_LE(std::abs(r.alpha_star), 1e-6);
    EXPECT_NEAR(r.rho_star, log_norm(section_sigma(p), m), 1e-9);
    EXPECT_NEAR(r.rho_star, std::sqrt(1.7) * std::acos(p.n.z()), 1e-9);
  }
}

TEST(SigmaRho, VerticalTranslationHasZeroError) {
  Sampler s(59);
  for (int k = 0; k < 30; ++k) {
    const double g11 = s.uniform(0.5, 3);
    const MetricParams m = MetricParams::riemannian(g11, s.uniform(0.1, g11), s.uniform(0.1, 3), s.uniform(0.1, 3));
    const CosetPoint p{Vector3(0, 0, s.uniform(-2, 2)), s.orientation(0.0, kPi - 0.1)};
    EXPECT_LE(error_G(p, m), 1e-6);
    EXPECT_GE(error_G(p, m), -1e-9);
  }
}

TEST(SigmaRho, ErrorIsNonNegative) {
  Sampler s(60);
  for (int k = 0; k < 50; ++k) EXPECT_GE(error_G(random_coset(s), s.riemannian_metric()), -1e-9);
}

TEST(SigmaRho, FigureBottomErrorVanishes) {
  const double e = error_G(figure_bottom(), MetricParams::riemannian(1, 1, 0.01, 0.05));
  EXPECT_LE(e, 1e-3);
  EXPECT_GE(e, -1e-9);
}

TEST(SigmaRho, FigureTopConfigurationIsCoplanarStationary) {
  // For this co-planar configuration alpha = 0 is a stationary point of the
  // profile; it is a minimum at this distance from the identity.
  const MetricParams m = MetricParams::gauge_invariant(1, 1, 1);
  const SigmaRhoResult r = section_sigma_rho(figure_top(), m);
  EXPECT_LE(std::abs(r.alpha_star), 1e-6);
  EXPECT_LE(error_G(figure_top(), m), 1e-9);
}

TEST(SigmaRho, CoplanarFamilyEventuallyDevelopsError) {
  const MetricParams m = MetricParams::gauge_invariant(1, 1, 1);
  auto err = [&](double t) {
    return error_G(project(exp_se3(coords(0, 0, t, 7 * kPi / 16, 7 * kPi / 16, 0))), m);
  };
  EXPECT_LE(err(1.0), 1e-9);
  EXPECT_LE(err(2.0), 1e-9);
  EXPECT_GT(err(3.0), 0.01);
  EXPECT_GT(err(4.0), err(3.0));
}

TEST(SigmaRho, AntipodalFiberIsRejected) {
  EXPECT_THROW(section_sigma_rho({Vector3::Zero(), -Vector3::UnitZ()}, MetricParams{}), DegenerateFiber);
}

TEST(Sweep, CoplanarProfileIsSymmetric) {
  Sampler s(61);
  for (int k = 0; k < 10; ++k) {
    const Vector3 n = s.orientation(0.05, kPi - 0.1);
    const CosetPoint p{s.uniform(-1.5, 1.5) * n + s.uniform(-1.5, 1.5) * Vector3::UnitZ(), n};
    ASSERT_LE(std::abs(coplanarity(p)), 1e-10);
    const MetricParams m = s.riemannian_metric();
    const FiberSweep sw = fiber_sweep(p, m, 256, false, {});
    for (int j = 1; j < 128; ++j) {
      const auto& a = sw.rho[128 + j];
      const auto& b = sw.rho[128 - j];
      ASSERT_EQ(a.has_value(), b.has_value());
      if (a) {
        EXPECT_LE(std::abs(*a - *b), 1e-9) << j;
      }
    }
  }
}

TEST(Sweep, GridAndArgmins) {
  const MetricParams m = MetricParams::riemannian(1, 1, 0.01, 0.05);
  const FiberSweep sw = fiber_sweep(figure_bottom(), m, 64, false, {});
  ASSERT_EQ(sw.alphas.size(), 64u);
  EXPECT_EQ(sw.alphas.front(), -kPi);
  EXPECT_LE(std::abs(sw.argmin_rho), kTwoPi / 64);
  ASSERT_TRUE(sw.rho_second_derivative.has_value());
  EXPECT_GT(*sw.rho_second_derivative, 0.0);
  for (const auto& r : sw.rho) {
    if (r) {
      EXPECT_GE(*r, 0.0);
    }
  }
  EXPECT_FALSE(sw.argmin_dist.has_value());
  EXPECT_THROW(fiber_sweep(figure_bottom(), m, 8, false, {}), std::invalid_argument);
}

TEST(Sweep, FigureTopProfileMinimumAtZero) {
  const MetricParams m = MetricParams::gauge_invariant(1, 1, 1);
  const FiberSweep sw = fiber_sweep(figure_top(), m, 256, false, {});
  const double at_zero = *sw.rho[128];
  double lowest = at_zero;
  for (const auto& r : sw.rho)
    if (r) lowest = std::min(lowest, *r);
  EXPECT_EQ(lowest, at_zero);
}

TEST(AngularVelocity, SigmaMinimizesRotation) {
  Sampler s(62);
  for (int k = 0; k < 20; ++k) {
    const CosetPoint p = random_coset(s);
    const MetricParams m = MetricParams::riemannian(s.uniform(0.3, 3), s.uniform(0.3, 3), 0.9, 0.9);
    const AngularVelocityCheck c = angular_velocity_min_check(p, m);
    EXPECT_TRUE(c.holds);
    // Dense-grid oracle.
    double dense = kTwoPi;
    for (int j = 0; j < 4096; ++j) {
      try {
        dense = std::min(dense, log_so3(fiber_element(p, -kPi + kTwoPi * j / 4096).R).norm());
      } catch (const AngleAtCutLocus&) {
      }
    }
    EXPECT_LE(std::sqrt(0.9) * log_so3(section_sigma(p).R).norm(), std::sqrt(0.9) * dense + 1e-6);
  }
  EXPECT_TRUE(angular_velocity_min_check({Vector3::Zero(), Vector3::UnitZ()}, MetricParams{}).holds);
  EXPECT_EQ(angular_velocity_min_check({Vector3::Zero(), Vector3::UnitZ()}, MetricParams{}).value_at_sigma, 0.0);
}

TEST(SigmaD, IdentityFiber) {
  const SigmaDResult r = section_sigma_d({Vector3::Zero(), Vector3::UnitZ()}, MetricParams{}, quick());
  EXPECT_EQ(r.dist_star, 0.0);
  EXPECT_EQ(r.alpha_star, 0.0);
  EXPECT_EQ(motion_distance_inf(r.element, RigidMotion::identity()), 0.0);
}

TEST(SigmaD, SphereEqualsPolarAngle) {
  Sampler s(63);
  for (int k = 0; k < 2; ++k) {
    const double g44 = s.uniform(0.3, 2);
    const MetricParams m = MetricParams::riemannian(s.uniform(0.3, 2), s.uniform(0.3, 2), g44, g44);
    const CosetPoint p{Vector3::Zero(), s.orientation(0.1, kPi - 0.2)};
    const SigmaDResult r = section_sigma_d(p, m, quick());
    EXPECT_NEAR(r.dist_star, std::sqrt(g44) * std::acos(p.n.z()), 1e-6);
    EXPECT_LE(motion_distance_inf(r.element, section_sigma(p)), 1e-5);
  }
}

TEST(SigmaD, WinnerIsHorizontalAndChainHolds) {
  Sampler s(64);
  for (int k = 0; k < 2; ++k) {
    const MetricParams m = s.riemannian_metric(0.5, 2.0);
    const CosetPoint p{0.6 * s.gaussian3(), s.orientation(0.1, 2.4)};
    const SectionResult r = compute_sections(p, m, quick());
    ASSERT_TRUE(r.dist_at_sigma_d.has_value());
    ASSERT_TRUE(r.lam6_relative.has_value());
    EXPECT_LE(*r.lam6_relative, 1e-6);
    EXPECT_TRUE(r.inequality_chain_holds());
    EXPECT_LE(coset_distance_inf(project(*r.sigma_d), p), 1e-10);
    EXPECT_LE(coset_distance_inf(project(r.sigma_rho), p), 1e-10);
    EXPECT_NEAR(r.error_G, r.rho_at_sigma - r.rho_at_sigma_rho, 0.0);
  }
}

TEST(SigmaD, GaugeInvariantMetricSkipsFiberMomentum) {
  const MetricParams m = MetricParams::gauge_invariant(1, 1, 1);
  const CosetPoint p{Vector3(0.3, -0.2, 0.5), Vector3(0.3, 0.4, 1).normalized()};
  const SigmaDResult r = section_sigma_d(p, m, quick());
  EXPECT_EQ(r.shot.lam0[kFiber], 0.0);
  EXPECT_LE(r.dist_star, log_norm(section_sigma_rho(p, m).element, m) + 1e-6);
}

TEST(Sections, WithoutDistance) {
  const SectionResult r = compute_sections({Vector3(1, 0, 0), Vector3::UnitX()}, MetricParams{}, quick(), false);
  EXPECT_FALSE(r.sigma_d.has_value());
  EXPECT_FALSE(r.dist_at_sigma_d.has_value());
  EXPECT_TRUE(r.inequality_chain_holds());
}
