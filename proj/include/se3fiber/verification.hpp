// se3fiber - geodesics and fiber sections on SE(3)/SO(2)
// SPDX-License-Identifier: Apache-2.0
//
// Seeded invariant suites. Each check records its worst violation against a
// declared tolerance; a suite passes when every check does.

#ifndef SE3FIBER_VERIFICATION_HPP
#define SE3FIBER_VERIFICATION_HPP

#include <chrono>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "se3fiber/io.hpp"
#include "se3fiber/random.hpp"

namespace se3fiber {

struct InvariantCheck {
  std::string name;
  int cases = 0;
  double max_violation = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

struct VerificationReport {
  std::string suite;
  std::vector<InvariantCheck> checks;
  std::map<std::string, double> observations;  // reported values without a pass/fail claim
  double wall_seconds = 0.0;

  int cases() const {
    int n = 0;
    for (const auto& c : checks) n += c.cases;
    return n;
  }
  bool passed() const {
    for (const auto& c : checks)
      if (!c.passed) return false;
    return true;
  }
};

struct VerifyOptions {
  std::uint64_t seed = 0;
  ShootingConfig shooting;
};

inline const std::vector<std::string>& verification_suites() {
  static const std::vector<std::string> names = {"algebra",  "conservation", "horizontality",
                                                 "reductive", "sections",    "error-convergence"};
  return names;
}

namespace detail {

class CheckRecorder {
 public:
  explicit CheckRecorder(VerificationReport& r) : report_(r) {}

  // Adds a check whose violation is max(values).
  void add(const std::string& name, double tolerance, const std::vector<double>& violations) {
    InvariantCheck c;
    c.name = name;
    c.cases = static_cast<int>(violations.size());
    c.tolerance = tolerance;
    for (double v : violations) c.max_violation = std::max(c.max_violation, std::isnan(v) ? kInf : v);
    c.passed = c.max_violation <= tolerance;
    report_.checks.push_back(c);
  }

  void add(const std::string& name, double tolerance, double violation) {
    add(name, tolerance, std::vector<double>{violation});
  }

  void observe(const std::string& name, double value) { report_.observations[name] = value; }

 private:
  VerificationReport& report_;
};

// Violation of a condition expressed as a boolean.
inline double failed(bool ok) { return ok ? 0.0 : 1.0; }

inline double c6_closed_form(const Matrix3& R) {
  const EulerZYZ e = euler_zyz(R);
  const double q = log_so3(R).norm();
  const double half = std::cos(0.5 * e.beta);
  return std::sin(e.alpha + e.gamma) * half * half / sinc(q);
}

// Figure-2 style settings.
inline CosetPoint figure_top_point() {
  AlgebraVector c;
  c << 0, 0, 2, 7 * kPi / 16, 7 * kPi / 16, 0;
  return project(exp_se3(c));
}
inline MetricParams figure_top_metric() { return MetricParams::gauge_invariant(1, 1, 1); }
inline CosetPoint figure_bottom_point() {
  AlgebraVector c;
  c << 0, 0.25, 0.25, 0, 0.25 * kPi / 14, 0;
  return project(exp_se3(c));
}
inline MetricParams figure_bottom_metric() { return MetricParams::riemannian(1, 1, 0.01, 0.05); }

// Co-planar coset: x in span{n, e_z}.
inline CosetPoint coplanar_coset(Sampler& s) {
  const Vector3 n = s.orientation(0.05, kPi - 0.1);
  return {s.uniform(-1.5, 1.5) * n + s.uniform(-1.5, 1.5) * Vector3::UnitZ(), n};
}

// max_alpha |rho(alpha) - rho(-alpha)| over a uniform grid symmetric about 0.
inline double sweep_asymmetry(const CosetPoint& p, const MetricParams& m, int n) {
  double worst = 0.0;
  for (int k = 1; k < n / 2; ++k) {
    const double a = kTwoPi * k / n;
    const double lp = log_norm_or_inf(fiber_element(p, a), m);
    const double lm = log_norm_or_inf(fiber_element(p, -a), m);
    if (std::isfinite(lp) && std::isfinite(lm)) worst = std::max(worst, std::abs(lp - lm));
  }
  return worst;
}

// ---------------------------------------------------------------------------

inline void suite_algebra(CheckRecorder& rec, const VerifyOptions& opt) {
  Sampler s(opt.seed);
  std::vector<double> v1, v2, v3, v4, v5, v6, v7;
  for (int k = 0; k < 1000; ++k) {
    const AlgebraVector c = s.algebra(3.0, kPi - 0.1);
    v1.push_back((log_se3(exp_se3(c)) - c).norm());
    const RigidMotion g = s.motion();
    v2.push_back(motion_distance_inf(exp_se3(log_se3(g)), g));
    const Matrix3 R = exp_so3(s.rotation_vector(kPi - 0.01));
    v3.push_back(std::abs(log_se3({s.gaussian3(), R})[kFiber] - c6_closed_form(R)));
    const Matrix3 Re = rotation_from_euler(s.uniform(0, kTwoPi), s.uniform(0.01, kPi - 0.01),
                                           s.uniform(0, kTwoPi));
    v4.push_back((rotation_from_euler(euler_zyz(Re)) - Re).cwiseAbs().maxCoeff());
    const RigidMotion a = s.motion(), b = s.motion(), d = s.motion();
    v5.push_back(motion_distance_inf((a * b) * d, a * (b * d)));
    v6.push_back(motion_distance_inf(a * inverse(a), RigidMotion::identity()));
    v7.push_back((adjoint_matrix(a * b) - adjoint_matrix(a) * adjoint_matrix(b)).cwiseAbs().maxCoeff());
  }
  rec.add("exp_log_roundtrip", 1e-10, v1);
  rec.add("log_exp_roundtrip", 1e-10, v2);
  rec.add("c6_euler_identity", 1e-9, v3);
  rec.add("euler_roundtrip", 1e-10, v4);
  rec.add("group_associativity", 1e-12, v5);
  rec.add("group_inverse", 1e-12, v6);
  rec.add("adjoint_homomorphism", 1e-12, v7);

  const StructureConstants& C = structure_constants();
  double antisym = 0.0, jacobi = 0.0, commutator = 0.0;
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) {
      const AlgebraVector br = vee(generator(i) * generator(j) - generator(j) * generator(i));
      for (int k = 0; k < 6; ++k) {
        antisym = std::max(antisym, std::abs(C(k, i, j) + C(k, j, i)));
        commutator = std::max(commutator, std::abs(C(k, i, j) - br[k]));
        const AlgebraVector ei = AlgebraVector::Unit(i), ej = AlgebraVector::Unit(j), ek = AlgebraVector::Unit(k);
        const AlgebraVector jac = ad(ei, ad(ej, ek)) + ad(ej, ad(ek, ei)) + ad(ek, ad(ei, ej));
        jacobi = std::max(jacobi, jac.cwiseAbs().maxCoeff());
      }
    }
  rec.add("structure_antisymmetry", 0.0, antisym);
  rec.add("structure_jacobi", 1e-12, jacobi);
  rec.add("structure_commutators", 1e-12, commutator);

  std::vector<double> dual;
  for (int k = 0; k < 100; ++k) {
    const Vector6 v = s.gaussian6(), mu = s.gaussian6(), w = s.gaussian6();
    dual.push_back(std::abs(coad(v, mu).dot(w) - mu.dot(ad(v, w))));
  }
  rec.add("coadjoint_duality", 1e-12, dual);

  std::vector<double> fviol;
  double prev = f_coefficient(0.0);
  for (int k = 1; k < 2000; ++k) {
    const double q = (kPi - 1e-6) * k / 2000.0;
    const double f = f_coefficient(q);
    fviol.push_back(std::max({0.0, -f, -(1.0 - q * q * f), prev - f}));
    prev = f;
  }
  rec.add("f_coefficient_sign_and_monotone", 0.0, fviol);
}

inline void suite_conservation(CheckRecorder& rec, const VerifyOptions& opt) {
  Sampler s(opt.seed + 1);
  std::vector<double> lam6, u6, ham, lamdot6;
  for (MetricMode mode : {MetricMode::Riemannian, MetricMode::SubRiemannian, MetricMode::GaugeInvariant}) {
    for (int k = 0; k < 100; ++k) {
      MetricParams m = s.riemannian_metric();
      if (mode == MetricMode::SubRiemannian) m = MetricParams::sub_riemannian(m.g33, m.g44, m.g66);
      if (mode == MetricMode::GaugeInvariant) m = MetricParams::gauge_invariant(m.g11, m.g33, m.g44);
      const Covector lam = s.gaussian6();
      const Trajectory tr = integrate({s.motion(), lam}, m, 1.0, 1000);
      const MomentumDiagnostics d = momentum_diagnostics(tr);
      const double scale = std::max(1.0, lam.norm());
      lam6.push_back(d.max_lam6_drift / scale);
      u6.push_back(d.max_u6_drift / scale);
      ham.push_back(d.max_hamiltonian_drift / std::max(1.0, hamiltonian(lam, m)));
      for (int j = 0; j < 10; ++j)
        lamdot6.push_back(std::abs(flow_rhs({s.motion(), s.gaussian6()}, m).lam_dot[kFiber]));
    }
  }
  rec.add("lambda6_conserved", 1e-8, lam6);
  rec.add("u6_conserved", 1e-8, u6);
  rec.add("hamiltonian_conserved", 1e-8, ham);
  rec.add("lambda6_rate_zero", 1e-12, lamdot6);

  // Halving the step must cut the batch Hamiltonian drift by at least 8.
  const auto max_drift = [](const Covector& lam, const MetricParams& m, int n) {
    PhaseState st{{}, lam};
    const double h0 = hamiltonian(lam, m);
    double d = 0.0;
    for (int i = 0; i < n; ++i) {
      st = detail::rkmk4_step(st, m, 1.0 / n);
      d = std::max(d, std::abs(hamiltonian(st.lam, m) - h0));
    }
    return d / std::max(1.0, h0);
  };
  double coarse = 0.0, fine = 0.0, worst_case = kInf;
  for (int k = 0; k < 20; ++k) {
    const MetricParams m = s.riemannian_metric(0.3, 3.0);
    const Covector lam = 2.0 * s.gaussian6();
    const double d1 = max_drift(lam, m, 50), d2 = max_drift(lam, m, 100);
    coarse += d1;
    fine += d2;
    if (d2 > 1e-13) worst_case = std::min(worst_case, d1 / d2);
  }
  const double ratio = coarse / fine;
  rec.add("integrator_fourth_order", 0.0, std::max(0.0, 8.0 - ratio));
  rec.observe("integrator_drift_ratio", ratio);
  rec.observe("integrator_min_case_drift_ratio", worst_case);
}

inline void suite_horizontality(CheckRecorder& rec, const VerifyOptions& opt) {
  Sampler s(opt.seed + 2);
  std::vector<double> u6, insens, gi, sr;
  for (int k = 0; k < 20; ++k) {
    const MetricParams base = s.riemannian_metric();
    Covector lam = s.gaussian6();
    lam[kFiber] = 0.0;
    std::vector<Trajectory> runs;
    for (double g66 : {0.01, 1.0, 100.0}) {
      MetricParams m = base;
      m.g66 = g66;
      runs.push_back(integrate({{}, lam}, m, 1.0, 1000));
    }
    for (const Trajectory& tr : runs) {
      double w = 0.0;
      for (const auto& u : tr.velocities) w = std::max(w, std::abs(u[kFiber]));
      u6.push_back(w);
    }
    const Trajectory gauge =
        integrate({{}, lam}, MetricParams::gauge_invariant(base.g11, base.g33, base.g44), 1.0, 1000);
    for (std::size_t t = 0; t < runs[0].size(); ++t) {
      insens.push_back(std::max(motion_distance_inf(runs[0].states[t].g, runs[1].states[t].g),
                                motion_distance_inf(runs[2].states[t].g, runs[1].states[t].g)));
      gi.push_back(motion_distance_inf(gauge.states[t].g, runs[1].states[t].g));
    }
    // SR results do not see g66.
    const Covector any = s.gaussian6();
    const PhaseState a = integrate_endpoint({{}, any}, MetricParams::sub_riemannian(base.g33, base.g44, 0.01), 1.0, 500);
    const PhaseState b = integrate_endpoint({{}, any}, MetricParams::sub_riemannian(base.g33, base.g44, 100.0), 1.0, 500);
    sr.push_back(motion_distance_inf(a.g, b.g));
  }
  rec.add("horizontal_start_stays_horizontal", 1e-8, u6);
  rec.add("fiber_cost_irrelevant", 1e-7, insens);
  rec.add("gauge_flow_matches_horizontal_flow", 1e-7, gi);
  rec.add("sub_riemannian_ignores_g66", 1e-12, sr);

  std::vector<double> winner;
  for (int k = 0; k < 3; ++k) {
    const MetricParams m = s.riemannian_metric(0.5, 2.0);
    const CosetPoint p{0.5 * s.gaussian3(), s.orientation(0.2, 2.4)};
    try {
      const SigmaDResult r = section_sigma_d(p, m, opt.shooting);
      winner.push_back(std::abs(r.shot.lam0[kFiber]) / std::max(1e-300, r.shot.lam0.norm()));
    } catch (const GeometryError&) {
      winner.push_back(kInf);
    }
  }
  rec.add("sigma_d_winner_horizontal", 1e-6, winner);
}

inline void suite_reductive(CheckRecorder& rec, const VerifyOptions& opt) {
  Sampler s(opt.seed + 3);
  std::vector<double> legal, complement, reductive, conj;
  std::vector<double> illegal;
  for (int k = 0; k < 50; ++k) {
    MetricParams m = s.riemannian_metric(0.05, 20.0);
    if (k % 2) m = MetricParams::gauge_invariant(m.g11, m.g33, m.g44);
    const GeneralInnerProduct ip = GeneralInnerProduct::from_metric(m);
    legal.push_back(legality_check(ip).max_violation);
    const ReductiveReport rr = reductive_check(ip);
    reductive.push_back(rr.max_violation);
    Eigen::Matrix<double, 6, 5> expected = Eigen::Matrix<double, 6, 5>::Zero();
    expected.topRows<5>().setIdentity();
    complement.push_back((rr.complement - expected).cwiseAbs().maxCoeff());

    Matrix6 M = m.diagonal().asDiagonal();
    const int pair = k % 2 ? 0 : 3;
    M(pair, pair) *= 1.5;
    illegal.push_back(failed(!legality_check(GeneralInnerProduct(M)).legal));

    const RigidMotion g = exp_se3(s.algebra(2.0, kPi - 0.3));
    const RigidMotion h = stabilizer_element(s.uniform(0, kTwoPi));
    conj.push_back(std::abs(log_norm(h * g * inverse(h), m) - log_norm(g, m)));
  }
  rec.add("metric_family_legal", 1e-10, legal);
  rec.add("anisotropic_pair_illegal", 0.0, illegal);
  rec.add("reductive_split", 1e-10, reductive);
  rec.add("complement_is_A1_to_A5", 1e-12, complement);
  rec.add("log_norm_conjugation_invariant", 1e-9, conj);
  rec.add("bracket_A6_A1_is_A2", 1e-15,
          (ad(AlgebraVector::Unit(kFiber), AlgebraVector::Unit(0)) - AlgebraVector::Unit(1)).norm());

  const SubbundleProjections P = projections(MetricParams{});
  rec.add("projections_idempotent", 0.0,
          std::max({(P.vertical * P.vertical - P.vertical).norm(),
                    (P.horizontal * P.horizontal - P.horizontal).norm(),
                    (P.distribution * P.distribution - P.distribution).norm(),
                    (P.horizontal * P.vertical).norm()}));
}

inline void suite_sections(CheckRecorder& rec, const VerifyOptions& opt) {
  Sampler s(opt.seed + 4);

  const double top = error_G(figure_top_point(), figure_top_metric());
  rec.observe("errorG_g1", top);
  rec.add("figure_top_error_in_0.07_0.13", 0.0, std::max({0.0, 0.07 - top, top - 0.13}));
  const double bottom = error_G(figure_bottom_point(), figure_bottom_metric());
  rec.observe("errorG_g2", bottom);
  rec.add("figure_bottom_error_vanishes", 1e-3, bottom);

  std::vector<double> c6, eq13, sym, proj, ang, equiv;
  for (int k = 0; k < 100; ++k) {
    const CosetPoint p{s.gaussian3(), s.orientation(0.0, kPi - 0.1)};
    c6.push_back(std::abs(log_se3(section_sigma(p))[kFiber]));
    const Vector3 shift = s.gaussian3();
    const RigidMotion moved = section_sigma({p.x + shift, p.n});
    equiv.push_back(motion_distance_inf(moved, RigidMotion::pure_translation(shift) * section_sigma(p)));
  }
  rec.add("sigma_has_zero_c6", 1e-10, c6);
  rec.add("sigma_translation_equivariant", 1e-12, equiv);

  for (int k = 0; k < 10; ++k) {
    const double g11 = s.uniform(0.5, 3.0);
    const MetricParams m = MetricParams::riemannian(g11, s.uniform(0.1, g11), s.uniform(0.1, 3.0), s.uniform(0.1, 3.0));
    eq13.push_back(std::max(0.0, error_G({Vector3(0, 0, s.uniform(-2, 2)), s.orientation(0.0, kPi - 0.1)}, m)));

    const CosetPoint cp = coplanar_coset(s);
    sym.push_back(sweep_asymmetry(cp, s.riemannian_metric(), 256));

    const CosetPoint p{s.gaussian3(), s.orientation(0.0, kPi - 0.1)};
    const MetricParams iso = MetricParams::riemannian(s.uniform(0.3, 3), s.uniform(0.3, 3), 0.8, 0.8);
    ang.push_back(failed(angular_velocity_min_check(p, iso).holds));
    const SigmaRhoResult sr = section_sigma_rho(p, iso);
    proj.push_back(std::max(coset_distance_inf(project(sr.element), p),
                            coset_distance_inf(project(section_sigma(p)), p)));
  }
  rec.add("eq13_vertical_translation_zero_error", 1e-6, eq13);
  rec.add("coplanar_profile_symmetric", 1e-9, sym);
  rec.add("sigma_minimizes_angular_velocity", 0.0, ang);

  std::vector<double> sphere_rho, sphere_d, sphere_beta, chain, chain_proj;
  for (int k = 0; k < 3; ++k) {
    const double g44 = s.uniform(0.3, 2.0);
    const MetricParams m = MetricParams::riemannian(s.uniform(0.3, 2.0), s.uniform(0.3, 2.0), g44, g44);
    const CosetPoint p{Vector3::Zero(), s.orientation(0.1, kPi - 0.2)};
    const SectionResult r = compute_sections(p, m, opt.shooting);
    sphere_rho.push_back(std::abs(r.rho_at_sigma - r.rho_at_sigma_rho));
    sphere_d.push_back(r.dist_at_sigma_d ? std::abs(r.rho_at_sigma_rho - *r.dist_at_sigma_d) : kInf);
    sphere_beta.push_back(r.dist_at_sigma_d ? std::abs(*r.dist_at_sigma_d - std::sqrt(g44) * std::acos(p.n.z())) : kInf);

    const CosetPoint q{0.6 * s.gaussian3(), s.orientation(0.1, 2.4)};
    const SectionResult rq = compute_sections(q, s.riemannian_metric(0.5, 2.0), opt.shooting);
    chain.push_back(failed(rq.dist_at_sigma_d && rq.inequality_chain_holds()));
    double pr = std::max(coset_distance_inf(project(rq.sigma), q), coset_distance_inf(project(rq.sigma_rho), q));
    if (rq.sigma_d) pr = std::max(pr, coset_distance_inf(project(*rq.sigma_d), q));
    chain_proj.push_back(pr);
  }
  proj.insert(proj.end(), chain_proj.begin(), chain_proj.end());
  rec.add("sections_project_to_input", 1e-10, proj);
  rec.add("sphere_sigma_equals_sigma_rho", 1e-9, sphere_rho);
  rec.add("sphere_sigma_rho_equals_sigma_d", 1e-6, sphere_d);
  rec.add("sphere_distance_is_polar_angle", 1e-6, sphere_beta);
  rec.add("inequality_chain", 0.0, chain);

  // Empirical radius of zero error along the co-planar family exp(t A3 + 7pi/16 (A4 + A5)).
  double lo = 0.0, hi = 4.0;
  auto err_at = [](double t) {
    AlgebraVector c;
    c << 0, 0, t, 7 * kPi / 16, 7 * kPi / 16, 0;
    return error_G(project(exp_se3(c)), figure_top_metric());
  };
  for (int it = 0; it < 30; ++it) {
    const double mid = 0.5 * (lo + hi);
    (err_at(mid) <= 1e-9 ? lo : hi) = mid;
  }
  AlgebraVector c;
  c << 0, 0, lo, 7 * kPi / 16, 7 * kPi / 16, 0;
  rec.observe("coplanar_zero_error_radius_t", lo);
  rec.observe("coplanar_zero_error_radius_rho", log_norm(exp_se3(c), figure_top_metric()));
}

inline void suite_error_convergence(CheckRecorder& rec, const VerifyOptions& opt) {
  Sampler s(opt.seed + 5);
  std::vector<double> monotone, last;
  for (int k = 0; k < 5; ++k) {
    const AlgebraVector c = s.algebra(1.5, 1.2);
    const MetricParams m = s.riemannian_metric(0.3, 3.0);
    double prev = kInf;
    for (double t : {1.0, 0.5, 0.25, 0.125}) {
      const double e = std::max(0.0, error_G(project(exp_se3(t * c)), m));
      if (std::isfinite(prev)) monotone.push_back(std::max(0.0, e - 1.1 * prev));
      prev = e;
    }
    last.push_back(prev);
  }
  rec.add("error_decreases_along_shrinking_family", 0.0, monotone);
  double worst = 0.0;
  for (double v : last) worst = std::max(worst, v);
  rec.observe("max_error_at_t_0.125", worst);
}

}  // namespace detail

/// Runs one suite by name; throws std::invalid_argument for unknown names.
inline VerificationReport run_verification(const std::string& suite, const VerifyOptions& opt = {}) {
  static const std::map<std::string, std::function<void(detail::CheckRecorder&, const VerifyOptions&)>> table = {
      {"algebra", detail::suite_algebra},
      {"conservation", detail::suite_conservation},
      {"horizontality", detail::suite_horizontality},
      {"reductive", detail::suite_reductive},
      {"sections", detail::suite_sections},
      {"error-convergence", detail::suite_error_convergence},
  };
  VerificationReport report;
  report.suite = suite;
  const auto t0 = std::chrono::steady_clock::now();
  detail::CheckRecorder rec(report);
  if (suite == "all") {
    for (const std::string& name : verification_suites()) table.at(name)(rec, opt);
  } else {
    const auto it = table.find(suite);
    if (it == table.end()) throw std::invalid_argument("unknown verification suite: " + suite);
    it->second(rec, opt);
  }
  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

inline io::Json to_json(const VerificationReport& r) {
  io::Json checks = io::Json::array();
  for (const auto& c : r.checks) {
    checks.push_back({{"name", c.name},
                      {"cases", c.cases},
                      {"maxViolation", io::number(c.max_violation)},
                      {"tolerance", c.tolerance},
                      {"passed", c.passed}});
  }
  io::Json obs = io::Json::object();
  for (const auto& [k, v] : r.observations) obs[k] = io::number(v);
  return {{"suite", r.suite},
          {"cases", r.cases()},
          {"passed", r.passed()},
          {"wallSeconds", r.wall_seconds},
          {"checks", checks},
          {"observations", obs}};
}

}  // namespace se3fiber

#endif  // SE3FIBER_VERIFICATION_HPP
