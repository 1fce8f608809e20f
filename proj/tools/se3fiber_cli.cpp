// se3fiber - geodesics and fiber sections on SE(3)/SO(2)
// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end. Exit codes: 0 ok, 1 verification failure, 2 bad
// input, 3 cut locus, 4 integration, 5 no convergence.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "se3fiber/se3fiber.hpp"

namespace {

using namespace se3fiber;
using io::Json;

enum Exit : int { kOk = 0, kVerifyFailed = 1, kParse = 2, kCutLocus = 3, kIntegration = 4, kNoConvergence = 5 };

struct Globals {
  std::string metric = R"({"g11":1,"g33":1,"g44":1,"g66":1,"mode":"R"})";
  std::string shooting;
  std::uint64_t seed = 0;
  std::string out;
  std::string format = "json";
  bool format_given = false;

  MetricParams metric_params() const { return io::parse_metric(metric); }

  ShootingConfig shooting_config() const {
    ShootingConfig c = shooting.empty() ? ShootingConfig{} : io::shooting_from_json(io::parse_json_argument(shooting));
    c.seed = seed;
    return c;
  }
};

// Writes to <out>/<name> when --out is set, else to stdout.
void emit(const Globals& g, const std::string& name, const std::string& content) {
  if (g.out.empty()) {
    std::cout << content;
    if (!content.empty() && content.back() != '\n') std::cout << '\n';
    return;
  }
  io::write_atomic(std::filesystem::path(g.out) / name, content);
}

std::string json_text(const Json& j) { return j.dump(2) + "\n"; }

std::string vector_csv(const Vector6& v) {
  std::string s;
  for (int i = 0; i < 6; ++i) s += (i ? "," : "") + io::format_double(v[i]);
  return s + "\n";
}

std::string motion_csv(const RigidMotion& m) {
  const Json a = io::to_json(m);
  std::string s;
  for (std::size_t i = 0; i < a.size(); ++i) s += (i ? "," : "") + io::format_double(a[i].get<double>());
  return s + "\n";
}

Json shooting_json(const ShootingResult& r, const RigidMotion& target, const MetricParams& m) {
  Json ties = Json::array();
  for (const Covector& t : r.ties) ties.push_back(io::to_json(t));
  Json j{{"distance", r.distance},
         {"lam0", io::to_json(r.lam0)},
         {"endpointError", r.endpoint_error},
         {"converged", r.converged},
         {"ties", ties}};
  try {
    j["rho"] = log_norm(target, m);
  } catch (const GeometryError&) {
    j["rho"] = nullptr;
  }
  return j;
}

Json sweep_summary(const FiberSweep& s) {
  double rho_min = detail::kInf;
  for (const auto& v : s.rho)
    if (v) rho_min = std::min(rho_min, *v);
  return {{"argminRho", s.argmin_rho},
          {"argminDist", s.argmin_dist ? Json(*s.argmin_dist) : Json(nullptr)},
          {"rhoSecondDerivativeAtZero", s.rho_second_derivative ? Json(*s.rho_second_derivative) : Json(nullptr)},
          {"minRhoOnGrid", io::number(rho_min)}};
}

int run(int argc, char** argv) {
  CLI::App app{"Geodesics, distances and fiber sections on SE(3)/SO(2)", "se3fiber"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--metric", g.metric, "metric as JSON text or a path to a JSON file")->capture_default_str();
  app.add_option("--shooting", g.shooting, "shooting config as JSON text or a path");
  app.add_option("--seed", g.seed, "seed for random restarts and verification")->capture_default_str();
  app.add_option("--out", g.out, "output directory (default: standard output)");
  app.add_option("--format", g.format, "output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();

  std::string motion_text, algebra_text, coset_text, lam_text, suite = "all";
  double T = 1.0;
  int steps = 1000, samples = 256;
  bool with_dist = false, no_dist = false, oracle = false;

  auto* log_cmd = app.add_subcommand("log", "group logarithm of a rigid motion");
  log_cmd->add_option("motion", motion_text, "x,y,z,R11..R33 or exp:c1..c6")->required();

  auto* exp_cmd = app.add_subcommand("exp", "group exponential of algebra coordinates");
  exp_cmd->add_option("coords", algebra_text, "c1,...,c6")->required();

  auto* geo_cmd = app.add_subcommand("geodesic", "integrate the geodesic flow from e");
  geo_cmd->add_option("--lam0", lam_text, "initial momentum lam1,...,lam6")->required();
  geo_cmd->add_option("--T", T, "final time")->capture_default_str();
  geo_cmd->add_option("--steps", steps, "integrator steps")->capture_default_str();

  auto* dist_cmd = app.add_subcommand("distance", "geodesic distance d(target, e) by shooting");
  dist_cmd->add_option("motion", motion_text, "target rigid motion")->required();
  dist_cmd->add_flag("--oracle", oracle, "also run the path-energy oracle");

  auto* sec_cmd = app.add_subcommand("sections", "sigma, sigma_rho and sigma_d of a coset");
  sec_cmd->add_option("coset", coset_text, "x,y,z,n1,n2,n3")->required();
  sec_cmd->add_flag("--no-dist", no_dist, "skip sigma_d");

  auto* sweep_cmd = app.add_subcommand("sweep", "tabulate rho (and d) along a fiber");
  sweep_cmd->add_option("coset", coset_text, "x,y,z,n1,n2,n3")->required();
  sweep_cmd->add_option("--samples", samples, "grid size")->check(CLI::Range(16, 1 << 20))->capture_default_str();
  sweep_cmd->add_flag("--with-dist", with_dist, "also tabulate the geodesic distance");

  auto* verify_cmd = app.add_subcommand("verify", "run invariant suites");
  verify_cmd->add_option("suite", suite, "suite name")
      ->check(CLI::IsMember({"algebra", "conservation", "horizontality", "reductive", "sections",
                             "error-convergence", "all"}))
      ->capture_default_str();

  auto* fig_cmd = app.add_subcommand("reproduce-fig2", "error experiments on the two reference cosets");
  fig_cmd->add_flag("--with-dist", with_dist, "also tabulate the geodesic distance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kParse;
  }
  g.format_given = app.get_option("--format")->count() > 0;

  if (log_cmd->parsed()) {
    const AlgebraVector c = log_se3(io::parse_motion(motion_text));
    emit(g, "log." + g.format, g.format == "csv" ? vector_csv(c) : json_text(io::to_json(c)));
    return kOk;
  }
  if (exp_cmd->parsed()) {
    const RigidMotion m = exp_se3(io::parse_vector6(algebra_text, "algebra coordinates"));
    emit(g, "exp." + g.format, g.format == "csv" ? motion_csv(m) : json_text(io::to_json(m)));
    return kOk;
  }
  const MetricParams metric = g.metric_params();
  const ShootingConfig cfg = g.shooting_config();

  if (geo_cmd->parsed()) {
    const Covector lam = io::parse_vector6(lam_text, "initial momentum");
    const Trajectory tr = lam.isZero(0.0) ? Trajectory{metric, {0.0}, {PhaseState{}}, {AlgebraVector::Zero()}}
                                          : integrate({{}, lam}, metric, T, steps);
    const std::string fmt = g.format_given ? g.format : "csv";
    if (fmt == "csv") {
      emit(g, "trajectory.csv", io::trajectory_csv(tr));
    } else {
      Json rows = Json::array();
      for (std::size_t k = 0; k < tr.size(); ++k)
        rows.push_back({{"t", tr.times[k]},
                        {"g", io::to_json(tr.states[k].g)},
                        {"lam", io::to_json(tr.states[k].lam)},
                        {"u", io::to_json(tr.velocities[k])}});
      const MomentumDiagnostics d = momentum_diagnostics(tr);
      emit(g, "trajectory.json",
           json_text({{"metric", io::to_json(metric)},
                      {"states", rows},
                      {"lam6Drift", d.max_lam6_drift},
                      {"hamiltonianDrift", d.max_hamiltonian_drift},
                      {"u6Drift", d.max_u6_drift}}));
    }
    return kOk;
  }

  if (dist_cmd->parsed()) {
    const RigidMotion target = io::parse_motion(motion_text);
    ShootingConfig c = cfg;
    c.record_trajectory = false;
    const ShootingResult r = shoot_distance(target, metric, c);
    Json j = shooting_json(r, target, metric);
    if (oracle) j["oracleDistance"] = energy_oracle_distance(target, metric);
    emit(g, "distance.json", json_text(j));
    return kOk;
  }

  if (sec_cmd->parsed()) {
    const CosetPoint p = io::parse_coset(coset_text);
    const SectionResult r = compute_sections(p, metric, cfg, !no_dist && metric.mode != MetricMode::SubRiemannian);
    Json j = io::to_json(r);
    j["coset"] = io::to_json(p);
    j["metric"] = io::to_json(metric);
    emit(g, "sections.json", json_text(j));
    return (!no_dist && metric.mode != MetricMode::SubRiemannian && !r.sigma_d) ? kNoConvergence : kOk;
  }

  if (sweep_cmd->parsed()) {
    const CosetPoint p = io::parse_coset(coset_text);
    const FiberSweep s = fiber_sweep(p, metric, samples, with_dist, cfg);
    const std::string fmt = g.format_given ? g.format : "csv";
    if (fmt == "csv") {
      emit(g, "sweep.csv", io::sweep_csv(s, metric));
      std::cerr << sweep_summary(s).dump() << '\n';
    } else {
      Json j = sweep_summary(s);
      Json rows = Json::array();
      for (std::size_t k = 0; k < s.alphas.size(); ++k)
        rows.push_back({{"alpha", s.alphas[k]},
                        {"rho", s.rho[k] ? Json(*s.rho[k]) : Json(nullptr)},
                        {"dist", s.dist[k] ? Json(*s.dist[k]) : Json(nullptr)}});
      j["samples"] = rows;
      emit(g, "sweep.json", json_text(j));
    }
    const bool any = std::any_of(s.rho.begin(), s.rho.end(), [](const auto& v) { return v.has_value(); });
    return any ? kOk : kCutLocus;
  }

  if (verify_cmd->parsed()) {
    VerifyOptions opt;
    opt.seed = g.seed;
    opt.shooting = cfg;
    opt.shooting.record_trajectory = false;
    const VerificationReport report = run_verification(suite, opt);
    emit(g, "verify-" + suite + ".json", json_text(to_json(report)));
    return report.passed() ? kOk : kVerifyFailed;
  }

  if (fig_cmd->parsed()) {
    const std::filesystem::path dir = g.out.empty() ? "fig2" : g.out;
    struct Case {
      const char* name;
      CosetPoint p;
      MetricParams m;
    };
    const Case cases[] = {{"g1", detail::figure_top_point(), detail::figure_top_metric()},
                          {"g2", detail::figure_bottom_point(), detail::figure_bottom_metric()}};
    Json summary;
    for (const Case& c : cases) {
      const FiberSweep s = fiber_sweep(c.p, c.m, samples, with_dist, cfg);
      io::write_atomic(dir / (std::string("sweep_") + c.name + ".csv"), io::sweep_csv(s, c.m));
      const double err = error_G(c.p, c.m);
      summary[std::string("errorG_") + c.name] = err;
      Json detail = sweep_summary(s);
      detail["coset"] = io::to_json(c.p);
      detail["metric"] = io::to_json(c.m);
      detail["rhoAtSigma"] = log_norm(section_sigma(c.p), c.m);
      detail["rhoAtSigmaRho"] = section_sigma_rho(c.p, c.m).rho_star;
      summary[c.name] = detail;
    }
    io::write_atomic(dir / "summary.json", json_text(summary));
    std::cout << json_text({{"errorG_g1", summary["errorG_g1"]}, {"errorG_g2", summary["errorG_g2"]}});
    return kOk;
  }
  return kParse;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const se3fiber::io::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kParse;
  } catch (const se3fiber::AngleAtCutLocus& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kCutLocus;
  } catch (const se3fiber::StepCountTooSmall& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIntegration;
  } catch (const se3fiber::NoConvergence& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNoConvergence;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kParse;
  }
}
