// se3fiber - geodesics and fiber sections on SE(3)/SO(2)
// SPDX-License-Identifier: Apache-2.0
//
// Text encodings used by the command-line tool: comma separated inputs, JSON
// records and CSV tables. Floats are written with 17 significant digits.

#ifndef SE3FIBER_IO_HPP
#define SE3FIBER_IO_HPP

#include <json.hpp>

#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "se3fiber/sections.hpp"

namespace se3fiber::io {

using Json = nlohmann::ordered_json;

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// ---------------------------------------------------------------------------
// Comma separated inputs

/// Numbers separated by commas and/or whitespace.
inline std::vector<double> parse_numbers(std::string_view text) {
  std::vector<double> out;
  std::string token;
  auto flush = [&] {
    if (token.empty()) return;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(token, &used);
    } catch (const std::exception&) {
      throw ParseError("not a number: '" + token + "'");
    }
    if (used != token.size()) throw ParseError("not a number: '" + token + "'");
    out.push_back(v);
    token.clear();
  };
  for (char ch : text) {
    if (ch == ',' || std::isspace(static_cast<unsigned char>(ch))) {
      flush();
    } else {
      token.push_back(ch);
    }
  }
  flush();
  return out;
}

inline std::vector<double> parse_exactly(std::string_view text, std::size_t n, const char* what) {
  const std::vector<double> v = parse_numbers(text);
  if (v.size() != n) {
    throw ParseError(std::string(what) + ": expected " + std::to_string(n) + " numbers, got " +
                     std::to_string(v.size()));
  }
  return v;
}

inline Vector6 parse_vector6(std::string_view text, const char* what = "vector") {
  const std::vector<double> v = parse_exactly(text, 6, what);
  return Vector6(v.data());
}

/// "x,y,z,R11,...,R33" (row-major rotation) or "exp:c1,...,c6".
inline RigidMotion parse_motion(std::string_view text) {
  constexpr std::string_view prefix = "exp:";
  if (text.substr(0, prefix.size()) == prefix) {
    return exp_se3(parse_vector6(text.substr(prefix.size()), "exp: algebra coordinates"));
  }
  const std::vector<double> v = parse_exactly(text, 12, "rigid motion");
  RigidMotion g;
  g.x = Vector3(v[0], v[1], v[2]);
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) g.R(r, c) = v[3 + 3 * r + c];
  if (!is_rotation(g.R, 1e-6)) throw ParseError("rigid motion: matrix is not a rotation");
  if (!is_rotation(g.R)) g.R = project_to_rotation(g.R);
  return g;
}

/// "x,y,z,n1,n2,n3"; n is normalized.
inline CosetPoint parse_coset(std::string_view text) {
  const std::vector<double> v = parse_exactly(text, 6, "coset");
  const Vector3 n(v[3], v[4], v[5]);
  if (!(n.norm() > 0.0)) throw ParseError("coset: orientation must be nonzero");
  return CosetPoint::make(Vector3(v[0], v[1], v[2]), n);
}

// ---------------------------------------------------------------------------
// JSON

inline Json number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

inline Json to_json(const RigidMotion& g) {
  Json a = Json::array({g.x[0], g.x[1], g.x[2]});
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) a.push_back(g.R(r, c));
  return a;
}

inline Json to_json(const Vector6& c) {
  Json a = Json::array();
  for (int i = 0; i < 6; ++i) a.push_back(c[i]);
  return a;
}

inline Json to_json(const CosetPoint& p) {
  return Json::array({p.x[0], p.x[1], p.x[2], p.n[0], p.n[1], p.n[2]});
}

inline double json_number(const Json& j, const char* key) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf" || s == "Infinity") return std::numeric_limits<double>::infinity();
  }
  throw ParseError(std::string("metric: '") + key + "' must be a number or \"inf\"");
}

inline Json to_json(const MetricParams& m) {
  return Json{{"g11", number(m.g11)},
              {"g33", m.g33},
              {"g44", m.g44},
              {"g66", m.g66},
              {"mode", to_string(m.mode)}};
}

/// Missing coefficients default to 1; a missing mode is inferred (g11 = inf
/// gives SR, g66 = 0 gives GI).
inline MetricParams metric_from_json(const Json& j) {
  if (!j.is_object()) throw ParseError("metric: expected a JSON object");
  MetricParams m;
  auto get = [&](const char* key, double fallback) {
    return j.contains(key) ? json_number(j.at(key), key) : fallback;
  };
  m.g11 = get("g11", 1.0);
  m.g33 = get("g33", 1.0);
  m.g44 = get("g44", 1.0);
  m.g66 = get("g66", 1.0);
  if (j.contains("mode")) {
    const std::string mode = j.at("mode").get<std::string>();
    if (mode == "R") {
      m.mode = MetricMode::Riemannian;
    } else if (mode == "SR") {
      m.mode = MetricMode::SubRiemannian;
    } else if (mode == "GI") {
      m.mode = MetricMode::GaugeInvariant;
    } else {
      throw ParseError("metric: mode must be R, SR or GI");
    }
  } else if (std::isinf(m.g11)) {
    m.mode = MetricMode::SubRiemannian;
  } else if (m.g66 == 0.0) {
    m.mode = MetricMode::GaugeInvariant;
  }
  if (m.mode == MetricMode::SubRiemannian && !std::isinf(m.g11))
    m.g11 = std::numeric_limits<double>::infinity();
  try {
    m.validated();
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("metric: ") + e.what());
  }
  return m;
}

inline Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

/// Inline JSON text, or a path to a JSON file.
inline Json parse_json_argument(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\n");
  if (first != std::string::npos && text[first] == '{') {
    try {
      return Json::parse(text);
    } catch (const Json::exception& e) {
      throw ParseError(e.what());
    }
  }
  return read_json_file(text);
}

inline MetricParams parse_metric(const std::string& text) { return metric_from_json(parse_json_argument(text)); }

inline Json to_json(const ShootingConfig& c) {
  return Json{{"tol", c.tol}, {"restarts", c.restarts}, {"steps", c.steps}, {"maxRho", c.max_rho}, {"seed", c.seed}};
}

inline ShootingConfig shooting_from_json(const Json& j) {
  if (!j.is_object()) throw ParseError("shooting config: expected a JSON object");
  ShootingConfig c;
  try {
    if (j.contains("tol")) c.tol = j.at("tol").get<double>();
    if (j.contains("restarts")) c.restarts = j.at("restarts").get<int>();
    if (j.contains("steps")) c.steps = j.at("steps").get<int>();
    if (j.contains("maxRho")) c.max_rho = j.at("maxRho").get<double>();
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
  } catch (const Json::exception& e) {
    throw ParseError(std::string("shooting config: ") + e.what());
  }
  if (!(c.tol > 0) || c.restarts < 0 || c.steps < 1 || !(c.max_rho > 0))
    throw ParseError("shooting config: tol, maxRho and steps must be positive, restarts >= 0");
  return c;
}

inline Json to_json(const SectionResult& r) {
  Json j;
  j["sigma"] = to_json(r.sigma);
  j["sigmaRho"] = to_json(r.sigma_rho);
  j["sigmaD"] = r.sigma_d ? to_json(*r.sigma_d) : Json(nullptr);
  j["rhoAtSigma"] = r.rho_at_sigma;
  j["rhoAtSigmaRho"] = r.rho_at_sigma_rho;
  j["distAtSigmaD"] = r.dist_at_sigma_d ? Json(*r.dist_at_sigma_d) : Json(nullptr);
  j["errorG"] = r.error_G;
  j["alphaRho"] = r.alpha_rho;
  j["alphaD"] = r.alpha_d ? Json(*r.alpha_d) : Json(nullptr);
  j["lam6Relative"] = r.lam6_relative ? Json(*r.lam6_relative) : Json(nullptr);
  j["inequalityChainHolds"] = r.inequality_chain_holds();
  return j;
}

// ---------------------------------------------------------------------------
// CSV

inline std::string trajectory_csv(const Trajectory& tr) {
  std::ostringstream out;
  out << "t,x,y,z,R11,R12,R13,R21,R22,R23,R31,R32,R33,lam1,lam2,lam3,lam4,lam5,lam6,u1,u2,u3,u4,u5,u6\n";
  for (std::size_t k = 0; k < tr.size(); ++k) {
    const PhaseState& s = tr.states[k];
    out << format_double(tr.times[k]);
    for (int i = 0; i < 3; ++i) out << ',' << format_double(s.g.x[i]);
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) out << ',' << format_double(s.g.R(r, c));
    for (int i = 0; i < 6; ++i) out << ',' << format_double(s.lam[i]);
    for (int i = 0; i < 6; ++i) out << ',' << format_double(tr.velocities[k][i]);
    out << '\n';
  }
  const MomentumDiagnostics d = momentum_diagnostics(tr);
  out << "# lam6_drift=" << format_double(d.max_lam6_drift)
      << " hamiltonian_drift=" << format_double(d.max_hamiltonian_drift)
      << " u6_drift=" << format_double(d.max_u6_drift) << '\n';
  return out.str();
}

inline std::string sweep_csv(const FiberSweep& s, const MetricParams& m) {
  std::ostringstream out;
  out << "# metric=" << to_json(m).dump() << '\n';
  out << "# base=" << to_json(s.base).dump() << '\n';
  out << "alpha,rho,dist\n";
  for (std::size_t k = 0; k < s.alphas.size(); ++k) {
    out << format_double(s.alphas[k]) << ',';
    if (s.rho[k]) out << format_double(*s.rho[k]);
    out << ',';
    if (s.dist[k]) out << format_double(*s.dist[k]);
    out << '\n';
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Files

/// Writes `content` next to `path` and renames it into place, so readers never
/// see a partial file.
inline void write_atomic(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) {
      out.close();
      std::filesystem::remove(tmp);
      throw std::runtime_error("write failed: " + tmp.string());
    }
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace se3fiber::io

#endif  // SE3FIBER_IO_HPP
