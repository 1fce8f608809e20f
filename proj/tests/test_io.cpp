#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "se3fiber/io.hpp"
#include "se3fiber/random.hpp"

using namespace se3fiber;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

fs::path scratch_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("se3fiber_io_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

}  // namespace

TEST(Numbers, ParsesCommasAndWhitespace) {
  const std::vector<double> v = io::parse_numbers(" 1, 2.5 ,-3e-2\t4 ");
  ASSERT_EQ(v.size(), 4u);
  EXPECT_EQ(v[2], -0.03);
  EXPECT_TRUE(io::parse_numbers("").empty());
  EXPECT_THROW(io::parse_numbers("1,x,3"), io::ParseError);
  EXPECT_THROW(io::parse_numbers("1.5abc"), io::ParseError);
  EXPECT_THROW(io::parse_vector6("1,2,3"), io::ParseError);
}

TEST(Numbers, FormatRoundtripsExactly) {
  Sampler s(71);
  for (int k = 0; k < 500; ++k) {
    const double v = s.normal() * std::pow(10.0, s.uniform(-20, 20));
    EXPECT_EQ(std::stod(io::format_double(v)), v);
  }
  EXPECT_EQ(io::format_double(std::numeric_limits<double>::infinity()), "inf");
  EXPECT_EQ(io::format_double(std::nan("")), "nan");
}

TEST(Motion, TwelveNumbersAndExpForm) {
  const RigidMotion g = io::parse_motion("1,2,3, 1,0,0, 0,1,0, 0,0,1");
  EXPECT_EQ(g.x, Vector3(1, 2, 3));
  EXPECT_EQ(g.R, Matrix3::Identity());

  const RigidMotion r = io::parse_motion("0,0,0, 0,-1,0, 1,0,0, 0,0,1");
  EXPECT_LE((r.R - rot_z(kPi / 2)).cwiseAbs().maxCoeff(), 1e-15);

  const RigidMotion e = io::parse_motion("exp:0,0,2,1.3744,1.3744,0");
  AlgebraVector c;
  c << 0, 0, 2, 1.3744, 1.3744, 0;
  EXPECT_LE(motion_distance_inf(e, exp_se3(c)), 0.0);

  EXPECT_THROW(io::parse_motion("1,2,3"), io::ParseError);
  EXPECT_THROW(io::parse_motion("0,0,0, 2,0,0, 0,1,0, 0,0,1"), io::ParseError);
  EXPECT_THROW(io::parse_motion("exp:1,2"), io::ParseError);
}

TEST(Motion, SlightlyOffRotationIsReprojected) {
  const RigidMotion g = io::parse_motion("0,0,0, 1.0000001,0,0, 0,1,0, 0,0,1");
  EXPECT_TRUE(is_rotation(g.R));
}

TEST(Motion, JsonRoundtrip) {
  Sampler s(72);
  for (int k = 0; k < 20; ++k) {
    const RigidMotion g = s.motion();
    const io::Json j = io::to_json(g);
    ASSERT_EQ(j.size(), 12u);
    std::string text;
    for (std::size_t i = 0; i < j.size(); ++i) text += (i ? "," : "") + io::format_double(j[i].get<double>());
    EXPECT_EQ(motion_distance_inf(io::parse_motion(text), g), 0.0);
  }
}

TEST(Coset, ParseNormalizes) {
  const CosetPoint p = io::parse_coset("1,2,3,0,0,2");
  EXPECT_EQ(p.x, Vector3(1, 2, 3));
  EXPECT_EQ(p.n, Vector3::UnitZ());
  EXPECT_THROW(io::parse_coset("1,2,3,0,0,0"), io::ParseError);
  EXPECT_THROW(io::parse_coset("1,2,3"), io::ParseError);
}

TEST(MetricJson, SchemaAndDefaults) {
  const MetricParams r = io::parse_metric(R"({"g11":2,"g33":3,"g44":4,"g66":5,"mode":"R"})");
  EXPECT_EQ(r.mode, MetricMode::Riemannian);
  EXPECT_EQ(r.g66, 5.0);

  const MetricParams sr = io::parse_metric(R"({"g11":"inf","g33":1,"g44":1,"g66":1})");
  EXPECT_EQ(sr.mode, MetricMode::SubRiemannian);
  EXPECT_TRUE(std::isinf(sr.g11));

  const MetricParams gi = io::parse_metric(R"({"g66":0})");
  EXPECT_EQ(gi.mode, MetricMode::GaugeInvariant);
  EXPECT_EQ(gi.g11, 1.0);

  const MetricParams srm = io::parse_metric(R"({"mode":"SR"})");
  EXPECT_TRUE(std::isinf(srm.g11));

  EXPECT_THROW(io::parse_metric(R"({"mode":"X"})"), io::ParseError);
  EXPECT_THROW(io::parse_metric(R"({"g33":-1})"), io::ParseError);
  EXPECT_THROW(io::parse_metric(R"({"g33":"big"})"), io::ParseError);
  EXPECT_THROW(io::parse_metric("{not json"), io::ParseError);
  EXPECT_THROW(io::parse_metric("/nonexistent/metric.json"), io::ParseError);
}

TEST(MetricJson, RoundtripAndFileInput) {
  const MetricParams m = MetricParams::sub_riemannian(2, 3, 4);
  const io::Json j = io::to_json(m);
  EXPECT_EQ(j["g11"], "inf");
  EXPECT_EQ(j["mode"], "SR");
  const fs::path dir = scratch_dir("metric");
  io::write_atomic(dir / "m.json", j.dump());
  const MetricParams back = io::parse_metric((dir / "m.json").string());
  EXPECT_EQ(back.mode, m.mode);
  EXPECT_EQ(back.g44, 3.0);
}

TEST(ShootingJson, Fields) {
  const ShootingConfig c = io::shooting_from_json(io::Json::parse(R"({"tol":1e-6,"restarts":3,"steps":500,"maxRho":2.0,"seed":7})"));
  EXPECT_EQ(c.tol, 1e-6);
  EXPECT_EQ(c.restarts, 3);
  EXPECT_EQ(c.steps, 500);
  EXPECT_EQ(c.max_rho, 2.0);
  EXPECT_EQ(c.seed, 7u);
  const io::Json j = io::to_json(c);
  EXPECT_EQ(j["maxRho"], 2.0);
  EXPECT_THROW(io::shooting_from_json(io::Json::parse(R"({"steps":0})")), io::ParseError);
  EXPECT_THROW(io::shooting_from_json(io::Json::parse(R"({"tol":"a"})")), io::ParseError);
}

TEST(Csv, TrajectoryLayout) {
  const Trajectory tr = integrate({{}, Covector::Unit(2)}, MetricParams{}, 1.0, 4);
  const std::string csv = io::trajectory_csv(tr);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "t,x,y,z,R11,R12,R13,R21,R22,R23,R31,R32,R33,lam1,lam2,lam3,lam4,lam5,lam6,u1,u2,u3,u4,u5,u6");
  int rows = 0;
  std::string last;
  while (std::getline(in, line)) {
    if (line.rfind("#", 0) == 0) {
      last = line;
      continue;
    }
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 24);
    ++rows;
  }
  EXPECT_EQ(rows, 5);
  EXPECT_EQ(last.rfind("# lam6_drift=0 hamiltonian_drift=0 u6_drift=0", 0), 0u);
}

TEST(Csv, SweepLayout) {
  const CosetPoint p{Vector3(0.2, 0, 0.5), Vector3(0.3, 0, 1).normalized()};
  const FiberSweep sw = fiber_sweep(p, MetricParams{}, 16, false, {});
  const std::string csv = io::sweep_csv(sw, MetricParams{});
  EXPECT_EQ(csv.rfind("# metric={\"g11\":1.0,", 0), 0u);
  EXPECT_NE(csv.find("\n# base=["), std::string::npos);
  EXPECT_NE(csv.find("\nalpha,rho,dist\n"), std::string::npos);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3 + 16);
  // Distances were not requested: every row ends with an empty cell.
  EXPECT_NE(csv.find(",\n"), std::string::npos);
}

TEST(SectionJson, Fields) {
  const CosetPoint p{Vector3(0.2, 0.1, 0.5), Vector3(0.3, 0, 1).normalized()};
  ShootingConfig c;
  c.restarts = 2;
  const SectionResult r = compute_sections(p, MetricParams{}, c, false);
  const io::Json j = io::to_json(r);
  EXPECT_TRUE(j["sigmaD"].is_null());
  EXPECT_TRUE(j["distAtSigmaD"].is_null());
  EXPECT_EQ(j["sigma"].size(), 12u);
  EXPECT_EQ(j["errorG"].get<double>(), r.error_G);
  EXPECT_TRUE(j["inequalityChainHolds"].get<bool>());
}

TEST(Files, AtomicWriteLeavesNoTemporary) {
  const fs::path dir = scratch_dir("atomic");
  const fs::path target = dir / "sub" / "out.csv";
  io::write_atomic(target, "a,b\n1,2\n");
  EXPECT_EQ(slurp(target), "a,b\n1,2\n");
  io::write_atomic(target, "replaced\n");
  EXPECT_EQ(slurp(target), "replaced\n");
  EXPECT_FALSE(fs::exists(dir / "sub" / "out.csv.tmp"));
}
