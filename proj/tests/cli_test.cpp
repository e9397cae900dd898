#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include <gtest/gtest.h>

#include "lfd/cli.hpp"
#include "lfd/config.hpp"
#include "lfd/io_error.hpp"
#include "lfd/trajectory_csv.hpp"
#include "support.hpp"

namespace lfd {
namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::path(::testing::TempDir()) / ("lfd_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

struct CliRun {
  int status;
  std::string out;
  std::string err;
};

CliRun cli(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int status = app::run_cli(args, out, err);
  return {status, out.str(), err.str()};
}

TEST(Config, DefaultsRoundTrip) {
  const RunConfig d = RunConfig::defaults();
  RunConfig c = RunConfig::defaults();
  c.seed = 99;
  apply_json(c, to_json(d), "mem");
  EXPECT_EQ(to_json(c).dump(), to_json(d).dump());
  EXPECT_EQ(d.human.waypoints.size(), 4u);
  EXPECT_EQ(d.reference_timing.size(), 2u);
}

TEST(Config, PartialOverlay) {
  RunConfig c = RunConfig::defaults();
  apply_json(c, json_io::Json::parse(R"({"seed": 3, "assembly": {"n": 5, "hole_id": 1}})"), "mem");
  EXPECT_EQ(c.seed, 3u);
  EXPECT_EQ(c.assembly.n, 5u);
  EXPECT_EQ(c.assembly.hole_id, std::optional<std::size_t>(1));
  EXPECT_EQ(c.dmp.n_basis, 50);
}

std::string config_error_field(const std::string& text) {
  RunConfig c = RunConfig::defaults();
  try {
    apply_json(c, json_io::Json::parse(text), "cfg.json");
  } catch (const ParseError& e) {
    EXPECT_EQ(e.file(), "cfg.json");
    return e.field();
  }
  return "accepted";
}

TEST(Config, StrictKeysAndTypes) {
  EXPECT_EQ(config_error_field(R"({"sed": 3})"), "sed");
  EXPECT_EQ(config_error_field(R"({"teach": {"gains": {"k_b": 1}}})"), "teach.gains.k_b");
  EXPECT_EQ(config_error_field(R"({"dmp": {"alpha_z": "25"}})"), "dmp.alpha_z");
  EXPECT_EQ(config_error_field(R"({"teach": {"controller": "fast"}})"), "teach.controller");
  EXPECT_EQ(config_error_field(R"({"vision": {"dropout": 1.5}})"), "vision.dropout");
  EXPECT_EQ(config_error_field(R"({"seed": -1})"), "seed");
}

TEST(Cli, UnknownSubcommandPrintsUsage) {
  const CliRun r = cli({"frobnicate"});
  EXPECT_NE(r.status, 0);
  EXPECT_EQ(r.err.rfind("error kind=usage", 0), 0u);
  EXPECT_NE(r.err.find("Subcommands"), std::string::npos);
  EXPECT_NE(cli({}).status, 0);
}

TEST(Cli, MissingRequiredInput) {
  const fs::path dir = scratch("missing");
  const CliRun r = cli({"fit", "--out", dir.string()});
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.err.find("--demo is required"), std::string::npos);
}

TEST(Cli, MalformedFileNamesLineAndField) {
  const fs::path dir = scratch("malformed");
  const fs::path demo = dir / "demo.csv";
  std::ofstream(demo) << "t,px,py,pz,qw,qx,qy,qz\n0,0,0,0,1,0,0,0\n0.1,0,zz,0,1,0,0,0\n";
  const CliRun r = cli({"fit", "--demo", demo.string(), "--out", (dir / "o").string()});
  EXPECT_EQ(r.status, 1);
  EXPECT_EQ(r.err, "error kind=parse file=" + demo.string() +
                       " line=3 field=py msg=\"not a number: 'zz'\"\n");

  const CliRun missing = cli({"rollout", "--dmp", (dir / "nope.json").string(), "--out",
                           (dir / "o").string()});
  EXPECT_EQ(missing.status, 1);
  EXPECT_EQ(missing.err.rfind("error kind=input file=", 0), 0u);

  const fs::path cfg = dir / "cfg.json";
  std::ofstream(cfg) << "{\n  \"seed\": 1,\n  \"dmp\": {\"basis\": 3}\n}\n";
  const CliRun bad_cfg = cli({"batch", "--config", cfg.string(), "--out", (dir / "o").string()});
  EXPECT_EQ(bad_cfg.status, 1);
  EXPECT_NE(bad_cfg.err.find("field=dmp.basis"), std::string::npos);
  EXPECT_EQ(std::count(bad_cfg.err.begin(), bad_cfg.err.end(), '\n'), 1);
}

TEST(Cli, FitThenRolloutReproducesDemo) {
  const fs::path dir = scratch("fit");
  const Trajectory demo = testing::spline_demo(10.0, 0.01);
  write_trajectory_csv((dir / "demo.csv").string(), demo);
  ASSERT_EQ(cli({"fit", "--demo", (dir / "demo.csv").string(), "--out", dir.string()}).status, 0);
  const CliRun r = cli({"rollout", "--dmp", (dir / "dmp.json").string(), "--out", dir.string()});
  ASSERT_EQ(r.status, 0) << r.err;
  const Trajectory roll = read_trajectory_csv((dir / "rollout.csv").string());
  const auto [pos, rot] = testing::tracking_rmse(demo, roll);
  EXPECT_LT(pos, 2e-3);
  EXPECT_LT(rot, std::numbers::pi / 180.0);
}

TEST(Cli, RerunFromResolvedConfigIsByteIdentical) {
  const fs::path a = scratch("rerun_a");
  const fs::path b = scratch("rerun_b");
  const CliRun first = cli({"teach-sim", "--controller", "native", "--force-noise", "0.3", "--seed",
                         "12", "--out", a.string()});
  ASSERT_EQ(first.status, 0) << first.err;
  const CliRun second =
      cli({"teach-sim", "--config", (a / "resolved_config.json").string(), "--out", b.string()});
  ASSERT_EQ(second.status, 0) << second.err;
  EXPECT_EQ(first.out, second.out);
  for (const char* f : {"demo.csv", "force_log.csv", "resolved_config.json"}) {
    EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
  }
}

TEST(Cli, MetricsPrintsReferenceRows) {
  const fs::path dir = scratch("metrics");
  write_trajectory_csv((dir / "a.csv").string(), testing::quintic_line(0.3, 3.0, 0.01));
  const CliRun r = cli({"metrics", "--traj", (dir / "a.csv").string(), "--out", dir.string()});
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_NE(r.out.find("24.66 ± 3.25"), std::string::npos);
  EXPECT_NE(r.out.find("6.71 ± 0.157"), std::string::npos);
  const json_io::Json m = json_io::read_file((dir / "metrics.json").string());
  EXPECT_GT(m["trajectory"]["jerk"]["max"].get<double>(), 0.0);
}

}  // namespace
}  // namespace lfd
