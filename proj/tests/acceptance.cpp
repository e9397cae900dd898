// Acceptance checks A1-A8. Prints one PASS/FAIL line per criterion and exits
// nonzero when any fails.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>

#include <fmt/format.h>

#include "lfd/cli.hpp"
#include "lfd/dmp.hpp"
#include "lfd/finite_difference.hpp"
#include "lfd/metrics.hpp"
#include "lfd/trajectory_csv.hpp"
#include "lfd/vision.hpp"
#include "support.hpp"

namespace {

using namespace lfd;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

constexpr double kPi = std::numbers::pi;

struct Verdict {
  bool pass;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Verdict a1_imitation() {
  const Trajectory demo = testing::spline_demo(10.0, 0.01);
  const auto t0 = Clock::now();
  const dmp::PoseDmp d = dmp::fit_pose_dmp(demo, {});
  const Trajectory r = dmp::rollout(d, demo.front().pose, demo.back().pose, d.canonical.tau, 1e-3);
  const double elapsed = seconds_since(t0);
  const auto [pos, rot] = testing::tracking_rmse(demo, r);
  const double rot_deg = rot * 180.0 / kPi;
  return {pos <= 2e-3 && rot_deg <= 1.0 && elapsed < 1.0,
          fmt::format("pos_rmse={:.3f} mm (<= 2), rot_rmse={:.3f} deg (<= 1), fit+rollout {:.3f} s (< 1)",
                      pos * 1e3, rot_deg, elapsed)};
}

Verdict a2_goal_generalization() {
  const Trajectory demo = testing::spline_demo(10.0, 0.01);
  const dmp::PoseDmp d = dmp::fit_pose_dmp(demo, {});
  const double amplitude = (demo.back().pose.position - demo.front().pose.position).norm();
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> dir(0.0, 1.0);
  std::uniform_real_distribution<double> mag(0.0, 2.0 * amplitude);
  const auto t0 = Clock::now();
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    Eigen::Vector3d shift(dir(rng), dir(rng), dir(rng));
    shift *= mag(rng) / shift.norm();
    Pose goal = demo.back().pose;
    goal.position += shift;
    const Trajectory r = dmp::rollout(d, demo.front().pose, goal, d.canonical.tau, 1e-3);
    worst = std::max(worst, (r.back().pose.position - goal.position).norm());
  }
  const double elapsed = seconds_since(t0);
  return {worst <= 1e-3 && elapsed < 10.0,
          fmt::format("100 shifts up to {:.3f} m, worst endpoint error {:.2e} m (<= 1e-3), {:.2f} s (< 10)",
                      2.0 * amplitude, worst, elapsed)};
}

Verdict a3_batch(const fs::path& work) {
  const auto t0 = Clock::now();
  std::ostringstream out;
  std::ostringstream err;
  const int status = app::run_cli(
      {"batch", "--n", "20", "--seed", "7", "--out", (work / "a3").string()}, out, err);
  const double elapsed = seconds_since(t0);
  std::string summary = "none";
  std::istringstream lines(out.str());
  for (std::string l; std::getline(lines, l);) {
    if (l.rfind("success_rate=", 0) == 0) {
      summary = l;
    }
  }
  return {status == 0 && summary == "success_rate=1.0" && elapsed < 30.0,
          fmt::format("status {}, summary '{}', {:.2f} s (< 30)", status, summary, elapsed)};
}

Verdict a4_sweep() {
  const RunConfig cfg = RunConfig::defaults();
  vision::SweepSettings s;
  s.yaw_min = cfg.sweep.yaw_min;
  s.yaw_max = cfg.sweep.yaw_max;
  s.step = cfg.sweep.step;
  s.tolerance = cfg.sweep.tolerance;
  s.noise_sigma = cfg.vision.noise_sigma;
  const auto t0 = Clock::now();
  s.seed = 1;
  const vision::SweepResult a = vision::detection_range_sweep(cfg.scene, cfg.camera, s);
  s.seed = 2;
  const vision::SweepResult b = vision::detection_range_sweep(cfg.scene, cfg.camera, s);
  const double elapsed = seconds_since(t0);
  bool ok = a.intervals.size() == 3 && b.intervals.size() == 3;
  std::string ranges;
  double drift = 0.0;
  for (std::size_t h = 0; ok && h < 3; ++h) {
    ok = a.intervals[h].size() == 1 && b.intervals[h].size() == 1;
    if (ok) {
      drift = std::max({drift, std::abs(a.intervals[h][0].lo - b.intervals[h][0].lo),
                        std::abs(a.intervals[h][0].hi - b.intervals[h][0].hi)});
      ranges += fmt::format(" hole{}=[{:.2f},{:.2f}]", h, a.intervals[h][0].lo, a.intervals[h][0].hi);
    }
  }
  ok = ok && drift <= s.step + 1e-12 && elapsed < 30.0;
  return {ok, fmt::format("one interval per hole:{}, endpoint drift {:.3f} rad (<= {:.2f}), {:.2f} s (< 30)",
                          ranges, drift, s.step, elapsed)};
}

struct PairedRuns {
  int wins = 0;
  double proposed_force_max = 0.0;
  double native_force_max = 0.0;
  double elapsed = 0.0;
};

double max_force(const Trajectory& t) {
  double m = 0.0;
  for (const TrajectorySample& s : t) {
    m = std::max(m, s.wrench->force.norm());
  }
  return m;
}

PairedRuns paired_teaching() {
  PairedRuns r;
  const auto t0 = Clock::now();
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    RunConfig cfg = RunConfig::defaults();
    cfg.seed = seed;
    cfg.teach.settings.force_noise_sigma = 0.3;
    cfg.teach.settings.torque_noise_sigma = 0.03;
    const Trajectory p = app::teach(cfg, "proposed");
    const Trajectory n = app::teach(cfg, "native");
    const metrics::JerkReport jp = metrics::jerk_metrics(p);
    const metrics::JerkReport jn = metrics::jerk_metrics(n);
    if (p.duration() < n.duration() && jp.mean < jn.mean && jp.max < jn.max) {
      ++r.wins;
    }
    r.proposed_force_max = std::max(r.proposed_force_max, max_force(p));
    r.native_force_max = std::max(r.native_force_max, max_force(n));
  }
  r.elapsed = seconds_since(t0);
  return r;
}

Verdict a5_orderings(const PairedRuns& r) {
  return {r.wins >= 19 && r.elapsed < 20.0,
          fmt::format("proposed wins duration, mean and max jerk in {}/20 seeds (>= 19), {:.2f} s (< 20)",
                      r.wins, r.elapsed)};
}

Verdict a6_force_scale(const PairedRuns& r) {
  const RunConfig cfg = RunConfig::defaults();
  // Below breakaway the baseline never moves, whatever the hand does.
  RunConfig weak = cfg;
  weak.teach.native_force_saturation = 0.99 * cfg.teach.native.breakaway_force;
  weak.teach.native_torque_saturation = 0.99 * cfg.teach.native.breakaway_torque;
  weak.teach.settings.max_duration = 5.0;
  bool stuck = false;
  try {
    app::teach(weak, "native");
  } catch (const ktc::DemonstrationTimeout& e) {
    stuck = e.waypoints_reached() == 0 &&
            e.partial_log().back().pose == e.partial_log().front().pose;
  }
  const bool ok = cfg.human.force_saturation == 12.0 && r.proposed_force_max <= 12.0 &&
                  cfg.teach.native.breakaway_force >= 40.0 && r.native_force_max > 40.0 && stuck;
  return {ok, fmt::format("proposed max force {:.2f} N (<= 12), native peak {:.1f} N (> 40), "
                          "native stuck below breakaway: {}",
                          r.proposed_force_max, r.native_force_max, stuck ? "yes" : "no")};
}

Verdict a7_oracles() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(-1.0, 1.0);

  const dmp::BasisLayout basis = dmp::BasisLayout::time_spaced(50, 25.0 / 3.0);
  std::vector<double> w(basis.size());
  for (double& x : w) {
    x = 100.0 * u(rng);
  }
  double forcing_err = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double s = 0.5 * (u(rng) + 1.0) * (1.0 - 1e-4) + 1e-4;
    long double num = 0.0L;
    long double den = 0.0L;
    for (std::size_t k = 0; k < basis.size(); ++k) {
      const long double d = s - basis.centers[k];
      const long double psi = std::exp(-static_cast<long double>(basis.widths[k]) * d * d);
      num += w[k] * psi;
      den += psi;
    }
    forcing_err = std::max(forcing_err, std::abs(dmp::eval_forcing(basis, w, s, dmp::GateMode::kLiteral).value -
                                                 static_cast<double>(num / den)));
  }

  double quat_err = 0.0;
  for (int i = 0; i < 10000; ++i) {
    Eigen::Vector3d v(u(rng), u(rng), u(rng));
    v *= (kPi / 2) * std::abs(u(rng)) / v.norm();
    quat_err = std::max(quat_err, (quat_log(quat_exp(v)) - v).norm());
  }

  const Eigen::Vector3d c(0.03, -0.01, 0.29);
  const Eigen::Vector3d n = Eigen::Vector3d(0.1, 0.2, -1.0).normalized();
  const Eigen::Vector3d e1 = n.unitOrthogonal();
  const Eigen::Vector3d e2 = n.cross(e1);
  std::vector<Eigen::Vector3d> rim;
  for (int k = 0; k < 100; ++k) {
    const double a = 2.0 * kPi * k / 100;
    rim.push_back(c + 0.006 * (std::cos(a) * e1 + std::sin(a) * e2));
  }
  const vision::HoleEstimate est = vision::fit_circle3d(rim);
  const double circle_err = std::max((est.center - c).norm(), std::abs(est.radius - 0.006));

  const double d = 0.3;
  const double T = 3.0;
  const Trajectory quintic = testing::quintic_line(d, T, 1e-3);
  const metrics::JerkReport jr = metrics::jerk_metrics(quintic);
  double sum = 0.0;
  double peak = 0.0;
  std::size_t count = 0;
  for (std::size_t k = 3; k + 3 < quintic.size(); ++k) {
    const double x = quintic[k].t / T;
    const double j = std::abs(60.0 * d / (T * T * T) * (1.0 - 6.0 * x + 6.0 * x * x));
    sum += j;
    peak = std::max(peak, j);
    ++count;
  }
  const double mean_ref = sum / static_cast<double>(count);
  const double jerk_rel = std::max(std::abs(jr.mean - mean_ref) / mean_ref, std::abs(jr.max - peak) / peak);

  std::vector<double> t;
  Eigen::MatrixXd cubic(60, 1);
  for (int k = 0; k < 60; ++k) {
    t.push_back(0.02 * k);
    cubic(k, 0) = 1.5 * t[k] * t[k] * t[k] - 2.0 * t[k] * t[k] + t[k] + 0.5;
  }
  const Eigen::MatrixXd j3 = finite_difference(t, cubic, 3);
  const IndexRange inner = interior_rows(60, 3);
  const double fd_err = (j3.middleRows(inner.first, inner.count()).array() - 9.0).abs().maxCoeff() / 9.0;

  const double elapsed = seconds_since(t0);
  const bool ok = forcing_err <= 1e-12 && quat_err <= 1e-9 && circle_err <= 1e-9 && jerk_rel <= 0.01 &&
                  fd_err <= 1e-6 && elapsed < 5.0;
  return {ok, fmt::format("forcing {:.1e} (<= 1e-12), quat {:.1e} (<= 1e-9), circle {:.1e} (<= 1e-9), "
                          "quintic jerk {:.2f}% (<= 1%), FD3 cubic {:.1e} rel (<= 1e-6), {:.2f} s (< 5)",
                          forcing_err, quat_err, circle_err, 100.0 * jerk_rel, fd_err, elapsed)};
}

Verdict a8_determinism(const fs::path& work) {
  const fs::path base = work / "a8";
  fs::create_directories(base);
  write_trajectory_csv((base / "demo.csv").string(), testing::spline_demo(4.0, 0.01));
  std::ofstream(base / "events.txt") << "0 PedalPress\n1 MotionDone\n2 VisionReady\n3 PedalPress\n"
                                        "4 MotionDone\n5 PedalPress\n";

  struct Case {
    std::string name;
    std::vector<std::string> args;
  };
  const std::string demo = (base / "demo.csv").string();
  const std::string dmp = (base / "fit" / "dmp.json").string();
  const std::string teach = (base / "teach-sim" / "demo.csv").string();
  const std::vector<Case> cases{
      {"fit", {"fit", "--demo", demo}},
      {"rollout", {"rollout", "--dmp", dmp, "--goal-offset", "0.05", "-0.02", "0.01"}},
      {"teach-sim", {"teach-sim", "--controller", "native", "--force-noise", "0.3", "--seed", "4"}},
      {"localize", {"localize", "--yaw", "0.4", "--seed", "9"}},
      {"sweep", {"sweep", "--yaw-min", "-1", "--yaw-max", "1", "--step", "0.05"}},
      {"trial", {"trial", "--dmp", dmp, "--events", (base / "events.txt").string(), "--hole", "1",
                 "--yaw", "-0.2"}},
      {"batch", {"batch", "--n", "5", "--seed", "21"}},
      {"metrics", {"metrics", "--traj", teach, "--compare", demo}},
  };

  std::string failed;
  std::size_t files = 0;
  for (const Case& c : cases) {
    const fs::path first = base / c.name;
    const fs::path again = base / (c.name + "_rerun");
    std::vector<std::string> args = c.args;
    args.insert(args.end(), {"--out", first.string()});
    std::ostringstream out1, err1, out2, err2;
    const int s1 = app::run_cli(args, out1, err1);
    const int s2 = app::run_cli(
        {c.name, "--config", (first / "resolved_config.json").string(), "--out", again.string()},
        out2, err2);
    bool same = s1 == 0 && s2 == 0 && out1.str() == out2.str();
    for (const auto& entry : fs::directory_iterator(first)) {
      const fs::path other = again / entry.path().filename();
      same = same && fs::exists(other) && slurp(entry.path()) == slurp(other);
      ++files;
    }
    if (!same) {
      failed += " " + c.name + (err1.str().empty() ? "" : " (" + err1.str() + ")");
    }
  }
  return {failed.empty(),
          failed.empty() ? fmt::format("{} subcommands, {} output files byte-identical on rerun",
                                       cases.size(), files)
                         : "mismatch:" + failed};
}

}  // namespace

int main() {
  const fs::path work = fs::temp_directory_path() / "lfd_acceptance";
  fs::remove_all(work);
  fs::create_directories(work);

  const PairedRuns paired = paired_teaching();
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"A1", a1_imitation},
      {"A2", a2_goal_generalization},
      {"A3", [&] { return a3_batch(work); }},
      {"A4", a4_sweep},
      {"A5", [&] { return a5_orderings(paired); }},
      {"A6", [&] { return a6_force_scale(paired); }},
      {"A7", a7_oracles},
      {"A8", [&] { return a8_determinism(work); }},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    Verdict v;
    try {
      v = check();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    failures += v.pass ? 0 : 1;
    std::cout << name << ' ' << (v.pass ? "PASS" : "FAIL") << "  " << v.detail << '\n';
  }
  return failures == 0 ? 0 : 1;
}
