#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "lfd/metrics.hpp"
#include "support.hpp"

namespace lfd::metrics {
namespace {

TEST(Jerk, ConstantVelocityIsZero) {
  Trajectory t;
  for (int k = 0; k < 100; ++k) {
    t.push_back({0.01 * k, {Eigen::Vector3d(0.3, -0.1, 0.2) * (0.01 * k), {}}, std::nullopt});
  }
  const JerkReport j = jerk_metrics(t);
  EXPECT_NEAR(j.mean, 0.0, 1e-9);
  EXPECT_NEAR(j.max, 0.0, 1e-9);
}

TEST(Jerk, QuinticMatchesClosedForm) {
  const double d = 0.3;
  const double T = 3.0;
  const double dt = 1e-3;
  const Trajectory traj = testing::quintic_line(d, T, dt);
  const JerkReport j = jerk_metrics(traj);
  // Closed-form jerk norm evaluated on the same interior rows.
  double sum = 0.0;
  double peak = 0.0;
  std::size_t n = 0;
  for (std::size_t k = 3; k + 3 < traj.size(); ++k) {
    const double u = traj[k].t / T;
    const double jerk = std::abs(60.0 * d / (T * T * T) * (1.0 - 6.0 * u + 6.0 * u * u));
    sum += jerk;
    peak = std::max(peak, jerk);
    ++n;
  }
  EXPECT_EQ(j.samples, n);
  EXPECT_NEAR(j.mean, sum / n, 0.01 * sum / n);
  EXPECT_NEAR(j.max, peak, 0.01 * peak);
}

Trajectory with_noise(const Trajectory& t, double sigma, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, sigma);
  Trajectory out;
  for (const TrajectorySample& s : t) {
    Pose p = s.pose;
    p.position += Eigen::Vector3d(g(rng), g(rng), g(rng));
    out.push_back({s.t, p, std::nullopt});
  }
  return out;
}

TEST(Jerk, NoiseIncreasesJerk) {
  const Trajectory clean = testing::quintic_line(0.3, 3.0, 0.01);
  const Trajectory noisy = with_noise(clean, 1e-4, 4);
  EXPECT_GT(jerk_metrics(noisy).mean, jerk_metrics(clean).mean);
  const auto cmp = compare_demonstrations(clean, noisy);
  EXPECT_EQ(cmp[1].winner, "a");
  EXPECT_EQ(cmp[2].winner, "a");
}

TEST(Jerk, RigidMotionInvariance) {
  const Trajectory base = testing::spline_demo(4.0, 0.01);
  const Pose g{{1.0, -2.0, 0.5}, UnitQuaternion::from_axis_angle(Eigen::Vector3d(1, 1, 0).normalized(), 0.8)};
  Trajectory moved;
  for (const TrajectorySample& s : base) {
    moved.push_back({s.t, compose(g, s.pose), std::nullopt});
  }
  const JerkReport a = jerk_metrics(base);
  const JerkReport b = jerk_metrics(moved);
  EXPECT_NEAR(a.mean, b.mean, 1e-9);
  EXPECT_NEAR(a.std, b.std, 1e-9);
  EXPECT_NEAR(a.max, b.max, 1e-9);
  EXPECT_NEAR(a.angular_mean, b.angular_mean, 1e-6);
}

TEST(Jerk, TimeReversalKeepsMean) {
  const Trajectory base = testing::spline_demo(4.0, 0.01);
  Trajectory rev;
  const double T = base.back().t;
  for (auto it = base.samples().rbegin(); it != base.samples().rend(); ++it) {
    rev.push_back({T - it->t, it->pose, std::nullopt});
  }
  EXPECT_NEAR(jerk_metrics(base).mean, jerk_metrics(rev).mean, 1e-9);
  EXPECT_NEAR(jerk_metrics(base).max, jerk_metrics(rev).max, 1e-9);
}

TEST(Jerk, Preconditions) {
  Trajectory t;
  for (int k = 0; k < 3; ++k) {
    t.push_back({0.1 * k, {}, std::nullopt});
  }
  EXPECT_THROW(jerk_metrics(t), std::invalid_argument);
  t.push_back({0.5, {}, std::nullopt});
  EXPECT_THROW(jerk_metrics(t), std::invalid_argument);  // not uniform
}

TEST(Timing, Statistics) {
  TimingReport r = timing_stats({10, 10, 10});
  EXPECT_DOUBLE_EQ(r.mean, 10.0);
  EXPECT_DOUBLE_EQ(r.std, 0.0);
  r = timing_stats({1, 2, 3});
  EXPECT_DOUBLE_EQ(r.mean, 2.0);
  EXPECT_DOUBLE_EQ(r.std, 1.0);
  EXPECT_DOUBLE_EQ(r.min, 1.0);
  EXPECT_DOUBLE_EQ(r.max, 3.0);
  EXPECT_DOUBLE_EQ(timing_stats({4.2}).std, 0.0);
  EXPECT_THROW(timing_stats({}), std::invalid_argument);
}

TEST(Compare, IdenticalInputsTie) {
  const Trajectory t = testing::spline_demo(2.0, 0.01);
  for (const MetricComparison& m : compare_demonstrations(t, t)) {
    EXPECT_DOUBLE_EQ(m.ratio, 1.0) << m.metric;
    EXPECT_EQ(m.winner, "tie");
  }
}

TEST(Table, ReferenceRowsVerbatim) {
  const std::string table =
      render_table("Duration [s]", {summary_row("proposed", 17.1666, 0.7561, 2),
                                    {"native (published)", "24.66 ± 3.25 s"}});
  EXPECT_NE(table.find("17.17 ± 0.76"), std::string::npos);
  EXPECT_NE(table.find("24.66 ± 3.25 s"), std::string::npos);
  EXPECT_NE(table.find("Duration [s]"), std::string::npos);
}

}  // namespace
}  // namespace lfd::metrics
