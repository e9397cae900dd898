#include <cmath>

#include <gtest/gtest.h>

#include "lfd/config.hpp"
#include "lfd/ktc.hpp"
#include "lfd/metrics.hpp"

namespace lfd::ktc {
namespace {

AdmittanceGains unit_gains() {
  AdmittanceGains g;
  g.k_s_inv.setConstant(1e-3);
  g.k_a.setConstant(2e-3);
  g.deadband.setConstant(0.5);
  return g;
}

TEST(Admittance, DeadbandAndGains) {
  const AdmittanceGains g = unit_gains();
  const Wrench f({2.0, -0.3, -1.5}, {0.0, 0.6, 0.0});
  const Vector6d d = admittance_displacement(f, g);
  EXPECT_DOUBLE_EQ(d[0], 3e-3 * 1.5);
  EXPECT_DOUBLE_EQ(d[1], 0.0);
  EXPECT_DOUBLE_EQ(d[2], -3e-3 * 1.0);
  EXPECT_NEAR(d[4], 3e-3 * 0.1, 1e-18);
}

TEST(Admittance, MaskedAxesDoNotMove) {
  AdmittanceGains g = unit_gains();
  g.axis_mask = {true, false, true, true, true, true};
  const Vector6d d = admittance_displacement(Wrench({0, 5, 0}, {0, 0, 0}), g);
  EXPECT_TRUE(d.isZero(0.0));
  g.axis_mask.fill(false);
  EXPECT_THROW(g.validate(), std::invalid_argument);
  g = unit_gains();
  g.k_a[2] = -1.0;
  EXPECT_THROW(g.validate(), std::invalid_argument);
}

TEST(KtcStep, TranslatesAndRotatesOnTheLeft) {
  const AdmittanceGains g = unit_gains();
  const Pose x{{0.1, 0.2, 0.3}, UnitQuaternion::from_axis_angle(Eigen::Vector3d::UnitX(), 0.5)};
  const Pose y = ktc_step(x, Wrench({1.5, 0, 0}, {0, 0, 10.5}), g);
  EXPECT_NEAR((y.position - Eigen::Vector3d(0.103, 0.2, 0.3)).norm(), 0.0, 1e-15);
  const UnitQuaternion expected =
      quat_mul(UnitQuaternion::from_axis_angle(Eigen::Vector3d::UnitZ(), 0.03), x.orientation);
  EXPECT_NEAR(angle_between(y.orientation, expected), 0.0, 1e-12);
  // Inside the deadband nothing changes, bit for bit.
  EXPECT_EQ(ktc_step(x, Wrench({0.2, 0, 0}, {0, 0.1, 0}), g), x);
}

TEST(Plant, ExactFirstOrderLag) {
  PlantState s{{}, {{1.0, 0.0, 0.0}, {}}, 0.05};
  for (int k = 0; k < 10; ++k) {
    s = plant_step(s, 0.01);
  }
  EXPECT_NEAR(s.actual.position.x(), 1.0 - std::exp(-0.1 / 0.05), 1e-12);
}

VirtualHuman straight_human(double sat) {
  VirtualHuman h;
  h.waypoints = {{{0, 0, 0}, {}}, {{0.2, 0, 0}, {}}};
  h.force_saturation = sat;
  return h;
}

TEST(Simulation, ProposedReachesGoalWithinForceBudget) {
  const Trajectory log =
      simulate_demonstration(straight_human(12.0), AdmittanceGains::proposed(), {});
  EXPECT_TRUE(log.has_wrench());
  EXPECT_DOUBLE_EQ(log.front().t, 0.0);
  EXPECT_LT((log.back().pose.position - Eigen::Vector3d(0.2, 0, 0)).norm(), 6e-3);
  double fmax = 0.0;
  for (const TrajectorySample& s : log) {
    fmax = std::max(fmax, s.wrench->force.norm());
  }
  EXPECT_LE(fmax, 12.0);
  EXPECT_GT(fmax, 5.0);
}

TEST(Simulation, EndsAtRestAfterHold) {
  const Trajectory log =
      simulate_demonstration(straight_human(12.0), AdmittanceGains::proposed(), {});
  const std::size_t n = log.size();
  const double speed = (log[n - 1].pose.position - log[n - 2].pose.position).norm() / 0.01;
  EXPECT_LT(speed, 1e-3);
}

TEST(Simulation, BaselineNeedsBreakawayForce) {
  TeachSettings s;
  s.max_duration = 5.0;
  // The hand can never exceed the breakaway level, so the tool never moves.
  try {
    simulate_demonstration(straight_human(39.0), BackdriveBaseline{}, s);
    FAIL() << "baseline moved below breakaway";
  } catch (const DemonstrationTimeout& e) {
    EXPECT_EQ(e.waypoints_reached(), 0u);
    EXPECT_EQ(e.partial_log().back().pose, e.partial_log().front().pose);
  }
  const Trajectory log = simulate_demonstration(straight_human(60.0), BackdriveBaseline{}, s);
  double fmax = 0.0;
  for (const TrajectorySample& x : log) {
    fmax = std::max(fmax, x.wrench->force.norm());
  }
  EXPECT_GT(fmax, 40.0);
}

TEST(Simulation, NoiseIsSeededAndOnlyOnMeasurement) {
  TeachSettings s;
  s.force_noise_sigma = 0.3;
  s.seed = 5;
  const VirtualHuman h = straight_human(12.0);
  const Trajectory a = simulate_demonstration(h, AdmittanceGains::proposed(), s);
  const Trajectory b = simulate_demonstration(h, AdmittanceGains::proposed(), s);
  EXPECT_EQ(a, b);
  s.seed = 6;
  EXPECT_NE(simulate_demonstration(h, AdmittanceGains::proposed(), s), a);
  for (const TrajectorySample& x : a) {
    EXPECT_LE(x.wrench->force.norm(), 12.0);  // logged wrench is the applied one
  }
}

TEST(Simulation, ProposedIsSmootherAndFasterThanBaseline) {
  const RunConfig cfg = RunConfig::defaults();
  VirtualHuman native_human = cfg.human;
  native_human.force_saturation = cfg.teach.native_force_saturation;
  native_human.torque_saturation = cfg.teach.native_torque_saturation;
  const Trajectory p = simulate_demonstration(cfg.human, cfg.teach.gains, {});
  const Trajectory n = simulate_demonstration(native_human, cfg.teach.native, {});
  EXPECT_LT(p.duration(), n.duration());
  const metrics::JerkReport jp = metrics::jerk_metrics(p);
  const metrics::JerkReport jn = metrics::jerk_metrics(n);
  EXPECT_LT(jp.mean, jn.mean);
  EXPECT_LT(jp.max, jn.max);
}

TEST(Settings, Validation) {
  TeachSettings s;
  s.rate_hz = 0.0;
  EXPECT_THROW(simulate_demonstration(straight_human(12.0), AdmittanceGains::proposed(), s),
               std::invalid_argument);
  VirtualHuman h = straight_human(12.0);
  h.waypoints.clear();
  EXPECT_THROW(simulate_demonstration(h, AdmittanceGains::proposed(), {}), std::invalid_argument);
  BackdriveBaseline b;
  b.kinetic_force = 50.0;  // above breakaway
  EXPECT_THROW(b.validate(), std::invalid_argument);
}

}  // namespace
}  // namespace lfd::ktc
