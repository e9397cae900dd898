#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "lfd/se3.hpp"

namespace lfd {
namespace {

constexpr double kPi = std::numbers::pi;

TEST(UnitQuaternion, NormalizesAndCanonicalizes) {
  const UnitQuaternion q(-2.0, 0.0, 0.0, 0.0);
  EXPECT_EQ(q, UnitQuaternion::identity());
  const UnitQuaternion r(0.0, -1.0, 0.0, 0.0);
  EXPECT_DOUBLE_EQ(r.x(), 1.0);
  EXPECT_THROW(UnitQuaternion(0, 0, 0, 0), std::invalid_argument);
  EXPECT_THROW(UnitQuaternion(NAN, 0, 0, 0), std::invalid_argument);
}

TEST(UnitQuaternion, HamiltonProduct) {
  const UnitQuaternion i(0, 1, 0, 0);
  const UnitQuaternion j(0, 0, 1, 0);
  const UnitQuaternion k = quat_mul(i, j);
  EXPECT_NEAR(k.z(), 1.0, 1e-15);
  EXPECT_NEAR(k.w(), 0.0, 1e-15);
}

TEST(UnitQuaternion, RotationMatchesAxisAngle) {
  const UnitQuaternion q = UnitQuaternion::from_axis_angle(Eigen::Vector3d::UnitZ(), kPi / 2);
  const Eigen::Vector3d v = q.rotate(Eigen::Vector3d::UnitX());
  EXPECT_NEAR((v - Eigen::Vector3d::UnitY()).norm(), 0.0, 1e-15);
  const UnitQuaternion back = UnitQuaternion::from_rotation_matrix(q.rotation_matrix());
  EXPECT_NEAR(angle_between(q, back), 0.0, 1e-12);
}

TEST(QuatLogExp, RoundTripInsideHalfPi) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 10000; ++i) {
    Eigen::Vector3d v(u(rng), u(rng), u(rng));
    v *= (kPi / 2) * std::abs(u(rng)) / std::max(v.norm(), 1e-12);
    EXPECT_LE((quat_log(quat_exp(v)) - v).norm(), 1e-9);
  }
}

TEST(QuatLogExp, BeyondHalfPiGivesEquivalentRotation) {
  const Eigen::Vector3d v(2.0, 0.0, 0.0);  // |v| in (pi/2, pi)
  const UnitQuaternion q = quat_exp(v);
  EXPECT_NEAR(angle_between(q, quat_exp(quat_log(q))), 0.0, 1e-12);
  EXPECT_LE(quat_log(q).norm(), kPi / 2 + 1e-12);
  EXPECT_THROW(quat_exp(Eigen::Vector3d(4.0, 0.0, 0.0)), std::domain_error);
}

TEST(QuatLogExp, SmallAngles) {
  const Eigen::Vector3d v(1e-12, -2e-12, 0.5e-12);
  EXPECT_LE((quat_log(quat_exp(v)) - v).norm(), 1e-20);
  EXPECT_EQ(quat_log(UnitQuaternion::identity()), Eigen::Vector3d::Zero());
}

TEST(Slerp, ExactEndpointsAndMidpoint) {
  const UnitQuaternion a = UnitQuaternion::from_axis_angle(Eigen::Vector3d::UnitX(), 0.3);
  const UnitQuaternion b = UnitQuaternion::from_axis_angle(Eigen::Vector3d::UnitX(), 1.1);
  EXPECT_EQ(slerp(a, b, 0.0), a);
  EXPECT_EQ(slerp(a, b, 1.0), b);
  EXPECT_NEAR(angle_between(slerp(a, b, 0.5), a), 0.4, 1e-12);
}

TEST(OrientationError, IsFullAngleWorldVector) {
  const UnitQuaternion q = UnitQuaternion::from_axis_angle(Eigen::Vector3d::UnitY(), 0.2);
  const UnitQuaternion g = UnitQuaternion::from_axis_angle(Eigen::Vector3d::UnitY(), 0.7);
  EXPECT_NEAR((orientation_error(g, q) - Eigen::Vector3d(0, 0.5, 0)).norm(), 0.0, 1e-12);
}

TEST(RotationBetween, MapsFromOntoTo) {
  const Eigen::Vector3d from = Eigen::Vector3d(1, 2, 3).normalized();
  const Eigen::Vector3d to = Eigen::Vector3d(-2, 0.5, 1).normalized();
  EXPECT_NEAR((rotation_between(from, to).rotate(from) - to).norm(), 0.0, 1e-12);
  EXPECT_NEAR((rotation_between(from, -from).rotate(from) + from).norm(), 0.0, 1e-12);
  EXPECT_EQ(rotation_between(from, from), UnitQuaternion::identity());
}

TEST(Pose, ComposeAndInverse) {
  const Pose a{{1, 2, 3}, UnitQuaternion::from_axis_angle(Eigen::Vector3d::UnitZ(), 0.4)};
  const Pose b{{-0.5, 0.1, 0.0}, UnitQuaternion::from_axis_angle(Eigen::Vector3d::UnitX(), -1.0)};
  const Pose ab = compose(a, b);
  const Eigen::Vector3d p(0.3, -0.2, 0.9);
  EXPECT_NEAR((ab.transform_point(p) - a.transform_point(b.transform_point(p))).norm(), 0, 1e-12);
  const Pose id = compose(a, a.inverse());
  EXPECT_NEAR(id.position.norm(), 0.0, 1e-12);
  EXPECT_NEAR(angle_between(id.orientation, UnitQuaternion::identity()), 0.0, 1e-12);
}

TEST(Wrench, RejectsNonFinite) {
  EXPECT_THROW(Wrench(Eigen::Vector3d(INFINITY, 0, 0), Eigen::Vector3d::Zero()),
               std::invalid_argument);
  Eigen::Matrix<double, 6, 1> v;
  v << 1, 2, 3, 4, 5, 6;
  EXPECT_EQ(Wrench::from_vector(v).as_vector(), v);
}

}  // namespace
}  // namespace lfd
