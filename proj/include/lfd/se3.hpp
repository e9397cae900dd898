#pragma once

// Rigid-body primitives shared by every module.
//
// Conventions (used everywhere, never mixed):
//  * quaternions are stored (w, x, y, z), Hamilton product, and kept on the
//    w >= 0 hemisphere; when w == 0 the first nonzero vector component is
//    made positive so every rotation has exactly one representation;
//  * log/exp use the half-angle convention: log(q) = (theta/2) * u for
//    q = (cos(theta/2), u sin(theta/2)); a full-angle rotation vector is
//    therefore 2 * log(q);
//  * angular velocities and orientation errors live in the world frame;
//  * SI units: meters, seconds, newtons, radians.

#include <Eigen/Dense>

namespace lfd {

class UnitQuaternion {
 public:
  UnitQuaternion() = default;

  // Normalizes and canonicalizes. Throws std::invalid_argument for a zero or
  // non-finite input.
  UnitQuaternion(double w, double x, double y, double z);

  static UnitQuaternion identity() { return {}; }
  static UnitQuaternion from_axis_angle(const Eigen::Vector3d& axis, double angle);
  static UnitQuaternion from_rotation_matrix(const Eigen::Matrix3d& r);

  double w() const noexcept { return w_; }
  double x() const noexcept { return x_; }
  double y() const noexcept { return y_; }
  double z() const noexcept { return z_; }
  Eigen::Vector3d vec() const { return {x_, y_, z_}; }
  double norm() const;

  Eigen::Matrix3d rotation_matrix() const;
  Eigen::Vector3d rotate(const Eigen::Vector3d& v) const;

  bool operator==(const UnitQuaternion&) const = default;

 private:
  double w_ = 1.0;
  double x_ = 0.0;
  double y_ = 0.0;
  double z_ = 0.0;
};

UnitQuaternion quat_mul(const UnitQuaternion& a, const UnitQuaternion& b);
UnitQuaternion quat_conj(const UnitQuaternion& q);

// Half-angle logarithm; the result has norm <= pi/2 on the canonical
// hemisphere.
Eigen::Vector3d quat_log(const UnitQuaternion& q);

// Inverse of quat_log. Requires |v| < pi (std::domain_error otherwise). For
// pi/2 < |v| < pi the canonical result represents the same rotation, so
// quat_log returns the equivalent shorter vector.
UnitQuaternion quat_exp(const Eigen::Vector3d& v);

// Shortest-path spherical interpolation; returns a at u == 0 and b at u == 1
// exactly.
UnitQuaternion slerp(const UnitQuaternion& a, const UnitQuaternion& b, double u);

// Full-angle world-frame rotation vector taking q to goal: 2 log(goal * conj(q)).
Eigen::Vector3d orientation_error(const UnitQuaternion& goal, const UnitQuaternion& q);

// Rotation angle between two orientations, in [0, pi].
double angle_between(const UnitQuaternion& a, const UnitQuaternion& b);

// Minimal rotation taking unit vector `from` onto unit vector `to`.
UnitQuaternion rotation_between(const Eigen::Vector3d& from, const Eigen::Vector3d& to);

struct Pose {
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  UnitQuaternion orientation;

  Eigen::Vector3d transform_point(const Eigen::Vector3d& p) const {
    return position + orientation.rotate(p);
  }
  Eigen::Vector3d transform_vector(const Eigen::Vector3d& v) const {
    return orientation.rotate(v);
  }
  Pose inverse() const;

  bool operator==(const Pose&) const = default;
};

// a * b: express b (given in a's frame) in a's parent frame.
Pose compose(const Pose& a, const Pose& b);

struct Wrench {
  Eigen::Vector3d force = Eigen::Vector3d::Zero();
  Eigen::Vector3d torque = Eigen::Vector3d::Zero();

  Wrench() = default;
  // Throws std::invalid_argument on non-finite components.
  Wrench(const Eigen::Vector3d& f, const Eigen::Vector3d& t);

  Eigen::Matrix<double, 6, 1> as_vector() const;
  static Wrench from_vector(const Eigen::Matrix<double, 6, 1>& v);

  bool operator==(const Wrench&) const = default;
};

}  // namespace lfd
