#include "lfd/se3.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace lfd {

namespace {

// Unit inputs renormalized again would drift in the last bit; leave them be
// so that serialized quaternions read back bit-identically.
constexpr double kNormSlack = 4.0 * std::numeric_limits<double>::epsilon();

}  // namespace

UnitQuaternion::UnitQuaternion(double w, double x, double y, double z) {
  const double n = std::sqrt(w * w + x * x + y * y + z * z);
  if (!std::isfinite(n) || n == 0.0) {
    throw std::invalid_argument("quaternion must be finite and nonzero");
  }
  if (std::abs(n - 1.0) > kNormSlack) {
    w /= n;
    x /= n;
    y /= n;
    z /= n;
  }
  bool flip = w < 0.0;
  if (w == 0.0) {
    flip = x < 0.0 || (x == 0.0 && (y < 0.0 || (y == 0.0 && z < 0.0)));
  }
  if (flip) {
    w = -w;
    x = -x;
    y = -y;
    z = -z;
  }
  // -0.0 and 0.0 compare equal but serialize differently.
  w_ = w + 0.0;
  x_ = x + 0.0;
  y_ = y + 0.0;
  z_ = z + 0.0;
}

UnitQuaternion UnitQuaternion::from_axis_angle(const Eigen::Vector3d& axis, double angle) {
  const double n = axis.norm();
  if (!(n > 0.0)) {
    throw std::invalid_argument("rotation axis must be nonzero");
  }
  const Eigen::Vector3d u = axis / n;
  const double s = std::sin(0.5 * angle);
  return {std::cos(0.5 * angle), u.x() * s, u.y() * s, u.z() * s};
}

UnitQuaternion UnitQuaternion::from_rotation_matrix(const Eigen::Matrix3d& r) {
  const Eigen::Quaterniond q(r);
  return {q.w(), q.x(), q.y(), q.z()};
}

double UnitQuaternion::norm() const {
  return std::sqrt(w_ * w_ + x_ * x_ + y_ * y_ + z_ * z_);
}

Eigen::Matrix3d UnitQuaternion::rotation_matrix() const {
  return Eigen::Quaterniond(w_, x_, y_, z_).toRotationMatrix();
}

Eigen::Vector3d UnitQuaternion::rotate(const Eigen::Vector3d& v) const {
  const Eigen::Vector3d u = vec();
  const Eigen::Vector3d t = 2.0 * u.cross(v);
  return v + w_ * t + u.cross(t);
}

UnitQuaternion quat_mul(const UnitQuaternion& a, const UnitQuaternion& b) {
  return {a.w() * b.w() - a.x() * b.x() - a.y() * b.y() - a.z() * b.z(),
          a.w() * b.x() + a.x() * b.w() + a.y() * b.z() - a.z() * b.y(),
          a.w() * b.y() - a.x() * b.z() + a.y() * b.w() + a.z() * b.x(),
          a.w() * b.z() + a.x() * b.y() - a.y() * b.x() + a.z() * b.w()};
}

UnitQuaternion quat_conj(const UnitQuaternion& q) {
  return {q.w(), -q.x(), -q.y(), -q.z()};
}

Eigen::Vector3d quat_log(const UnitQuaternion& q) {
  const Eigen::Vector3d v = q.vec();
  const double n = v.norm();
  if (n < 1e-8) {
    // atan2(n, w) / n = 1/w + O(n^2)
    return v / q.w();
  }
  return v * (std::atan2(n, q.w()) / n);
}

UnitQuaternion quat_exp(const Eigen::Vector3d& v) {
  const double theta = v.norm();
  if (!(theta < std::numbers::pi)) {
    throw std::domain_error("quat_exp: |v| must be < pi");
  }
  if (theta < 1e-8) {
    const double k = 1.0 - theta * theta / 6.0;
    return {1.0 - 0.5 * theta * theta, v.x() * k, v.y() * k, v.z() * k};
  }
  const double k = std::sin(theta) / theta;
  return {std::cos(theta), v.x() * k, v.y() * k, v.z() * k};
}

UnitQuaternion slerp(const UnitQuaternion& a, const UnitQuaternion& b, double u) {
  if (u == 0.0) {
    return a;
  }
  if (u == 1.0) {
    return b;
  }
  const UnitQuaternion rel = quat_mul(quat_conj(a), b);
  return quat_mul(a, quat_exp(u * quat_log(rel)));
}

Eigen::Vector3d orientation_error(const UnitQuaternion& goal, const UnitQuaternion& q) {
  return 2.0 * quat_log(quat_mul(goal, quat_conj(q)));
}

double angle_between(const UnitQuaternion& a, const UnitQuaternion& b) {
  return 2.0 * quat_log(quat_mul(a, quat_conj(b))).norm();
}

UnitQuaternion rotation_between(const Eigen::Vector3d& from, const Eigen::Vector3d& to) {
  const Eigen::Vector3d f = from.normalized();
  const Eigen::Vector3d t = to.normalized();
  const double c = f.dot(t);
  if (c < -1.0 + 1e-12) {
    // Antiparallel: any perpendicular axis works; pick the most stable one.
    Eigen::Vector3d axis = f.cross(Eigen::Vector3d::UnitX());
    if (axis.norm() < 1e-6) {
      axis = f.cross(Eigen::Vector3d::UnitY());
    }
    return UnitQuaternion::from_axis_angle(axis, std::numbers::pi);
  }
  const Eigen::Vector3d axis = f.cross(t);
  // (1 + c, axis) is twice the half-angle quaternion.
  return {1.0 + c, axis.x(), axis.y(), axis.z()};
}

Pose Pose::inverse() const {
  const UnitQuaternion qi = quat_conj(orientation);
  return {-qi.rotate(position), qi};
}

Pose compose(const Pose& a, const Pose& b) {
  return {a.position + a.orientation.rotate(b.position),
          quat_mul(a.orientation, b.orientation)};
}

Wrench::Wrench(const Eigen::Vector3d& f, const Eigen::Vector3d& t) : force(f), torque(t) {
  if (!force.allFinite() || !torque.allFinite()) {
    throw std::invalid_argument("wrench components must be finite");
  }
}

Eigen::Matrix<double, 6, 1> Wrench::as_vector() const {
  Eigen::Matrix<double, 6, 1> v;
  v << force, torque;
  return v;
}

Wrench Wrench::from_vector(const Eigen::Matrix<double, 6, 1>& v) {
  return {v.head<3>(), v.tail<3>()};
}

}  // namespace lfd
