#pragma once

// Shared fixtures for the unit and acceptance tests.

#include <array>
#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "lfd/trajectory.hpp"

namespace lfd::testing {

// Minimum-jerk blend 10u^3 - 15u^4 + 6u^5 on [0, 1].
inline double min_jerk(double u) { return u * u * u * (10.0 + u * (-15.0 + 6.0 * u)); }

// Natural cubic spline through equally spaced knots at b = 0, 1/(m-1), ..., 1.
class NaturalSpline {
 public:
  explicit NaturalSpline(std::vector<Eigen::VectorXd> knots) : y_(std::move(knots)) {
    const std::size_t m = y_.size();
    const double h = 1.0 / static_cast<double>(m - 1);
    const auto dim = y_.front().size();
    m2_.assign(m, Eigen::VectorXd::Zero(dim));
    // Thomas algorithm on the interior second derivatives.
    std::vector<double> c(m, 0.0);
    std::vector<Eigen::VectorXd> d(m, Eigen::VectorXd::Zero(dim));
    for (std::size_t i = 1; i + 1 < m; ++i) {
      const Eigen::VectorXd rhs = 6.0 / (h * h) * (y_[i + 1] - 2.0 * y_[i] + y_[i - 1]);
      const double denom = 4.0 - c[i - 1];
      c[i] = 1.0 / denom;
      d[i] = (rhs - d[i - 1]) / denom;
    }
    for (std::size_t i = m - 2; i >= 1; --i) {
      m2_[i] = d[i] - c[i] * m2_[i + 1];
    }
    h_ = h;
  }

  Eigen::VectorXd operator()(double b) const {
    const std::size_t m = y_.size();
    auto i = static_cast<std::size_t>(std::floor(b / h_));
    i = std::min(i, m - 2);
    const double a = (static_cast<double>(i + 1) * h_ - b) / h_;
    const double bb = 1.0 - a;
    return a * y_[i] + bb * y_[i + 1] +
           ((a * a * a - a) * m2_[i] + (bb * bb * bb - bb) * m2_[i + 1]) * (h_ * h_) / 6.0;
  }

 private:
  std::vector<Eigen::VectorXd> y_;
  std::vector<Eigen::VectorXd> m2_;
  double h_ = 1.0;
};

// Six-dimensional demonstration: a spline through five pose waypoints
// (position plus full-angle rotation vector), timed by a minimum-jerk
// profile so the motion starts and ends at rest.
inline Trajectory spline_demo(double duration, double dt) {
  std::vector<Eigen::VectorXd> knots;
  const std::array<std::array<double, 6>, 5> wp{{{0.40, 0.00, 0.30, 0.0, 0.0, 0.0},
                                                 {0.46, 0.08, 0.26, 0.2, -0.1, 0.3},
                                                 {0.55, 0.05, 0.20, 0.3, 0.1, 0.6},
                                                 {0.58, -0.06, 0.17, 0.1, 0.2, 0.8},
                                                 {0.52, -0.10, 0.12, 0.0, 0.3, 0.9}}};
  for (const auto& w : wp) {
    knots.push_back(Eigen::Map<const Eigen::VectorXd>(w.data(), 6));
  }
  const NaturalSpline spline(knots);
  Trajectory demo;
  const auto n = static_cast<int>(std::llround(duration / dt));
  for (int k = 0; k <= n; ++k) {
    const double t = k * dt;
    const Eigen::VectorXd v = spline(min_jerk(t / duration));
    demo.push_back({t, {v.head<3>(), quat_exp(0.5 * v.tail<3>())}, std::nullopt});
  }
  return demo;
}

// Straight-line minimum-jerk move of length d along x over T seconds.
inline Trajectory quintic_line(double d, double T, double dt) {
  Trajectory traj;
  const auto n = static_cast<int>(std::llround(T / dt));
  for (int k = 0; k <= n; ++k) {
    const double t = k * dt;
    traj.push_back({t, {Eigen::Vector3d(d * min_jerk(t / T), 0.0, 0.0), {}}, std::nullopt});
  }
  return traj;
}

// Position and orientation RMSE of `rollout` against `demo` at the demo's
// timestamps (m, rad).
inline std::pair<double, double> tracking_rmse(const Trajectory& demo, const Trajectory& rollout) {
  double se = 0.0;
  double so = 0.0;
  for (const TrajectorySample& s : demo) {
    const TrajectorySample r = rollout.at(s.t);
    se += (r.pose.position - s.pose.position).squaredNorm();
    const double a = angle_between(r.pose.orientation, s.pose.orientation);
    so += a * a;
  }
  const auto n = static_cast<double>(demo.size());
  return {std::sqrt(se / n), std::sqrt(so / n)};
}

}  // namespace lfd::testing
