#include "lfd/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lfd {

Trajectory::Trajectory(std::vector<TrajectorySample> samples) {
  samples_.reserve(samples.size());
  for (auto& s : samples) {
    push_back(std::move(s));
  }
}

void Trajectory::push_back(TrajectorySample sample) {
  if (!std::isfinite(sample.t) || !sample.pose.position.allFinite()) {
    throw std::invalid_argument("trajectory sample must be finite");
  }
  if (!samples_.empty()) {
    if (!(sample.t > samples_.back().t)) {
      throw std::invalid_argument("trajectory timestamps must be strictly increasing");
    }
    if (sample.wrench.has_value() != samples_.back().wrench.has_value()) {
      throw std::invalid_argument("wrench must be present on all samples or none");
    }
  }
  samples_.push_back(std::move(sample));
}

std::vector<double> Trajectory::times() const {
  std::vector<double> t(samples_.size());
  std::transform(samples_.begin(), samples_.end(), t.begin(),
                 [](const TrajectorySample& s) { return s.t; });
  return t;
}

Eigen::MatrixXd Trajectory::positions() const {
  Eigen::MatrixXd p(static_cast<Eigen::Index>(samples_.size()), 3);
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    p.row(static_cast<Eigen::Index>(i)) = samples_[i].pose.position.transpose();
  }
  return p;
}

TrajectorySample Trajectory::at(double t) const {
  if (samples_.empty()) {
    throw std::invalid_argument("cannot interpolate an empty trajectory");
  }
  if (t < samples_.front().t || t > samples_.back().t) {
    throw std::out_of_range("interpolation time outside trajectory span");
  }
  const auto hi = std::lower_bound(samples_.begin(), samples_.end(), t,
                                   [](const TrajectorySample& s, double v) { return s.t < v; });
  if (hi->t == t) {
    return *hi;
  }
  const TrajectorySample& b = *hi;
  const TrajectorySample& a = *(hi - 1);
  const double u = (t - a.t) / (b.t - a.t);
  TrajectorySample out;
  out.t = t;
  out.pose.position = a.pose.position + u * (b.pose.position - a.pose.position);
  out.pose.orientation = slerp(a.pose.orientation, b.pose.orientation, u);
  if (a.wrench && b.wrench) {
    out.wrench = Wrench(a.wrench->force + u * (b.wrench->force - a.wrench->force),
                        a.wrench->torque + u * (b.wrench->torque - a.wrench->torque));
  }
  return out;
}

Trajectory resample_trajectory(const Trajectory& traj, double dt) {
  if (traj.empty()) {
    throw std::invalid_argument("resample_trajectory: empty trajectory");
  }
  if (!(dt > 0.0)) {
    throw std::invalid_argument("resample_trajectory: dt must be positive");
  }
  const double t0 = traj.front().t;
  const double t1 = traj.back().t;
  const double span = t1 - t0;
  if (span < dt * (1.0 - 1e-9)) {
    throw std::invalid_argument("resample_trajectory: trajectory spans less than dt");
  }
  const auto steps = static_cast<long>(std::floor(span / dt + 1e-9));
  Trajectory out;
  for (long k = 0; k <= steps; ++k) {
    double t = t0 + static_cast<double>(k) * dt;
    if (k == steps && std::abs(t - t1) <= 1e-9 * dt) {
      t = t1;
    }
    if (t > t1) {
      t = t1;
    }
    out.push_back(traj.at(t));
  }
  if (out.back().t < t1) {
    out.push_back(traj.back());
  }
  return out;
}

bool is_uniformly_sampled(const Trajectory& traj, double rel_tol) {
  if (traj.size() < 3) {
    return true;
  }
  const double mean = traj.duration() / static_cast<double>(traj.size() - 1);
  for (std::size_t i = 1; i < traj.size(); ++i) {
    if (std::abs((traj[i].t - traj[i - 1].t) - mean) > rel_tol * mean) {
      return false;
    }
  }
  return true;
}

Eigen::MatrixXd angular_velocity(const Trajectory& traj) {
  const auto n = static_cast<Eigen::Index>(traj.size());
  if (n < 2) {
    throw std::invalid_argument("angular_velocity: need at least two samples");
  }
  Eigen::MatrixXd w(n, 3);
  // Local chart around q_i: r(q) = 2 log(q * conj(q_i)); dr/dt at r = 0 is the
  // world-frame angular velocity, so the usual stencils apply to r.
  auto chart = [&](Eigen::Index i, Eigen::Index j) {
    return orientation_error(traj[j].pose.orientation, traj[i].pose.orientation);
  };
  if (n == 2) {
    const Eigen::Vector3d r = chart(0, 1) / (traj[1].t - traj[0].t);
    w.row(0) = r.transpose();
    w.row(1) = r.transpose();
    return w;
  }
  {
    const double h1 = traj[1].t - traj[0].t;
    const double h2 = traj[2].t - traj[1].t;
    w.row(0) = ((h1 + h2) / (h1 * h2) * chart(0, 1) - h1 / (h2 * (h1 + h2)) * chart(0, 2))
                   .transpose();
  }
  for (Eigen::Index i = 1; i + 1 < n; ++i) {
    const double hm = traj[i].t - traj[i - 1].t;
    const double hp = traj[i + 1].t - traj[i].t;
    w.row(i) = (-hp / (hm * (hm + hp)) * chart(i, i - 1) + hm / (hp * (hm + hp)) * chart(i, i + 1))
                   .transpose();
  }
  {
    const double h1 = traj[n - 1].t - traj[n - 2].t;
    const double h2 = traj[n - 2].t - traj[n - 3].t;
    w.row(n - 1) = (-(h1 + h2) / (h1 * h2) * chart(n - 1, n - 2) +
                    h1 / (h2 * (h1 + h2)) * chart(n - 1, n - 3))
                       .transpose();
  }
  return w;
}

}  // namespace lfd
