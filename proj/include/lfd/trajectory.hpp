#pragma once

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "lfd/se3.hpp"

namespace lfd {

struct TrajectorySample {
  double t = 0.0;
  Pose pose;
  std::optional<Wrench> wrench;

  bool operator==(const TrajectorySample&) const = default;
};

// Time-ordered pose samples. Timestamps are finite and strictly increasing;
// either every sample carries a wrench or none does.
class Trajectory {
 public:
  Trajectory() = default;
  explicit Trajectory(std::vector<TrajectorySample> samples);

  // Throws std::invalid_argument when the new sample breaks an invariant.
  void push_back(TrajectorySample sample);

  std::size_t size() const noexcept { return samples_.size(); }
  bool empty() const noexcept { return samples_.empty(); }
  const TrajectorySample& operator[](std::size_t i) const { return samples_[i]; }
  const TrajectorySample& front() const { return samples_.front(); }
  const TrajectorySample& back() const { return samples_.back(); }
  auto begin() const noexcept { return samples_.begin(); }
  auto end() const noexcept { return samples_.end(); }
  const std::vector<TrajectorySample>& samples() const noexcept { return samples_; }

  bool has_wrench() const noexcept { return !samples_.empty() && samples_.front().wrench.has_value(); }
  double duration() const noexcept { return samples_.empty() ? 0.0 : samples_.back().t - samples_.front().t; }

  std::vector<double> times() const;
  // n x 3 matrix of positions, one row per sample.
  Eigen::MatrixXd positions() const;

  // Linear position/wrench and spherical orientation interpolation. Returns
  // the stored sample exactly when t hits a timestamp. t must lie inside
  // [front().t, back().t].
  TrajectorySample at(double t) const;

  bool operator==(const Trajectory&) const = default;

 private:
  std::vector<TrajectorySample> samples_;
};

// Uniform grid t0, t0 + dt, ...; the final timestamp is kept exactly (it
// replaces the last grid point when they agree to 1e-9 dt, otherwise it is
// appended). Throws std::invalid_argument for an empty trajectory, dt <= 0
// or a span shorter than dt.
Trajectory resample_trajectory(const Trajectory& traj, double dt);

// True when consecutive steps agree to `rel_tol` of the mean step.
bool is_uniformly_sampled(const Trajectory& traj, double rel_tol = 1e-6);

// World-frame angular velocity of the orientation series (n x 3), from
// three-point stencils on log-coordinates centered at each sample.
Eigen::MatrixXd angular_velocity(const Trajectory& traj);

}  // namespace lfd
