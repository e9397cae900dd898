#pragma once

// Six-degree-of-freedom dynamic movement primitives.
//
// Translation, per axis:
//   tau * s'  = -alpha_s * s
//   tau * z'  = alpha_z * (beta_z * (g - y) - z) + f(s)
//   tau * y'  = z
// Orientation (quaternion q, scaled angular velocity eta = tau * omega):
//   tau * eta' = alpha_z * (beta_z * 2 log(g * conj(q)) - eta) + f_rot(s)
//   q' = 1/2 * omega * q, integrated as q <- quat_exp(omega * dt / 2) * q
// The forcing term is a normalized Gaussian mixture in the phase,
//   f(s) = sum_i w_i psi_i(s) / sum_i psi_i(s),  psi_i = exp(-h_i (s - c_i)^2),
// optionally multiplied by s (phase gating) so it vanishes as s -> 0.

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lfd/trajectory.hpp"

namespace lfd::dmp {

enum class GateMode { kPhaseGated, kLiteral };

const char* to_string(GateMode mode);
// Accepts "phase-gated" and "literal"; throws std::invalid_argument otherwise.
GateMode gate_mode_from_string(const std::string& name);

struct CanonicalSystem {
  double alpha_s = 25.0 / 3.0;
  double tau = 1.0;
  double s = 1.0;
};

// Exact exponential update s * exp(-alpha_s * dt / tau). Throws for dt < 0.
double step_canonical(const CanonicalSystem& cs, double dt);

// Closed-form phase at time t after the start.
double phase_at(double alpha_s, double tau, double t);

struct TransformParams {
  double alpha_z = 25.0;
  double beta_z = 25.0 / 4.0;

  static TransformParams critically_damped(double alpha_z) { return {alpha_z, alpha_z / 4.0}; }
};

// Basis centers and widths shared by all forcing terms of one primitive.
struct BasisLayout {
  std::vector<double> centers;
  std::vector<double> widths;

  std::size_t size() const noexcept { return centers.size(); }

  // Centers equally spaced in time, c_i = exp(-alpha_s (i - 1) / (N - 1)), and
  // h_i = 2 / (c_{i+1} - c_i)^2, h_N = h_{N-1}: neighbouring activations
  // overlap at exp(-2).
  static BasisLayout time_spaced(int n_basis, double alpha_s);

  // Throws std::invalid_argument unless N >= 2, centers strictly decrease
  // and widths are positive.
  void validate() const;
};

// psi_i(s) for every basis.
Eigen::VectorXd basis_activations(const BasisLayout& layout, double s);

struct ForcingValue {
  double value = 0.0;
  bool underflow = false;  // every psi_i(s) was zero; value forced to 0
};

// Normalized RBF mixture at phase s in (0, 1], times s when phase-gated.
ForcingValue eval_forcing(const BasisLayout& layout, std::span<const double> weights, double s,
                          GateMode gate);

// One row per demonstration sample, resampled on a uniform grid, with the
// derivative series the forcing targets are built from.
struct DemonstrationData {
  Trajectory trajectory;
  double dt = 0.0;
  Eigen::MatrixXd velocity;              // n x 3, m/s
  Eigen::MatrixXd acceleration;          // n x 3, m/s^2
  Eigen::MatrixXd angular_velocity;      // n x 3, rad/s (world frame)
  Eigen::MatrixXd angular_acceleration;  // n x 3, rad/s^2
};

// Resamples to a uniform grid whose step is the closest to `dt` that divides
// the span exactly, differentiates, and smooths each derivative series with
// a 5-sample centered moving average.
DemonstrationData make_demonstration_data(const Trajectory& demo, double dt);

// Forcing targets, one row per sample: columns 0..2 translation, 3..5
// rotation. In phase-gated mode the stored value is f_target / max(s, 1e-8).
struct ForcingTargets {
  std::vector<double> phases;
  Eigen::MatrixXd values;
  GateMode gate = GateMode::kPhaseGated;
};

class NoInformationError : public std::runtime_error {
 public:
  NoInformationError() : std::runtime_error("no information to fit") {}
};

// f_target = tau^2 a - alpha_z (beta_z (g - y) - tau v), with the rotation
// error 2 log(g * conj(q)) and angular rates for the rotational axes; g is
// the final demonstration pose and tau the demonstration duration.
// Throws NoInformationError when the demonstration never leaves its start.
ForcingTargets compute_forcing_targets(const DemonstrationData& demo, const TransformParams& tp,
                                       const CanonicalSystem& cs, GateMode gate);

struct LwrResult {
  Eigen::MatrixXd weights;               // axes x N
  std::vector<std::size_t> unsupported;  // bases whose weight was forced to 0
};

// Per-basis weighted least squares on stored targets:
//   w_i = sum_k psi_i(s_k) x_k^2 F_k / sum_k psi_i(s_k) x_k^2,
// x = s when gated (F = f / s, so this is sum psi x f / sum psi x^2) and
// x = 1 in literal mode. A basis whose denominator is below 1e-12 gets weight
// 0 and is listed in `unsupported`.
LwrResult fit_lwr(std::span<const double> phases, const Eigen::MatrixXd& values,
                  const BasisLayout& layout, GateMode gate);

struct DmpConfig {
  int n_basis = 50;
  double alpha_z = 25.0;
  double beta_z = 25.0 / 4.0;
  double alpha_s = 25.0 / 3.0;
  GateMode gate = GateMode::kPhaseGated;
  double dt = 1e-3;
};

struct PoseDmp {
  CanonicalSystem canonical;  // tau = demonstration duration
  TransformParams transform;
  BasisLayout basis;
  Eigen::MatrixXd weights_position;  // 3 x N
  Eigen::MatrixXd weights_rotation;  // 3 x N
  Pose demo_start;
  Pose demo_goal;
  GateMode gate = GateMode::kPhaseGated;

  bool operator==(const PoseDmp& other) const;
};

// Resample, differentiate, compute targets and fit all six axes. A
// demonstration that never moves yields all-zero weights.
PoseDmp fit_pose_dmp(const Trajectory& demo, const DmpConfig& config);

class RolloutError : public std::runtime_error {
 public:
  RolloutError(std::size_t step, const std::string& what)
      : std::runtime_error(what), step_(step) {}
  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

// Integrates the primitive from `start` toward `goal` over [0, 1.5 tau] with
// explicit Euler on (z, y), closed-form phase and exponential-map quaternion
// updates. Requires tau > 0, dt > 0 and dt <= tau / 100
// (std::invalid_argument). Throws RolloutError at the first non-finite state.
Trajectory rollout(const PoseDmp& dmp, const Pose& start, const Pose& goal, double tau,
                   double dt);

}  // namespace lfd::dmp
