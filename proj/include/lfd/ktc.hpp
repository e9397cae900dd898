#pragma once

// Admittance kinesthetic teaching on a position-controlled robot:
//   x_c[k+1] = x_r[k] + K_s^-1 f[k] + K_a f[k]
// followed by a first-order tracking lag from x_c to the actual pose x_r.
// A virtual human drags the tool along a waypoint path through a saturated
// spring-damper grip so demonstrations can be generated reproducibly.

#include <array>
#include <cstdint>
#include <stdexcept>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "lfd/trajectory.hpp"

namespace lfd::ktc {

using Vector6d = Eigen::Matrix<double, 6, 1>;

// Per-axis diagonal gains; axes 0..2 translate (m/N), 3..5 rotate (rad/N·m).
// k_a is a per-tick displacement, so it is tied to the control rate.
struct AdmittanceGains {
  Vector6d k_s_inv = Vector6d::Zero();
  Vector6d k_a = Vector6d::Zero();
  Vector6d deadband = Vector6d::Zero();
  std::array<bool, 6> axis_mask{true, true, true, true, true, true};

  // Throws std::invalid_argument for negative or non-finite entries or when
  // every axis is masked off.
  void validate() const;

  // Compliant defaults used for the "proposed" controller.
  static AdmittanceGains proposed();
};

// Commanded displacement for one tick: zero inside the deadband or on a
// masked axis, otherwise (k_s_inv + k_a) * (f - sign(f) * deadband).
Vector6d admittance_displacement(const Wrench& f, const AdmittanceGains& gains);

// x_r shifted by the admittance displacement; rotation applied on the left
// as quat_exp(dtheta / 2).
Pose ktc_step(const Pose& x_r, const Wrench& f, const AdmittanceGains& gains);

struct PlantState {
  Pose actual;     // x_r
  Pose commanded;  // x_c
  double time_constant = 0.05;
};

// Exact first-order response over dt: the actual pose moves the fraction
// 1 - exp(-dt / T) toward the command (slerp for orientation).
PlantState plant_step(const PlantState& state, double dt);

// High-friction back-drive stand-in for a conventional teaching mode. A
// channel (force or torque) stays stuck until its norm exceeds the breakaway
// level, then slides with displacement gain * (|f| - kinetic) along f until
// the norm drops below the kinetic level.
struct BackdriveBaseline {
  double breakaway_force = 40.0;
  double kinetic_force = 20.0;
  double force_gain = 1e-3;  // m/N per tick
  double breakaway_torque = 4.0;
  double kinetic_torque = 2.0;
  double torque_gain = 8e-2;  // rad/(N·m) per tick

  void validate() const;
};

using TeachingController = std::variant<AdmittanceGains, BackdriveBaseline>;

struct VirtualHuman {
  std::vector<Pose> waypoints;  // first entry is the start pose
  double grip_stiffness = 8000.0;        // N/m
  double grip_damping = 10.0;            // N·s/m
  double force_saturation = 12.0;        // N
  double grip_rot_stiffness = 100.0;     // N·m/rad
  double grip_rot_damping = 1.0;         // N·m·s/rad
  double torque_saturation = 3.0;        // N·m
  double max_speed = 0.2;                // m/s, unloaded hand
  double effort_force = 15.0;            // N, hand speed halves at this load
  double max_angular_speed = 1.0;        // rad/s, unloaded hand
  double speed_time_constant = 0.3;      // s, hand speed smoothing
  double lead_limit = 0.03;              // m, hand never leads the tool further
  double capture_radius = 0.006;         // m
  double capture_angle = 0.05;           // rad
  double hold_time = 0.5;                // s, hand rests on the last waypoint

  void validate() const;
};

struct TeachSettings {
  double rate_hz = 100.0;
  double max_duration = 120.0;  // s
  double plant_time_constant = 0.05;
  double force_noise_sigma = 0.0;   // N, on the measured wrench
  double torque_noise_sigma = 0.0;  // N·m
  std::uint64_t seed = 0;

  void validate() const;
};

class DemonstrationTimeout : public std::runtime_error {
 public:
  DemonstrationTimeout(Trajectory partial, std::size_t reached)
      : std::runtime_error("demonstration timed out before the final waypoint"),
        partial_(std::move(partial)),
        reached_(reached) {}
  const Trajectory& partial_log() const noexcept { return partial_; }
  std::size_t waypoints_reached() const noexcept { return reached_; }

 private:
  Trajectory partial_;
  std::size_t reached_;
};

// Runs the teaching loop at the control rate. Each tick the hand reference
// advances along the path, the grip wrench is applied (and logged), the
// controller maps the measured (possibly noisy) wrench to a command and the
// plant tracks it. A waypoint counts as reached inside the capture radius
// and angle; the run ends at the last one. The log holds the actual pose and
// the applied wrench per tick, starting at t = 0.
Trajectory simulate_demonstration(const VirtualHuman& human, const TeachingController& controller,
                                  const TeachSettings& settings);

}  // namespace lfd::ktc
