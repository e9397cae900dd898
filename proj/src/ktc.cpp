#include "lfd/ktc.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace lfd::ktc {

namespace {

void require_finite_nonneg(double v, const char* what) {
  if (!std::isfinite(v) || v < 0.0) {
    throw std::invalid_argument(std::string(what) + " must be finite and non-negative");
  }
}

void require_positive(double v, const char* what) {
  if (!std::isfinite(v) || !(v > 0.0)) {
    throw std::invalid_argument(std::string(what) + " must be positive");
  }
}

// Clamps the norm to `limit`; the rescale can round a few ulps high, so it is
// nudged down until the bound holds exactly.
Eigen::Vector3d saturate(const Eigen::Vector3d& v, double limit) {
  const double n = v.norm();
  if (!(n > limit)) {
    return v;
  }
  Eigen::Vector3d out = v * (limit / n);
  double scale = 1.0;
  while (out.norm() > limit) {
    scale = std::nextafter(scale, 0.0);
    out = v * (scale * limit / n);
  }
  return out;
}

Pose displace(const Pose& x, const Vector6d& d) {
  Pose out = x;
  out.position += d.head<3>();
  const Eigen::Vector3d rot = d.tail<3>();
  if (!rot.isZero(0.0)) {
    out.orientation = quat_mul(quat_exp(0.5 * rot), x.orientation);
  }
  return out;
}

// Stick-slip state of the back-drive baseline, one flag per channel.
class Backdrive {
 public:
  explicit Backdrive(const BackdriveBaseline& p) : p_(p) {}

  Vector6d displacement(const Wrench& f) {
    Vector6d d = Vector6d::Zero();
    d.head<3>() = channel(f.force, p_.breakaway_force, p_.kinetic_force, p_.force_gain,
                          force_sliding_);
    d.tail<3>() = channel(f.torque, p_.breakaway_torque, p_.kinetic_torque, p_.torque_gain,
                          torque_sliding_);
    return d;
  }

 private:
  static Eigen::Vector3d channel(const Eigen::Vector3d& f, double breakaway, double kinetic,
                                 double gain, bool& sliding) {
    const double n = f.norm();
    if (sliding && n < kinetic) {
      sliding = false;
    } else if (!sliding && n > breakaway) {
      sliding = true;
    }
    if (!sliding || n <= kinetic) {
      return Eigen::Vector3d::Zero();
    }
    return gain * (n - kinetic) * (f / n);
  }

  BackdriveBaseline p_;
  bool force_sliding_ = false;
  bool torque_sliding_ = false;
};

}  // namespace

void AdmittanceGains::validate() const {
  bool any = false;
  for (int i = 0; i < 6; ++i) {
    require_finite_nonneg(k_s_inv[i], "k_s_inv");
    require_finite_nonneg(k_a[i], "k_a");
    require_finite_nonneg(deadband[i], "deadband");
    any = any || axis_mask[static_cast<std::size_t>(i)];
  }
  if (!any) {
    throw std::invalid_argument("at least one admittance axis must be enabled");
  }
}

AdmittanceGains AdmittanceGains::proposed() {
  AdmittanceGains g;
  g.k_s_inv << 2.5e-4, 2.5e-4, 2.5e-4, 1.4e-2, 1.4e-2, 1.4e-2;
  g.k_a << 2.5e-4, 2.5e-4, 2.5e-4, 1.4e-2, 1.4e-2, 1.4e-2;
  g.deadband << 0.5, 0.5, 0.5, 0.05, 0.05, 0.05;
  return g;
}

Vector6d admittance_displacement(const Wrench& f, const AdmittanceGains& gains) {
  const Vector6d w = f.as_vector();
  Vector6d d = Vector6d::Zero();
  for (int i = 0; i < 6; ++i) {
    if (!gains.axis_mask[static_cast<std::size_t>(i)] || std::abs(w[i]) <= gains.deadband[i]) {
      continue;
    }
    const double excess = w[i] - std::copysign(gains.deadband[i], w[i]);
    d[i] = (gains.k_s_inv[i] + gains.k_a[i]) * excess;
  }
  return d;
}

Pose ktc_step(const Pose& x_r, const Wrench& f, const AdmittanceGains& gains) {
  return displace(x_r, admittance_displacement(f, gains));
}

PlantState plant_step(const PlantState& state, double dt) {
  if (!(dt > 0.0)) {
    throw std::invalid_argument("plant_step: dt must be positive");
  }
  require_positive(state.time_constant, "plant time constant");
  const double a = 1.0 - std::exp(-dt / state.time_constant);
  PlantState next = state;
  next.actual.position += a * (state.commanded.position - state.actual.position);
  if (!(state.commanded.orientation == state.actual.orientation)) {
    next.actual.orientation = slerp(state.actual.orientation, state.commanded.orientation, a);
  }
  return next;
}

void BackdriveBaseline::validate() const {
  require_finite_nonneg(kinetic_force, "kinetic_force");
  require_finite_nonneg(kinetic_torque, "kinetic_torque");
  require_positive(force_gain, "force_gain");
  require_positive(torque_gain, "torque_gain");
  if (!(breakaway_force >= kinetic_force) || !(breakaway_torque >= kinetic_torque)) {
    throw std::invalid_argument("breakaway levels must not be below kinetic levels");
  }
}

void VirtualHuman::validate() const {
  if (waypoints.empty()) {
    throw std::invalid_argument("virtual human needs at least one waypoint");
  }
  require_positive(grip_stiffness, "grip_stiffness");
  require_finite_nonneg(grip_damping, "grip_damping");
  require_positive(force_saturation, "force_saturation");
  require_positive(grip_rot_stiffness, "grip_rot_stiffness");
  require_finite_nonneg(grip_rot_damping, "grip_rot_damping");
  require_positive(torque_saturation, "torque_saturation");
  require_positive(max_speed, "max_speed");
  require_positive(effort_force, "effort_force");
  require_positive(max_angular_speed, "max_angular_speed");
  require_positive(speed_time_constant, "speed_time_constant");
  require_positive(lead_limit, "lead_limit");
  require_positive(capture_radius, "capture_radius");
  require_positive(capture_angle, "capture_angle");
  require_finite_nonneg(hold_time, "hold_time");
}

void TeachSettings::validate() const {
  require_positive(rate_hz, "rate_hz");
  require_positive(max_duration, "max_duration");
  require_positive(plant_time_constant, "plant_time_constant");
  require_finite_nonneg(force_noise_sigma, "force_noise_sigma");
  require_finite_nonneg(torque_noise_sigma, "torque_noise_sigma");
}

Trajectory simulate_demonstration(const VirtualHuman& human, const TeachingController& controller,
                                  const TeachSettings& settings) {
  human.validate();
  settings.validate();
  std::visit([](const auto& c) { c.validate(); }, controller);

  const double dt = 1.0 / settings.rate_hz;
  const double effort_blend = 1.0 - std::exp(-dt / human.speed_time_constant);
  std::mt19937_64 rng(settings.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::optional<Backdrive> backdrive;
  if (const auto* b = std::get_if<BackdriveBaseline>(&controller)) {
    backdrive.emplace(*b);
  }

  const std::size_t last = human.waypoints.size() - 1;
  PlantState plant{human.waypoints.front(), human.waypoints.front(), settings.plant_time_constant};
  Pose hand = human.waypoints.front();
  Pose seg_start = hand;
  double u = 0.0;
  double effort = 0.0;  // smoothed fraction of the unloaded hand speed
  std::size_t reached = 0;
  Wrench applied;

  Trajectory log;
  log.push_back({0.0, plant.actual, applied});

  auto captured = [&](const Pose& x, const Pose& wp) {
    return (x.position - wp.position).norm() <= human.capture_radius &&
           angle_between(x.orientation, wp.orientation) <= human.capture_angle;
  };
  while (reached < last && captured(plant.actual, human.waypoints[reached + 1])) {
    ++reached;
  }

  // After the final capture the hand stays on the last waypoint for the hold
  // time so the log ends with the tool at rest.
  const auto hold_ticks = static_cast<std::size_t>(std::llround(human.hold_time / dt));
  std::size_t held = 0;
  std::size_t tick = 0;
  while (reached < last || held < hold_ticks) {
    if (reached == last) {
      ++held;
    }
    const double t_next = static_cast<double>(tick + 1) * dt;
    if (t_next > settings.max_duration) {
      throw DemonstrationTimeout(std::move(log), reached);
    }
    const Pose& target = human.waypoints[std::min(reached + 1, last)];

    // Hand reference: effort-limited progress along the current segment,
    // never past the next waypoint and never too far ahead of the tool.
    const double load = applied.force.norm();
    const double effort_goal = human.effort_force / (human.effort_force + load);
    effort += effort_blend * (effort_goal - effort);
    const double seg_len = (target.position - seg_start.position).norm();
    const double seg_angle = angle_between(target.orientation, seg_start.orientation);
    double rate = std::numeric_limits<double>::infinity();
    if (seg_len > 0.0) {
      rate = std::min(rate, effort * human.max_speed / seg_len);
    }
    if (seg_angle > 0.0) {
      rate = std::min(rate, effort * human.max_angular_speed / seg_angle);
    }
    const double u_next = std::isfinite(rate) ? std::min(1.0, u + rate * dt) : 1.0;
    Pose hand_next{seg_start.position + u_next * (target.position - seg_start.position),
                   slerp(seg_start.orientation, target.orientation, u_next)};
    if ((hand_next.position - plant.actual.position).norm() > human.lead_limit) {
      hand_next = hand;
    } else {
      u = u_next;
    }
    const Eigen::Vector3d hand_vel = (hand_next.position - hand.position) / dt;
    const Eigen::Vector3d hand_omega = orientation_error(hand_next.orientation, hand.orientation) / dt;
    hand = hand_next;

    const std::size_t n = log.size();
    Eigen::Vector3d tool_vel = Eigen::Vector3d::Zero();
    Eigen::Vector3d tool_omega = Eigen::Vector3d::Zero();
    if (n >= 2) {
      tool_vel = (log[n - 1].pose.position - log[n - 2].pose.position) / dt;
      tool_omega = orientation_error(log[n - 1].pose.orientation, log[n - 2].pose.orientation) / dt;
    }
    const Eigen::Vector3d force =
        human.grip_stiffness * (hand.position - plant.actual.position) +
        human.grip_damping * (hand_vel - tool_vel);
    const Eigen::Vector3d torque =
        human.grip_rot_stiffness * orientation_error(hand.orientation, plant.actual.orientation) +
        human.grip_rot_damping * (hand_omega - tool_omega);
    applied = Wrench(saturate(force, human.force_saturation),
                     saturate(torque, human.torque_saturation));

    Wrench measured = applied;
    if (settings.force_noise_sigma > 0.0 || settings.torque_noise_sigma > 0.0) {
      for (int i = 0; i < 3; ++i) {
        measured.force[i] += settings.force_noise_sigma * normal(rng);
      }
      for (int i = 0; i < 3; ++i) {
        measured.torque[i] += settings.torque_noise_sigma * normal(rng);
      }
    }

    if (backdrive) {
      plant.commanded = displace(plant.actual, backdrive->displacement(measured));
    } else {
      plant.commanded = ktc_step(plant.actual, measured, std::get<AdmittanceGains>(controller));
    }
    plant = plant_step(plant, dt);
    ++tick;
    log.push_back({t_next, plant.actual, applied});

    while (reached < last && captured(plant.actual, human.waypoints[reached + 1])) {
      ++reached;
      seg_start = hand;
      u = 0.0;
    }
  }
  return log;
}

}  // namespace lfd::ktc
