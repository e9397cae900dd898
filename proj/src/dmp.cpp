#include "lfd/dmp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "lfd/finite_difference.hpp"

namespace lfd::dmp {

namespace {

constexpr double kPhaseFloor = 1e-8;
constexpr double kDenominatorGuard = 1e-12;
constexpr int kSmoothingWindow = 5;

}  // namespace

const char* to_string(GateMode mode) {
  return mode == GateMode::kPhaseGated ? "phase-gated" : "literal";
}

GateMode gate_mode_from_string(const std::string& name) {
  if (name == "phase-gated") {
    return GateMode::kPhaseGated;
  }
  if (name == "literal") {
    return GateMode::kLiteral;
  }
  throw std::invalid_argument("unknown gate mode '" + name + "'");
}

double step_canonical(const CanonicalSystem& cs, double dt) {
  if (dt < 0.0) {
    throw std::invalid_argument("step_canonical: dt must be non-negative");
  }
  return cs.s * std::exp(-cs.alpha_s * dt / cs.tau);
}

double phase_at(double alpha_s, double tau, double t) {
  return std::exp(-alpha_s * t / tau);
}

BasisLayout BasisLayout::time_spaced(int n_basis, double alpha_s) {
  if (n_basis < 2) {
    throw std::invalid_argument("basis count must be at least 2");
  }
  if (!(alpha_s > 0.0)) {
    throw std::invalid_argument("alpha_s must be positive");
  }
  const auto n = static_cast<std::size_t>(n_basis);
  BasisLayout layout;
  layout.centers.resize(n);
  layout.widths.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    layout.centers[i] = std::exp(-alpha_s * static_cast<double>(i) / static_cast<double>(n - 1));
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double gap = layout.centers[i + 1] - layout.centers[i];
    layout.widths[i] = 2.0 / (gap * gap);
  }
  layout.widths[n - 1] = layout.widths[n - 2];
  return layout;
}

void BasisLayout::validate() const {
  if (centers.size() < 2) {
    throw std::invalid_argument("basis layout needs at least 2 centers");
  }
  if (widths.size() != centers.size()) {
    throw std::invalid_argument("basis layout centers/widths size mismatch");
  }
  for (std::size_t i = 0; i < centers.size(); ++i) {
    if (!std::isfinite(centers[i]) || !(widths[i] > 0.0) || !std::isfinite(widths[i])) {
      throw std::invalid_argument("basis widths must be positive and finite");
    }
    if (i > 0 && !(centers[i] < centers[i - 1])) {
      throw std::invalid_argument("basis centers must be strictly decreasing");
    }
  }
}

Eigen::VectorXd basis_activations(const BasisLayout& layout, double s) {
  const auto n = static_cast<Eigen::Index>(layout.size());
  Eigen::VectorXd psi(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double d = s - layout.centers[static_cast<std::size_t>(i)];
    psi[i] = std::exp(-layout.widths[static_cast<std::size_t>(i)] * d * d);
  }
  return psi;
}

ForcingValue eval_forcing(const BasisLayout& layout, std::span<const double> weights, double s,
                          GateMode gate) {
  if (weights.size() != layout.size()) {
    throw std::invalid_argument("eval_forcing: weight count does not match basis count");
  }
  if (!(s > 0.0) || s > 1.0) {
    throw std::invalid_argument("eval_forcing: phase must lie in (0, 1]");
  }
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < layout.size(); ++i) {
    const double d = s - layout.centers[i];
    const double psi = std::exp(-layout.widths[i] * d * d);
    num += weights[i] * psi;
    den += psi;
  }
  if (den == 0.0) {
    return {0.0, true};
  }
  const double f = num / den;
  return {gate == GateMode::kPhaseGated ? f * s : f, false};
}

DemonstrationData make_demonstration_data(const Trajectory& demo, double dt) {
  if (demo.size() < 2) {
    throw std::invalid_argument("demonstration needs at least 2 samples");
  }
  if (!(dt > 0.0)) {
    throw std::invalid_argument("demonstration dt must be positive");
  }
  const double span = demo.duration();
  const double steps = std::max(1.0, std::round(span / dt));
  DemonstrationData data;
  data.dt = span / steps;
  data.trajectory = resample_trajectory(demo, data.dt);
  if (data.trajectory.size() < 4) {
    throw std::invalid_argument("demonstration needs at least 4 samples after resampling");
  }
  const std::vector<double> t = data.trajectory.times();
  const Eigen::MatrixXd p = data.trajectory.positions();
  const Eigen::MatrixXd v = finite_difference(t, p, 1);
  const Eigen::MatrixXd a = finite_difference(t, v, 1);
  const Eigen::MatrixXd w = angular_velocity(data.trajectory);
  const Eigen::MatrixXd wd = finite_difference(t, w, 1);
  data.velocity = centered_moving_average(v, kSmoothingWindow);
  data.acceleration = centered_moving_average(a, kSmoothingWindow);
  data.angular_velocity = centered_moving_average(w, kSmoothingWindow);
  data.angular_acceleration = centered_moving_average(wd, kSmoothingWindow);
  return data;
}

ForcingTargets compute_forcing_targets(const DemonstrationData& demo, const TransformParams& tp,
                                       const CanonicalSystem& cs, GateMode gate) {
  const Trajectory& traj = demo.trajectory;
  const auto n = static_cast<Eigen::Index>(traj.size());
  if (n < 4) {
    throw std::invalid_argument("compute_forcing_targets: need at least 4 samples");
  }
  const Pose& start = traj.front().pose;
  bool moved = false;
  for (const auto& s : traj) {
    if ((s.pose.position - start.position).norm() > 1e-12 ||
        angle_between(s.pose.orientation, start.orientation) > 1e-12) {
      moved = true;
      break;
    }
  }
  if (!moved) {
    throw NoInformationError();
  }

  const Pose& goal = traj.back().pose;
  const double tau = cs.tau;
  const double t0 = traj.front().t;
  ForcingTargets out;
  out.gate = gate;
  out.phases.resize(static_cast<std::size_t>(n));
  out.values.resize(n, 6);
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto& sample = traj[static_cast<std::size_t>(k)];
    const double s = phase_at(cs.alpha_s, tau, sample.t - t0);
    out.phases[static_cast<std::size_t>(k)] = s;
    const Eigen::Vector3d pos_err = goal.position - sample.pose.position;
    const Eigen::Vector3d rot_err = orientation_error(goal.orientation, sample.pose.orientation);
    for (int axis = 0; axis < 3; ++axis) {
      out.values(k, axis) =
          tau * tau * demo.acceleration(k, axis) -
          tp.alpha_z * (tp.beta_z * pos_err[axis] - tau * demo.velocity(k, axis));
      out.values(k, 3 + axis) =
          tau * tau * demo.angular_acceleration(k, axis) -
          tp.alpha_z * (tp.beta_z * rot_err[axis] - tau * demo.angular_velocity(k, axis));
    }
    if (gate == GateMode::kPhaseGated) {
      out.values.row(k) /= std::max(s, kPhaseFloor);
    }
  }
  return out;
}

LwrResult fit_lwr(std::span<const double> phases, const Eigen::MatrixXd& values,
                  const BasisLayout& layout, GateMode gate) {
  layout.validate();
  if (static_cast<Eigen::Index>(phases.size()) != values.rows()) {
    throw std::invalid_argument("fit_lwr: phase/target length mismatch");
  }
  if (phases.empty()) {
    throw std::invalid_argument("fit_lwr: no targets");
  }
  const auto n_basis = static_cast<Eigen::Index>(layout.size());
  const Eigen::Index axes = values.cols();
  Eigen::MatrixXd num = Eigen::MatrixXd::Zero(axes, n_basis);
  Eigen::VectorXd den = Eigen::VectorXd::Zero(n_basis);
  for (std::size_t k = 0; k < phases.size(); ++k) {
    const double s = phases[k];
    const double x2 = gate == GateMode::kPhaseGated ? s * s : 1.0;
    const Eigen::VectorXd psi = basis_activations(layout, s);
    for (Eigen::Index i = 0; i < n_basis; ++i) {
      const double wk = psi[i] * x2;
      den[i] += wk;
      num.col(i) += wk * values.row(static_cast<Eigen::Index>(k)).transpose();
    }
  }
  LwrResult result;
  result.weights = Eigen::MatrixXd::Zero(axes, n_basis);
  for (Eigen::Index i = 0; i < n_basis; ++i) {
    if (den[i] < kDenominatorGuard) {
      result.unsupported.push_back(static_cast<std::size_t>(i));
      continue;
    }
    result.weights.col(i) = num.col(i) / den[i];
  }
  return result;
}

bool PoseDmp::operator==(const PoseDmp& o) const {
  return canonical.alpha_s == o.canonical.alpha_s && canonical.tau == o.canonical.tau &&
         canonical.s == o.canonical.s && transform.alpha_z == o.transform.alpha_z &&
         transform.beta_z == o.transform.beta_z && basis.centers == o.basis.centers &&
         basis.widths == o.basis.widths && weights_position == o.weights_position &&
         weights_rotation == o.weights_rotation && demo_start == o.demo_start &&
         demo_goal == o.demo_goal && gate == o.gate;
}

PoseDmp fit_pose_dmp(const Trajectory& demo, const DmpConfig& config) {
  if (!(config.alpha_z > 0.0) || !(config.beta_z > 0.0)) {
    throw std::invalid_argument("alpha_z and beta_z must be positive");
  }
  PoseDmp dmp;
  dmp.basis = BasisLayout::time_spaced(config.n_basis, config.alpha_s);
  dmp.transform = {config.alpha_z, config.beta_z};
  dmp.gate = config.gate;
  dmp.canonical = {config.alpha_s, demo.duration(), 1.0};
  if (!(dmp.canonical.tau > 0.0)) {
    throw std::invalid_argument("demonstration must span positive time");
  }
  dmp.demo_start = demo.front().pose;
  dmp.demo_goal = demo.back().pose;

  const DemonstrationData data = make_demonstration_data(demo, config.dt);
  const auto n = static_cast<Eigen::Index>(dmp.basis.size());
  try {
    const ForcingTargets targets =
        compute_forcing_targets(data, dmp.transform, dmp.canonical, config.gate);
    const LwrResult fit = fit_lwr(targets.phases, targets.values, dmp.basis, config.gate);
    dmp.weights_position = fit.weights.topRows(3);
    dmp.weights_rotation = fit.weights.bottomRows(3);
  } catch (const NoInformationError&) {
    // A pose that never moves is reproduced exactly by the bare attractor.
    dmp.weights_position = Eigen::MatrixXd::Zero(3, n);
    dmp.weights_rotation = Eigen::MatrixXd::Zero(3, n);
  }
  return dmp;
}

Trajectory rollout(const PoseDmp& dmp, const Pose& start, const Pose& goal, double tau,
                   double dt) {
  if (!(tau > 0.0) || !(dt > 0.0)) {
    throw std::invalid_argument("rollout: tau and dt must be positive");
  }
  if (dt > tau / 100.0) {
    throw std::invalid_argument("rollout: dt must not exceed tau / 100");
  }
  dmp.basis.validate();
  const auto n_basis = static_cast<Eigen::Index>(dmp.basis.size());
  if (dmp.weights_position.rows() != 3 || dmp.weights_rotation.rows() != 3 ||
      dmp.weights_position.cols() != n_basis || dmp.weights_rotation.cols() != n_basis) {
    throw std::invalid_argument("rollout: weight matrices must be 3 x N");
  }
  const double alpha_z = dmp.transform.alpha_z;
  const double beta_z = dmp.transform.beta_z;
  const auto steps = static_cast<std::size_t>(std::llround(1.5 * tau / dt));

  Eigen::Vector3d y = start.position;
  Eigen::Vector3d z = Eigen::Vector3d::Zero();
  UnitQuaternion q = start.orientation;
  Eigen::Vector3d eta = Eigen::Vector3d::Zero();

  Trajectory out;
  out.push_back({0.0, {y, q}, std::nullopt});
  Eigen::Matrix<double, 6, 1> f;
  for (std::size_t k = 0; k < steps; ++k) {
    const double s = phase_at(dmp.canonical.alpha_s, tau, static_cast<double>(k) * dt);
    const Eigen::VectorXd psi = basis_activations(dmp.basis, s);
    const double psum = psi.sum();
    if (psum > 0.0) {
      const double gate = dmp.gate == GateMode::kPhaseGated ? s : 1.0;
      f.head<3>() = gate * (dmp.weights_position * psi) / psum;
      f.tail<3>() = gate * (dmp.weights_rotation * psi) / psum;
    } else {
      f.setZero();
    }

    const Eigen::Vector3d rot_err = orientation_error(goal.orientation, q);
    const Eigen::Vector3d z_next =
        z + dt / tau * (alpha_z * (beta_z * (goal.position - y) - z) + f.head<3>());
    const Eigen::Vector3d eta_next =
        eta + dt / tau * (alpha_z * (beta_z * rot_err - eta) + f.tail<3>());
    y += dt / tau * z;
    const Eigen::Vector3d half_turn = 0.5 * dt / tau * eta;
    if (!z_next.allFinite() || !eta_next.allFinite() || !y.allFinite() ||
        !half_turn.allFinite() || half_turn.norm() >= 1.0) {
      throw RolloutError(k + 1, "rollout diverged at step " + std::to_string(k + 1));
    }
    q = quat_mul(quat_exp(half_turn), q);
    z = z_next;
    eta = eta_next;
    out.push_back({static_cast<double>(k + 1) * dt, {y, q}, std::nullopt});
  }
  return out;
}

}  // namespace lfd::dmp
