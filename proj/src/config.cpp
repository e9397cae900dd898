#include "lfd/config.hpp"

#include "lfd/dmp_json.hpp"
#include "lfd/scene_json.hpp"

namespace lfd {

using json_io::Json;
using json_io::Where;

namespace {

UnitQuaternion tool_down(double yaw) {
  return quat_mul(UnitQuaternion::from_axis_angle(Eigen::Vector3d::UnitZ(), yaw),
                  UnitQuaternion(0.0, 1.0, 0.0, 0.0));
}

Json vec6(const ktc::Vector6d& v) {
  Json a = Json::array();
  for (int i = 0; i < 6; ++i) {
    a.push_back(v[i]);
  }
  return a;
}

ktc::Vector6d to_vec6(const Json& j, const Where& at) {
  const std::vector<double> v = json_io::to_double_array(j, at);
  if (v.size() != 6) {
    at.fail("expected 6 numbers");
  }
  return Eigen::Map<const ktc::Vector6d>(v.data());
}

std::array<bool, 6> to_mask(const Json& j, const Where& at) {
  if (!j.is_array() || j.size() != 6) {
    at.fail("expected 6 booleans");
  }
  std::array<bool, 6> m{};
  for (std::size_t i = 0; i < 6; ++i) {
    m[i] = json_io::to_bool(j[i], at / std::to_string(i));
  }
  return m;
}

Json optional_pose(const std::optional<Pose>& p) {
  return p ? json_io::from_pose(*p) : Json(nullptr);
}

std::optional<Pose> to_optional_pose(const Json& j, const Where& at) {
  if (j.is_null()) {
    return std::nullopt;
  }
  return json_io::to_pose(j, at);
}

std::uint64_t to_u64(const Json& j, const Where& at) {
  if (!j.is_number_unsigned()) {
    at.fail("expected a non-negative integer");
  }
  return j.get<std::uint64_t>();
}

std::size_t to_count(const Json& j, const Where& at) {
  return static_cast<std::size_t>(to_u64(j, at));
}

Json rows_json(const std::vector<metrics::SummaryRow>& rows) {
  Json a = Json::array();
  for (const auto& r : rows) {
    a.push_back({{"label", r.label}, {"text", r.text}});
  }
  return a;
}

std::vector<metrics::SummaryRow> to_rows(const Json& j, const Where& at) {
  if (!j.is_array()) {
    at.fail("expected an array");
  }
  std::vector<metrics::SummaryRow> rows;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const Where r_at = at / std::to_string(i);
    json_io::reject_unknown_keys(j[i], {"label", "text"}, r_at);
    rows.push_back({json_io::to_string(json_io::require(j[i], "label", r_at), r_at / "label"),
                    json_io::to_string(json_io::require(j[i], "text", r_at), r_at / "text")});
  }
  return rows;
}

std::vector<Pose> to_poses(const Json& j, const Where& at) {
  if (!j.is_array() || j.empty()) {
    at.fail("expected a non-empty array of poses");
  }
  std::vector<Pose> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(json_io::to_pose(j[i], at / std::to_string(i)));
  }
  return out;
}

// Positive-number reader for knobs that must not be zero.
auto positive = [](const Json& j, const Where& at) {
  const double v = json_io::to_double(j, at);
  if (!(v > 0.0)) {
    at.fail("must be positive");
  }
  return v;
};

auto nonneg = [](const Json& j, const Where& at) {
  const double v = json_io::to_double(j, at);
  if (v < 0.0) {
    at.fail("must be non-negative");
  }
  return v;
};

}  // namespace

std::vector<Pose> default_waypoints() {
  return {{{0.40, 0.00, 0.30}, tool_down(0.0)},
          {{0.45, 0.10, 0.25}, tool_down(0.15)},
          {{0.50, 0.15, 0.18}, tool_down(0.30)},
          {{0.50, 0.15, 0.15}, tool_down(0.30)}};
}

RunConfig RunConfig::defaults() {
  RunConfig c;
  c.human.waypoints = default_waypoints();
  c.reference_timing = {{"native (published)", "24.66 ± 3.25 s"},
                        {"proposed (published)", "17.17 ± 0.756 s"}};
  c.reference_jerk = {{"native (published)", "10.55 ± 1.11 | max 10.84 ± 0.73"},
                      {"proposed (published)", "6.71 ± 0.157 | max 6.99 ± 0.00"}};
  return c;
}

Json to_json(const RunConfig& c) {
  const auto& g = c.teach.gains;
  const auto& nb = c.teach.native;
  const auto& ts = c.teach.settings;
  const auto& h = c.human;
  const auto& ap = c.assembly.params;
  Json waypoints = Json::array();
  for (const Pose& p : h.waypoints) {
    waypoints.push_back(json_io::from_pose(p));
  }
  return {
      {"seed", c.seed},
      {"dmp",
       {{"n_basis", c.dmp.n_basis},
        {"alpha_z", c.dmp.alpha_z},
        {"beta_z", c.dmp.beta_z},
        {"alpha_s", c.dmp.alpha_s},
        {"gate_mode", dmp::to_string(c.dmp.gate)},
        {"dt", c.dmp.dt}}},
      {"rollout",
       {{"dt", c.rollout.dt},
        {"tau", c.rollout.tau},
        {"start", optional_pose(c.rollout.start)},
        {"goal", optional_pose(c.rollout.goal)},
        {"goal_offset", json_io::from_vec3(c.rollout.goal_offset)}}},
      {"teach",
       {{"controller", c.teach.controller},
        {"rate_hz", ts.rate_hz},
        {"max_duration", ts.max_duration},
        {"plant_time_constant", ts.plant_time_constant},
        {"force_noise_sigma", ts.force_noise_sigma},
        {"torque_noise_sigma", ts.torque_noise_sigma},
        {"gains",
         {{"k_s_inv", vec6(g.k_s_inv)},
          {"k_a", vec6(g.k_a)},
          {"deadband", vec6(g.deadband)},
          {"axis_mask", g.axis_mask}}},
        {"native",
         {{"breakaway_force", nb.breakaway_force},
          {"kinetic_force", nb.kinetic_force},
          {"force_gain", nb.force_gain},
          {"breakaway_torque", nb.breakaway_torque},
          {"kinetic_torque", nb.kinetic_torque},
          {"torque_gain", nb.torque_gain},
          {"force_saturation", c.teach.native_force_saturation},
          {"torque_saturation", c.teach.native_torque_saturation}}}}},
      {"human",
       {{"waypoints", waypoints},
        {"grip_stiffness", h.grip_stiffness},
        {"grip_damping", h.grip_damping},
        {"force_saturation", h.force_saturation},
        {"grip_rot_stiffness", h.grip_rot_stiffness},
        {"grip_rot_damping", h.grip_rot_damping},
        {"torque_saturation", h.torque_saturation},
        {"max_speed", h.max_speed},
        {"effort_force", h.effort_force},
        {"max_angular_speed", h.max_angular_speed},
        {"speed_time_constant", h.speed_time_constant},
        {"lead_limit", h.lead_limit},
        {"capture_radius", h.capture_radius},
        {"capture_angle", h.capture_angle},
        {"hold_time", h.hold_time}}},
      {"scene", vision::to_json(c.scene, c.camera)},
      {"vision",
       {{"noise_sigma", c.vision.noise_sigma},
        {"dropout", c.vision.dropout},
        {"rim_points", c.vision.mask.rim_points},
        {"max_view_angle", c.vision.mask.max_view_angle}}},
      {"sweep",
       {{"yaw_min", c.sweep.yaw_min},
        {"yaw_max", c.sweep.yaw_max},
        {"step", c.sweep.step},
        {"tolerance", c.sweep.tolerance}}},
      {"assembly",
       {{"standoff", ap.standoff},
        {"commanded_depth", ap.commanded_depth},
        {"required_depth", ap.required_depth},
        {"clearance", ap.clearance},
        {"tilt_tolerance", ap.tilt_tolerance},
        {"descent_time", ap.descent_time},
        {"rollout_dt", ap.rollout_dt},
        {"tau", ap.tau},
        {"convergence_tolerance", ap.convergence_tolerance},
        {"tracking_time_constant", ap.tracking_time_constant},
        {"settle_time", ap.settle_time},
        {"snap_factor", ap.snap_factor},
        {"n", c.assembly.n},
        {"yaw_min", c.assembly.yaw_min},
        {"yaw_max", c.assembly.yaw_max},
        {"yaw", c.assembly.yaw},
        {"hole_id", c.assembly.hole_id ? Json(*c.assembly.hole_id) : Json(nullptr)},
        {"initial_pose", optional_pose(c.assembly.initial_pose)}}},
      {"metrics",
       {{"reference_timing", rows_json(c.reference_timing)},
        {"reference_jerk", rows_json(c.reference_jerk)}}},
      {"inputs",
       {{"demo", c.inputs.demo},
        {"dmp", c.inputs.dmp},
        {"scene", c.inputs.scene},
        {"events", c.inputs.events},
        {"trajectory", c.inputs.trajectory},
        {"compare", c.inputs.compare}}}};
}

void apply_json(RunConfig& c, const Json& j, const std::string& source) {
  using json_io::read_optional;
  const Where root{source, ""};
  json_io::reject_unknown_keys(j,
                               {"seed", "dmp", "rollout", "teach", "human", "scene", "vision",
                                "sweep", "assembly", "metrics", "inputs"},
                               root);
  read_optional(j, "seed", root, c.seed, to_u64);

  if (const auto it = j.find("dmp"); it != j.end()) {
    const Where at = root / "dmp";
    json_io::reject_unknown_keys(*it, {"n_basis", "alpha_z", "beta_z", "alpha_s", "gate_mode", "dt"},
                                 at);
    read_optional(*it, "n_basis", at, c.dmp.n_basis, json_io::to_int);
    read_optional(*it, "alpha_z", at, c.dmp.alpha_z, positive);
    read_optional(*it, "beta_z", at, c.dmp.beta_z, positive);
    read_optional(*it, "alpha_s", at, c.dmp.alpha_s, positive);
    read_optional(*it, "dt", at, c.dmp.dt, positive);
    std::string gate;
    read_optional(*it, "gate_mode", at, gate, json_io::to_string);
    if (!gate.empty()) {
      try {
        c.dmp.gate = dmp::gate_mode_from_string(gate);
      } catch (const std::invalid_argument& e) {
        (at / "gate_mode").fail(e.what());
      }
    }
    if (c.dmp.n_basis < 2) {
      (at / "n_basis").fail("must be at least 2");
    }
  }

  if (const auto it = j.find("rollout"); it != j.end()) {
    const Where at = root / "rollout";
    json_io::reject_unknown_keys(*it, {"dt", "tau", "start", "goal", "goal_offset"}, at);
    read_optional(*it, "dt", at, c.rollout.dt, positive);
    read_optional(*it, "tau", at, c.rollout.tau, nonneg);
    read_optional(*it, "start", at, c.rollout.start, to_optional_pose);
    read_optional(*it, "goal", at, c.rollout.goal, to_optional_pose);
    read_optional(*it, "goal_offset", at, c.rollout.goal_offset, json_io::to_vec3);
  }

  if (const auto it = j.find("teach"); it != j.end()) {
    const Where at = root / "teach";
    json_io::reject_unknown_keys(*it,
                                 {"controller", "rate_hz", "max_duration", "plant_time_constant",
                                  "force_noise_sigma", "torque_noise_sigma", "gains", "native"},
                                 at);
    read_optional(*it, "controller", at, c.teach.controller, json_io::to_string);
    if (c.teach.controller != "proposed" && c.teach.controller != "native") {
      (at / "controller").fail("expected \"proposed\" or \"native\"");
    }
    auto& ts = c.teach.settings;
    read_optional(*it, "rate_hz", at, ts.rate_hz, positive);
    read_optional(*it, "max_duration", at, ts.max_duration, positive);
    read_optional(*it, "plant_time_constant", at, ts.plant_time_constant, positive);
    read_optional(*it, "force_noise_sigma", at, ts.force_noise_sigma, nonneg);
    read_optional(*it, "torque_noise_sigma", at, ts.torque_noise_sigma, nonneg);
    if (const auto g = it->find("gains"); g != it->end()) {
      const Where g_at = at / "gains";
      json_io::reject_unknown_keys(*g, {"k_s_inv", "k_a", "deadband", "axis_mask"}, g_at);
      read_optional(*g, "k_s_inv", g_at, c.teach.gains.k_s_inv, to_vec6);
      read_optional(*g, "k_a", g_at, c.teach.gains.k_a, to_vec6);
      read_optional(*g, "deadband", g_at, c.teach.gains.deadband, to_vec6);
      read_optional(*g, "axis_mask", g_at, c.teach.gains.axis_mask, to_mask);
      try {
        c.teach.gains.validate();
      } catch (const std::invalid_argument& e) {
        g_at.fail(e.what());
      }
    }
    if (const auto n = it->find("native"); n != it->end()) {
      const Where n_at = at / "native";
      json_io::reject_unknown_keys(*n,
                                   {"breakaway_force", "kinetic_force", "force_gain",
                                    "breakaway_torque", "kinetic_torque", "torque_gain",
                                    "force_saturation", "torque_saturation"},
                                   n_at);
      auto& nb = c.teach.native;
      read_optional(*n, "breakaway_force", n_at, nb.breakaway_force, nonneg);
      read_optional(*n, "kinetic_force", n_at, nb.kinetic_force, nonneg);
      read_optional(*n, "force_gain", n_at, nb.force_gain, positive);
      read_optional(*n, "breakaway_torque", n_at, nb.breakaway_torque, nonneg);
      read_optional(*n, "kinetic_torque", n_at, nb.kinetic_torque, nonneg);
      read_optional(*n, "torque_gain", n_at, nb.torque_gain, positive);
      read_optional(*n, "force_saturation", n_at, c.teach.native_force_saturation, positive);
      read_optional(*n, "torque_saturation", n_at, c.teach.native_torque_saturation, positive);
      try {
        nb.validate();
      } catch (const std::invalid_argument& e) {
        n_at.fail(e.what());
      }
    }
  }

  if (const auto it = j.find("human"); it != j.end()) {
    const Where at = root / "human";
    json_io::reject_unknown_keys(
        *it,
        {"waypoints", "grip_stiffness", "grip_damping", "force_saturation", "grip_rot_stiffness",
         "grip_rot_damping", "torque_saturation", "max_speed", "effort_force",
         "max_angular_speed", "speed_time_constant", "lead_limit", "capture_radius",
         "capture_angle", "hold_time"},
        at);
    auto& h = c.human;
    read_optional(*it, "waypoints", at, h.waypoints, to_poses);
    read_optional(*it, "grip_stiffness", at, h.grip_stiffness, positive);
    read_optional(*it, "grip_damping", at, h.grip_damping, nonneg);
    read_optional(*it, "force_saturation", at, h.force_saturation, positive);
    read_optional(*it, "grip_rot_stiffness", at, h.grip_rot_stiffness, positive);
    read_optional(*it, "grip_rot_damping", at, h.grip_rot_damping, nonneg);
    read_optional(*it, "torque_saturation", at, h.torque_saturation, positive);
    read_optional(*it, "max_speed", at, h.max_speed, positive);
    read_optional(*it, "effort_force", at, h.effort_force, positive);
    read_optional(*it, "max_angular_speed", at, h.max_angular_speed, positive);
    read_optional(*it, "speed_time_constant", at, h.speed_time_constant, positive);
    read_optional(*it, "lead_limit", at, h.lead_limit, positive);
    read_optional(*it, "capture_radius", at, h.capture_radius, positive);
    read_optional(*it, "capture_angle", at, h.capture_angle, positive);
    read_optional(*it, "hold_time", at, h.hold_time, nonneg);
  }

  if (const auto it = j.find("scene"); it != j.end()) {
    const vision::SceneFile f = vision::scene_from_json(*it, source + ":scene");
    c.scene = f.scene;
    c.camera = f.camera;
  }

  if (const auto it = j.find("vision"); it != j.end()) {
    const Where at = root / "vision";
    json_io::reject_unknown_keys(*it, {"noise_sigma", "dropout", "rim_points", "max_view_angle"},
                                 at);
    read_optional(*it, "noise_sigma", at, c.vision.noise_sigma, nonneg);
    read_optional(*it, "dropout", at, c.vision.dropout, nonneg);
    read_optional(*it, "rim_points", at, c.vision.mask.rim_points, json_io::to_int);
    read_optional(*it, "max_view_angle", at, c.vision.mask.max_view_angle, positive);
    if (c.vision.dropout >= 1.0) {
      (at / "dropout").fail("must be below 1");
    }
    if (c.vision.mask.rim_points < 3) {
      (at / "rim_points").fail("must be at least 3");
    }
  }

  if (const auto it = j.find("sweep"); it != j.end()) {
    const Where at = root / "sweep";
    json_io::reject_unknown_keys(*it, {"yaw_min", "yaw_max", "step", "tolerance"}, at);
    read_optional(*it, "yaw_min", at, c.sweep.yaw_min, json_io::to_double);
    read_optional(*it, "yaw_max", at, c.sweep.yaw_max, json_io::to_double);
    read_optional(*it, "step", at, c.sweep.step, positive);
    read_optional(*it, "tolerance", at, c.sweep.tolerance, positive);
  }

  if (const auto it = j.find("assembly"); it != j.end()) {
    const Where at = root / "assembly";
    json_io::reject_unknown_keys(
        *it,
        {"standoff", "commanded_depth", "required_depth", "clearance", "tilt_tolerance",
         "descent_time", "rollout_dt", "tau", "convergence_tolerance", "tracking_time_constant",
         "settle_time", "snap_factor", "n", "yaw_min", "yaw_max", "yaw", "hole_id",
         "initial_pose"},
        at);
    auto& ap = c.assembly.params;
    read_optional(*it, "standoff", at, ap.standoff, json_io::to_double);
    read_optional(*it, "commanded_depth", at, ap.commanded_depth, json_io::to_double);
    read_optional(*it, "required_depth", at, ap.required_depth, json_io::to_double);
    read_optional(*it, "clearance", at, ap.clearance, json_io::to_double);
    read_optional(*it, "tilt_tolerance", at, ap.tilt_tolerance, json_io::to_double);
    read_optional(*it, "descent_time", at, ap.descent_time, json_io::to_double);
    read_optional(*it, "rollout_dt", at, ap.rollout_dt, json_io::to_double);
    read_optional(*it, "tau", at, ap.tau, json_io::to_double);
    read_optional(*it, "convergence_tolerance", at, ap.convergence_tolerance, json_io::to_double);
    read_optional(*it, "tracking_time_constant", at, ap.tracking_time_constant,
                  json_io::to_double);
    read_optional(*it, "settle_time", at, ap.settle_time, json_io::to_double);
    read_optional(*it, "snap_factor", at, ap.snap_factor, json_io::to_double);
    read_optional(*it, "n", at, c.assembly.n, to_count);
    read_optional(*it, "yaw_min", at, c.assembly.yaw_min, json_io::to_double);
    read_optional(*it, "yaw_max", at, c.assembly.yaw_max, json_io::to_double);
    read_optional(*it, "yaw", at, c.assembly.yaw, json_io::to_double);
    if (const auto h = it->find("hole_id"); h != it->end()) {
      c.assembly.hole_id =
          h->is_null() ? std::nullopt : std::optional(to_count(*h, at / "hole_id"));
    }
    read_optional(*it, "initial_pose", at, c.assembly.initial_pose, to_optional_pose);
    try {
      ap.validate();
    } catch (const std::invalid_argument& e) {
      at.fail(e.what());
    }
  }

  if (const auto it = j.find("metrics"); it != j.end()) {
    const Where at = root / "metrics";
    json_io::reject_unknown_keys(*it, {"reference_timing", "reference_jerk"}, at);
    read_optional(*it, "reference_timing", at, c.reference_timing, to_rows);
    read_optional(*it, "reference_jerk", at, c.reference_jerk, to_rows);
  }

  if (const auto it = j.find("inputs"); it != j.end()) {
    const Where at = root / "inputs";
    json_io::reject_unknown_keys(*it, {"demo", "dmp", "scene", "events", "trajectory", "compare"},
                                 at);
    read_optional(*it, "demo", at, c.inputs.demo, json_io::to_string);
    read_optional(*it, "dmp", at, c.inputs.dmp, json_io::to_string);
    read_optional(*it, "scene", at, c.inputs.scene, json_io::to_string);
    read_optional(*it, "events", at, c.inputs.events, json_io::to_string);
    read_optional(*it, "trajectory", at, c.inputs.trajectory, json_io::to_string);
    read_optional(*it, "compare", at, c.inputs.compare, json_io::to_string);
  }
}

RunConfig load_config(const std::string& path) {
  RunConfig c = RunConfig::defaults();
  apply_json(c, json_io::read_file(path), path);
  return c;
}

}  // namespace lfd
