#pragma once

// One JSON document holding every tunable of a run. Loading starts from the
// built-in defaults and overlays the keys present in the file; unknown keys
// are rejected. Every CLI run writes the fully resolved document next to its
// outputs, and feeding it back with --config reproduces the run.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lfd/assembly.hpp"
#include "lfd/dmp.hpp"
#include "lfd/json_io.hpp"
#include "lfd/ktc.hpp"
#include "lfd/metrics.hpp"
#include "lfd/vision.hpp"

namespace lfd {

struct RolloutConfig {
  double dt = 1e-3;
  double tau = 0.0;  // 0 = the primitive's own duration
  std::optional<Pose> start;  // default: demonstration start
  std::optional<Pose> goal;   // default: demonstration goal
  Eigen::Vector3d goal_offset = Eigen::Vector3d::Zero();  // added to the goal position
};

struct TeachConfig {
  std::string controller = "proposed";  // or "native"
  ktc::AdmittanceGains gains = ktc::AdmittanceGains::proposed();
  ktc::BackdriveBaseline native;
  double native_force_saturation = 60.0;  // the human pushes harder on the stiff baseline
  double native_torque_saturation = 6.0;
  ktc::TeachSettings settings;  // seed comes from the top-level seed
};

struct VisionConfig {
  double noise_sigma = 0.5e-3;
  double dropout = 0.0;
  vision::MaskSettings mask;
};

struct SweepConfig {
  double yaw_min = -1.2;
  double yaw_max = 1.2;
  double step = 0.01;
  double tolerance = 1e-3;
};

struct AssemblyConfig {
  assembly::AssemblyParams params;
  std::size_t n = 20;
  double yaw_min = -0.3;
  double yaw_max = 0.3;
  double yaw = 0.0;                    // single-trial placement
  std::optional<std::size_t> hole_id;  // null: random among detectable
  std::optional<Pose> initial_pose;    // default: first teaching waypoint
};

struct InputsConfig {
  std::string demo;        // fit
  std::string dmp;         // rollout; optional for trial/batch
  std::string scene;       // localize/sweep/trial/batch; empty = built-in scene
  std::string events;      // trial; empty = nominal sequence
  std::string trajectory;  // metrics
  std::string compare;     // metrics, optional second trajectory
};

struct RunConfig {
  std::uint64_t seed = 7;
  dmp::DmpConfig dmp;
  RolloutConfig rollout;
  TeachConfig teach;
  ktc::VirtualHuman human;
  vision::BarScene scene = vision::BarScene::desk_default();
  vision::CameraModel camera = vision::CameraModel::desk_default();
  VisionConfig vision;
  SweepConfig sweep;
  AssemblyConfig assembly;
  std::vector<metrics::SummaryRow> reference_timing;
  std::vector<metrics::SummaryRow> reference_jerk;
  InputsConfig inputs;

  static RunConfig defaults();
};

// Default teaching path: start above the work area, sweep over to the bar
// and finish with a short vertical approach.
std::vector<Pose> default_waypoints();

json_io::Json to_json(const RunConfig& config);
// Overlays `j` onto `config`; throws ParseError naming the offending key.
void apply_json(RunConfig& config, const json_io::Json& j, const std::string& source);
RunConfig load_config(const std::string& path);

}  // namespace lfd
