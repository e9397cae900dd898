#pragma once

// Collaborative peg-in-hole assembly: a pedal-driven task state machine, DMP
// insertion planning toward a vision-estimated hole, execution on a tracking
// plant with a simple contact model, and seeded trial batches.

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "lfd/dmp.hpp"
#include "lfd/metrics.hpp"
#include "lfd/vision.hpp"

namespace lfd::assembly {

enum class StateKind {
  kAwaitingBar,
  kBarPlaced,
  kPegGrasped,
  kInsertionPlanned,
  kInserting,
  kAwaitingHuman,
  kDone,
  kFailed
};

struct TaskState {
  StateKind kind = StateKind::kAwaitingBar;
  std::string reason;  // set for kFailed only

  static TaskState failed(std::string why) { return {StateKind::kFailed, std::move(why)}; }
  bool operator==(const TaskState&) const = default;
};

enum class EventKind { kPedalPress, kVisionReady, kMotionDone, kAbort };

struct StepEvent {
  double t = 0.0;
  EventKind kind = EventKind::kPedalPress;
};

const char* to_string(StateKind kind);
const char* to_string(EventKind kind);
// "PedalPress", "VisionReady", "MotionDone", "Abort"; nullopt otherwise.
std::optional<EventKind> event_kind_from_string(const std::string& name);

// Transition table:
//   AwaitingBar      + PedalPress  -> BarPlaced
//   BarPlaced        + MotionDone  -> PegGrasped
//   PegGrasped       + VisionReady -> InsertionPlanned
//   InsertionPlanned + PedalPress  -> Inserting
//   Inserting        + MotionDone  -> AwaitingHuman
//   AwaitingHuman    + PedalPress  -> Done
// Abort fails any live state with "aborted"; any other pair (including
// events after Done) gives Failed("unexpected event"). Failed is absorbing.
TaskState advance(const TaskState& state, const StepEvent& event);

// Event file: one `t kind` pair per line; blank lines and lines starting
// with '#' are skipped. Throws ParseError with the 1-based line.
std::vector<StepEvent> parse_events(std::istream& in, const std::string& source);
std::vector<StepEvent> load_events(const std::string& path);

// Pedal, grasp done, vision ready, pedal, motion done, pedal.
std::vector<StepEvent> nominal_events();

struct AssemblyParams {
  double standoff = 0.03;            // m above the hole along its axis
  double commanded_depth = 0.012;    // m below the hole mouth
  double required_depth = 0.010;     // m
  double clearance = 0.5e-3;         // m, hole radius minus peg radius
  double tilt_tolerance = 0.03490658503988659;  // 2 degrees
  double descent_time = 2.0;         // s, straight approach from the standoff
  double rollout_dt = 1e-3;          // s
  double tau = 0.0;                  // s, 0 = the primitive's own duration
  double convergence_tolerance = 1e-3;  // m, rollout end vs standoff pose
  double tracking_time_constant = 0.02;  // s, execution plant lag
  double settle_time = 0.5;          // s, hold at the final command
  double snap_factor = 2.0;          // entry offsets up to factor * clearance are guided in

  void validate() const;
};

// Tool convention: the peg points along the tool z axis. The insertion
// orientation is the demonstration's goal orientation rotated by the minimal
// rotation that takes its tool z onto the negated hole axis.
UnitQuaternion insertion_orientation(const UnitQuaternion& demo_goal,
                                     const Eigen::Vector3d& hole_axis);

struct InsertionPlan {
  Pose standoff_goal;   // where the primitive is sent
  Pose insertion_goal;  // hole center, commanded depth along -axis
  Trajectory approach;  // primitive rollout toward standoff_goal
  Trajectory path;      // approach followed by the straight descent
};

// Throws std::invalid_argument for standoff <= 0 or a non-unit axis, and
// std::runtime_error when the rollout ends further than the convergence
// tolerance from the standoff pose. Rollout errors propagate.
InsertionPlan plan_insertion(const Pose& current, const vision::HoleEstimate& hole,
                             const dmp::PoseDmp& dmp, const AssemblyParams& params);

struct AssemblyScenario {
  vision::BarScene scene;  // bar pose before the yaw below is applied
  vision::CameraModel camera;
  double bar_yaw = 0.0;
  std::optional<std::size_t> hole_id;  // nullopt: uniform among detectable holes
  Pose initial_pose;
  dmp::PoseDmp dmp;
  AssemblyParams params;
  double vision_noise = 0.5e-3;
  double vision_dropout = 0.0;
  vision::MaskSettings mask;
  std::uint64_t seed = 0;
};

struct EventRecord {
  StepEvent event;
  TaskState state;  // after the event
};

// Outcome of the physical insertion, enough to re-evaluate success.
struct InsertionOutcome {
  double lateral_error = std::numeric_limits<double>::quiet_NaN();  // m, tip to true axis
  double tilt = std::numeric_limits<double>::quiet_NaN();           // rad, peg vs true axis
  double depth = std::numeric_limits<double>::quiet_NaN();          // m below the hole mouth
  bool blocked = false;  // the peg landed on the surface outside the hole
};

// lateral <= clearance, tilt <= tolerance and depth >= required; false when
// any quantity is missing (NaN).
bool insertion_succeeded(const InsertionOutcome& outcome, const AssemblyParams& params);

struct TrialResult {
  bool success = false;
  InsertionOutcome outcome;
  std::optional<std::size_t> hole_id;
  double bar_yaw = 0.0;
  std::uint64_t seed = 0;
  TaskState final_state;
  std::vector<EventRecord> events;
  std::optional<vision::HoleEstimate> estimate;  // world frame
  std::optional<metrics::JerkReport> jerk;       // of the executed motion
  Trajectory executed;
};

// Drives the state machine with `events`. Localization and planning run on
// VisionReady, execution on the pedal press that starts Inserting, scoring
// on the MotionDone that ends it. Vision failures end the trial in
// Failed("hole not detectable"); planning failures in Failed("planning
// failed: ..."). Events with decreasing timestamps fail the trial.
TrialResult execute_trial(const AssemblyScenario& scenario, const std::vector<StepEvent>& events);

// Tracks `path` with a first-order plant at the path's own step, holds the
// last command for the settle time, and applies the contact model against
// the true hole: on first entry below the mouth, a lateral offset within
// the clearance passes freely, one within snap_factor * clearance is guided
// to the clearance, anything else stays on the surface. Inside the hole the
// wall bounds the lateral offset by the clearance.
InsertionOutcome execute_insertion(const Trajectory& path, const vision::HoleTruth& truth,
                                   const AssemblyParams& params, Trajectory* executed = nullptr);

struct BatchSettings {
  std::size_t n = 20;
  std::uint64_t seed = 7;
  double yaw_min = -0.3;  // bar placement range, rad
  double yaw_max = 0.3;
  unsigned threads = 0;
};

struct BatchResult {
  std::vector<TrialResult> trials;
  std::size_t successes = 0;
  double success_rate = 0.0;
  double lateral_mean = 0.0;
  double lateral_max = 0.0;
  double tilt_mean = 0.0;
  double tilt_max = 0.0;
};

// n independent trials; trial i draws its own seed from (seed, i), samples
// the bar yaw uniformly in the placement range and, unless the template
// fixes one, picks a hole uniformly among those detectable at that yaw.
// Trials run in parallel; the reduction is in trial order.
BatchResult run_batch(const AssemblyScenario& scenario, const BatchSettings& settings);

}  // namespace lfd::assembly
