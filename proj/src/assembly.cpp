#include "lfd/assembly.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "lfd/io_error.hpp"
#include "lfd/parallel.hpp"

namespace lfd::assembly {

namespace {

constexpr std::array<const char*, 4> kEventNames = {"PedalPress", "VisionReady", "MotionDone",
                                                    "Abort"};

double min_jerk(double u) { return u * u * u * (10.0 - 15.0 * u + 6.0 * u * u); }

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) {
    return {};
  }
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

std::vector<std::size_t> detectable_holes(const vision::BarScene& scene,
                                          const vision::CameraModel& cam,
                                          const vision::MaskSettings& mask) {
  std::vector<std::size_t> ids;
  for (std::size_t h = 0; h < scene.holes.size(); ++h) {
    try {
      vision::synthesize_mask(scene, cam, h, 0.0, 0.0, 0, mask);
      ids.push_back(h);
    } catch (const vision::NotDetectable&) {
    }
  }
  return ids;
}

}  // namespace

const char* to_string(StateKind kind) {
  switch (kind) {
    case StateKind::kAwaitingBar: return "AwaitingBar";
    case StateKind::kBarPlaced: return "BarPlaced";
    case StateKind::kPegGrasped: return "PegGrasped";
    case StateKind::kInsertionPlanned: return "InsertionPlanned";
    case StateKind::kInserting: return "Inserting";
    case StateKind::kAwaitingHuman: return "AwaitingHuman";
    case StateKind::kDone: return "Done";
    case StateKind::kFailed: return "Failed";
  }
  return "?";
}

const char* to_string(EventKind kind) { return kEventNames[static_cast<std::size_t>(kind)]; }

std::optional<EventKind> event_kind_from_string(const std::string& name) {
  for (std::size_t i = 0; i < kEventNames.size(); ++i) {
    if (name == kEventNames[i]) {
      return static_cast<EventKind>(i);
    }
  }
  return std::nullopt;
}

TaskState advance(const TaskState& state, const StepEvent& event) {
  using S = StateKind;
  using E = EventKind;
  if (state.kind == S::kFailed) {
    return state;
  }
  if (event.kind == E::kAbort && state.kind != S::kDone) {
    return TaskState::failed("aborted");
  }
  const auto next = [&]() -> std::optional<S> {
    switch (state.kind) {
      case S::kAwaitingBar: return event.kind == E::kPedalPress ? std::optional(S::kBarPlaced) : std::nullopt;
      case S::kBarPlaced: return event.kind == E::kMotionDone ? std::optional(S::kPegGrasped) : std::nullopt;
      case S::kPegGrasped: return event.kind == E::kVisionReady ? std::optional(S::kInsertionPlanned) : std::nullopt;
      case S::kInsertionPlanned: return event.kind == E::kPedalPress ? std::optional(S::kInserting) : std::nullopt;
      case S::kInserting: return event.kind == E::kMotionDone ? std::optional(S::kAwaitingHuman) : std::nullopt;
      case S::kAwaitingHuman: return event.kind == E::kPedalPress ? std::optional(S::kDone) : std::nullopt;
      case S::kDone:
      case S::kFailed: return std::nullopt;
    }
    return std::nullopt;
  }();
  if (!next) {
    return TaskState::failed("unexpected event");
  }
  return {*next, {}};
}

std::vector<StepEvent> parse_events(std::istream& in, const std::string& source) {
  std::vector<StepEvent> events;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string text = trim(line);
    if (text.empty() || text.front() == '#') {
      continue;
    }
    std::istringstream ss(text);
    std::string t_text;
    std::string kind_text;
    std::string extra;
    ss >> t_text >> kind_text;
    if (kind_text.empty()) {
      throw ParseError(source, line_no, "kind", "expected `t kind`");
    }
    if (ss >> extra) {
      throw ParseError(source, line_no, "kind", "unexpected trailing text '" + extra + "'");
    }
    StepEvent ev;
    std::size_t used = 0;
    try {
      ev.t = std::stod(t_text, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != t_text.size() || !std::isfinite(ev.t)) {
      throw ParseError(source, line_no, "t", "not a number: '" + t_text + "'");
    }
    const auto kind = event_kind_from_string(kind_text);
    if (!kind) {
      throw ParseError(source, line_no, "kind", "unknown event '" + kind_text + "'");
    }
    ev.kind = *kind;
    events.push_back(ev);
  }
  return events;
}

std::vector<StepEvent> load_events(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError(path, 0, "file", "cannot open file");
  }
  return parse_events(in, path);
}

std::vector<StepEvent> nominal_events() {
  return {{0.0, EventKind::kPedalPress},  {1.0, EventKind::kMotionDone},
          {2.0, EventKind::kVisionReady}, {3.0, EventKind::kPedalPress},
          {4.0, EventKind::kMotionDone},  {5.0, EventKind::kPedalPress}};
}

void AssemblyParams::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument(std::string(name) + " must be positive");
    }
  };
  positive(standoff, "standoff");
  positive(commanded_depth, "commanded_depth");
  positive(required_depth, "required_depth");
  positive(clearance, "clearance");
  positive(tilt_tolerance, "tilt_tolerance");
  positive(descent_time, "descent_time");
  positive(rollout_dt, "rollout_dt");
  positive(convergence_tolerance, "convergence_tolerance");
  positive(tracking_time_constant, "tracking_time_constant");
  if (!(tau >= 0.0) || !(settle_time >= 0.0) || !(snap_factor >= 1.0)) {
    throw std::invalid_argument("tau and settle_time must be >= 0 and snap_factor >= 1");
  }
}

UnitQuaternion insertion_orientation(const UnitQuaternion& demo_goal,
                                     const Eigen::Vector3d& hole_axis) {
  const Eigen::Vector3d tool_z = demo_goal.rotate(Eigen::Vector3d::UnitZ());
  return quat_mul(rotation_between(tool_z, -hole_axis), demo_goal);
}

InsertionPlan plan_insertion(const Pose& current, const vision::HoleEstimate& hole,
                             const dmp::PoseDmp& dmp, const AssemblyParams& params) {
  if (!(params.standoff > 0.0)) {
    throw std::invalid_argument("standoff must be positive");
  }
  if (std::abs(hole.axis.norm() - 1.0) > 1e-9) {
    throw std::invalid_argument("hole axis must be a unit vector");
  }
  params.validate();
  InsertionPlan plan;
  const UnitQuaternion q = insertion_orientation(dmp.demo_goal.orientation, hole.axis);
  plan.standoff_goal = {hole.center + params.standoff * hole.axis, q};
  plan.insertion_goal = {hole.center - params.commanded_depth * hole.axis, q};

  const double tau = params.tau > 0.0 ? params.tau : dmp.canonical.tau;
  plan.approach = dmp::rollout(dmp, current, plan.standoff_goal, tau, params.rollout_dt);
  const Pose& end = plan.approach.back().pose;
  const double miss = (end.position - plan.standoff_goal.position).norm();
  if (miss > params.convergence_tolerance) {
    throw std::runtime_error("rollout ended " + std::to_string(miss) +
                             " m from the standoff pose");
  }

  plan.path = plan.approach;
  const double dt = params.rollout_dt;
  const auto steps = static_cast<std::size_t>(std::max(1LL, std::llround(params.descent_time / dt)));
  const double t0 = plan.approach.back().t;
  for (std::size_t k = 1; k <= steps; ++k) {
    const double u = min_jerk(static_cast<double>(k) / static_cast<double>(steps));
    Pose p{end.position + u * (plan.insertion_goal.position - end.position),
           slerp(end.orientation, plan.insertion_goal.orientation, u)};
    if (k == steps) {
      p = plan.insertion_goal;
    }
    plan.path.push_back({t0 + static_cast<double>(k) * dt, p, std::nullopt});
  }
  return plan;
}

bool insertion_succeeded(const InsertionOutcome& o, const AssemblyParams& params) {
  return o.lateral_error <= params.clearance && o.tilt <= params.tilt_tolerance &&
         o.depth >= params.required_depth;
}

InsertionOutcome execute_insertion(const Trajectory& path, const vision::HoleTruth& truth,
                                   const AssemblyParams& params, Trajectory* executed) {
  if (path.size() < 2) {
    throw std::invalid_argument("execution needs at least two path samples");
  }
  const Eigen::Vector3d a = truth.axis.normalized();
  const double clr = params.clearance;
  Pose actual = path.front().pose;
  bool entered = false;
  bool blocked = false;

  auto contact = [&](Pose& x) {
    const Eigen::Vector3d rel = x.position - truth.center;
    const double depth = -rel.dot(a);
    const Eigen::Vector3d lateral = rel + depth * a;
    const double off = lateral.norm();
    if (blocked) {
      if (depth > 0.0) {
        x.position += depth * a;  // resting on the surface
      }
      return;
    }
    if (!entered) {
      if (depth <= 0.0) {
        return;
      }
      if (off <= clr) {
        entered = true;
      } else if (off <= params.snap_factor * clr) {
        entered = true;
        x.position -= lateral * (1.0 - clr / off);
      } else {
        blocked = true;
        x.position += depth * a;
      }
      return;
    }
    if (off > clr) {
      x.position -= lateral * (1.0 - clr / off);  // hole wall
    }
  };

  if (executed) {
    *executed = Trajectory();
    executed->push_back({path.front().t, actual, std::nullopt});
  }
  auto track = [&](const Pose& cmd, double t, double dt) {
    const double alpha = 1.0 - std::exp(-dt / params.tracking_time_constant);
    actual.position += alpha * (cmd.position - actual.position);
    actual.orientation = slerp(actual.orientation, cmd.orientation, alpha);
    contact(actual);
    if (executed) {
      executed->push_back({t, actual, std::nullopt});
    }
  };
  for (std::size_t k = 1; k < path.size(); ++k) {
    track(path[k].pose, path[k].t, path[k].t - path[k - 1].t);
  }
  const double dt = path[path.size() - 1].t - path[path.size() - 2].t;
  const auto settle = static_cast<std::size_t>(std::llround(params.settle_time / dt));
  for (std::size_t k = 1; k <= settle; ++k) {
    track(path.back().pose, path.back().t + static_cast<double>(k) * dt, dt);
  }

  InsertionOutcome out;
  const Eigen::Vector3d rel = actual.position - truth.center;
  out.depth = -rel.dot(a);
  out.lateral_error = (rel + out.depth * a).norm();
  const Eigen::Vector3d peg = actual.orientation.rotate(Eigen::Vector3d::UnitZ());
  out.tilt = std::acos(std::clamp(peg.dot(-a), -1.0, 1.0));
  out.blocked = blocked;
  return out;
}

TrialResult execute_trial(const AssemblyScenario& sc, const std::vector<StepEvent>& events) {
  sc.params.validate();
  sc.scene.validate();
  sc.camera.validate();
  if (sc.hole_id && *sc.hole_id >= sc.scene.holes.size()) {
    throw std::invalid_argument("selected hole " + std::to_string(*sc.hole_id) +
                                " does not exist in the scene");
  }

  TrialResult r;
  r.seed = sc.seed;
  r.bar_yaw = sc.bar_yaw;
  const vision::BarScene scene = vision::yawed(sc.scene, sc.bar_yaw);
  if (sc.hole_id) {
    r.hole_id = sc.hole_id;
  } else {
    const std::vector<std::size_t> ids = detectable_holes(scene, sc.camera, sc.mask);
    if (!ids.empty()) {
      std::mt19937_64 rng(mix_seed(sc.seed, 2));
      std::uniform_int_distribution<std::size_t> pick(0, ids.size() - 1);
      r.hole_id = ids[pick(rng)];
    }
  }

  std::optional<InsertionPlan> plan;
  TaskState state;
  double last_t = -std::numeric_limits<double>::infinity();
  for (const StepEvent& ev : events) {
    TaskState next;
    if (ev.t < last_t && state.kind != StateKind::kFailed) {
      next = TaskState::failed("event timestamps decrease");
    } else {
      next = advance(state, ev);
    }
    last_t = std::max(last_t, ev.t);

    if (state.kind == StateKind::kPegGrasped && next.kind == StateKind::kInsertionPlanned) {
      if (!r.hole_id) {
        next = TaskState::failed("hole not detectable");
      } else {
        try {
          const vision::MaskSample mask =
              vision::synthesize_mask(scene, sc.camera, *r.hole_id, sc.vision_noise,
                                      sc.vision_dropout, mix_seed(sc.seed, 1), sc.mask);
          r.estimate = vision::to_world(sc.camera, vision::fit_circle3d(mask));
        } catch (const vision::NotDetectable&) {
          next = TaskState::failed("hole not detectable");
        } catch (const vision::FitError&) {
          next = TaskState::failed("hole not detectable");
        }
      }
      if (r.estimate) {
        try {
          plan = plan_insertion(sc.initial_pose, *r.estimate, sc.dmp, sc.params);
        } catch (const std::exception& e) {
          next = TaskState::failed(std::string("planning failed: ") + e.what());
        }
      }
    }
    if (state.kind == StateKind::kInsertionPlanned && next.kind == StateKind::kInserting) {
      r.outcome = execute_insertion(plan->path, vision::true_hole(scene, *r.hole_id), sc.params,
                                    &r.executed);
      r.jerk = metrics::jerk_metrics(r.executed);
    }
    state = next;
    r.events.push_back({ev, state});
  }
  r.final_state = state;
  r.success = state.kind != StateKind::kFailed && insertion_succeeded(r.outcome, sc.params);
  return r;
}

BatchResult run_batch(const AssemblyScenario& scenario, const BatchSettings& settings) {
  if (settings.n < 1) {
    throw std::invalid_argument("batch needs at least one trial");
  }
  if (!(settings.yaw_max >= settings.yaw_min)) {
    throw std::invalid_argument("placement yaw range is empty");
  }
  BatchResult b;
  b.trials.resize(settings.n);
  const std::vector<StepEvent> events = nominal_events();
  parallel_for(
      settings.n,
      [&](std::size_t i) {
        AssemblyScenario sc = scenario;
        sc.seed = mix_seed(settings.seed, i);
        std::mt19937_64 rng(sc.seed);
        std::uniform_real_distribution<double> yaw(settings.yaw_min, settings.yaw_max);
        sc.bar_yaw = settings.yaw_max > settings.yaw_min ? yaw(rng) : settings.yaw_min;
        b.trials[i] = execute_trial(sc, events);
      },
      settings.threads);

  std::size_t scored = 0;
  for (const TrialResult& t : b.trials) {
    b.successes += t.success ? 1 : 0;
    if (!std::isnan(t.outcome.lateral_error)) {
      ++scored;
      b.lateral_mean += t.outcome.lateral_error;
      b.lateral_max = std::max(b.lateral_max, t.outcome.lateral_error);
      b.tilt_mean += t.outcome.tilt;
      b.tilt_max = std::max(b.tilt_max, t.outcome.tilt);
    }
  }
  if (scored > 0) {
    b.lateral_mean /= static_cast<double>(scored);
    b.tilt_mean /= static_cast<double>(scored);
  }
  b.success_rate = static_cast<double>(b.successes) / static_cast<double>(settings.n);
  return b;
}

}  // namespace lfd::assembly
