#include "lfd/cli.hpp"

#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "lfd/assembly_io.hpp"
#include "lfd/dmp_json.hpp"
#include "lfd/format.hpp"
#include "lfd/io_error.hpp"
#include "lfd/parallel.hpp"
#include "lfd/scene_json.hpp"
#include "lfd/trajectory_csv.hpp"

namespace lfd::app {

namespace fs = std::filesystem;
using json_io::Json;

Trajectory teach(const RunConfig& config, const std::string& controller) {
  ktc::VirtualHuman human = config.human;
  ktc::TeachSettings settings = config.teach.settings;
  settings.seed = config.seed;
  if (controller == "native") {
    human.force_saturation = config.teach.native_force_saturation;
    human.torque_saturation = config.teach.native_torque_saturation;
    return ktc::simulate_demonstration(human, config.teach.native, settings);
  }
  if (controller != "proposed") {
    throw std::invalid_argument("unknown controller '" + controller + "'");
  }
  return ktc::simulate_demonstration(human, config.teach.gains, settings);
}

dmp::PoseDmp default_primitive(const RunConfig& config) {
  RunConfig clean = config;
  clean.teach.settings.force_noise_sigma = 0.0;
  clean.teach.settings.torque_noise_sigma = 0.0;
  return dmp::fit_pose_dmp(teach(clean, "proposed"), config.dmp);
}

assembly::AssemblyScenario make_scenario(const RunConfig& config, const dmp::PoseDmp& primitive) {
  assembly::AssemblyScenario sc;
  sc.scene = config.scene;
  sc.camera = config.camera;
  sc.bar_yaw = config.assembly.yaw;
  sc.hole_id = config.assembly.hole_id;
  if (config.assembly.initial_pose) {
    sc.initial_pose = *config.assembly.initial_pose;
  } else if (!config.human.waypoints.empty()) {
    sc.initial_pose = config.human.waypoints.front();
  } else {
    sc.initial_pose = primitive.demo_start;
  }
  sc.dmp = primitive;
  sc.params = config.assembly.params;
  sc.vision_noise = config.vision.noise_sigma;
  sc.vision_dropout = config.vision.dropout;
  sc.mask = config.vision.mask;
  sc.seed = config.seed;
  return sc;
}

namespace {

// Bad command line or missing required input.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string quoted(const std::string& s) {
  std::string q = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') {
      q += '\\';
      q += c;
    } else if (c == '\n') {
      q += "\\n";
    } else {
      q += c;
    }
  }
  return q + "\"";
}

std::string absolute(const std::string& p) {
  return p.empty() ? p : fs::absolute(p).lexically_normal().string();
}

class Output {
 public:
  explicit Output(fs::path dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }

  void write(const std::string& name, const std::function<void(std::ostream&)>& body) const {
    const fs::path p = dir_ / name;
    std::ofstream f(p, std::ios::binary);
    if (!f) {
      throw std::runtime_error("cannot write " + p.string());
    }
    body(f);
    if (!f) {
      throw std::runtime_error("write failed: " + p.string());
    }
  }

  void json(const std::string& name, const Json& j) const {
    write(name, [&](std::ostream& o) { o << j.dump(2) << '\n'; });
  }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

 private:
  fs::path dir_;
};

struct Common {
  std::string config;
  std::string out = ".";
  std::uint64_t seed = 0;
  CLI::Option* seed_opt = nullptr;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.config, "JSON run configuration");
  sub->add_option("--out", c.out, "output directory")->capture_default_str();
  c.seed_opt = sub->add_option("--seed", c.seed, "master seed");
}

template <typename T>
void override_if(CLI::Option* opt, const T& value, T& target) {
  if (opt->count() > 0) {
    target = value;
  }
}

RunConfig resolve(const Common& c) {
  RunConfig cfg = c.config.empty() ? RunConfig::defaults() : load_config(c.config);
  override_if(c.seed_opt, c.seed, cfg.seed);
  return cfg;
}

void finalize_inputs(RunConfig& cfg) {
  auto& in = cfg.inputs;
  for (std::string* p : {&in.demo, &in.dmp, &in.scene, &in.events, &in.trajectory, &in.compare}) {
    *p = absolute(*p);
  }
  if (!in.scene.empty()) {
    const vision::SceneFile f = vision::load_scene(in.scene);
    cfg.scene = f.scene;
    cfg.camera = f.camera;
  }
}

const std::string& need(const std::string& path, const char* flag) {
  if (path.empty()) {
    throw UsageError(std::string(flag) + " is required");
  }
  return path;
}

dmp::PoseDmp primitive_for(const RunConfig& cfg) {
  return cfg.inputs.dmp.empty() ? default_primitive(cfg) : dmp::load_dmp(cfg.inputs.dmp);
}

void run_fit(const RunConfig& cfg, const Output& o, std::ostream& out) {
  const Trajectory demo = read_trajectory_csv(need(cfg.inputs.demo, "--demo"));
  const dmp::PoseDmp d = dmp::fit_pose_dmp(demo, cfg.dmp);
  dmp::save_dmp(o.path("dmp.json"), d);
  out << fmt::format("fit samples={} n_basis={} tau={}\n", demo.size(), d.basis.centers.size(),
                     format_number(d.canonical.tau));
}

void run_rollout(const RunConfig& cfg, const Output& o, std::ostream& out) {
  const dmp::PoseDmp d = dmp::load_dmp(need(cfg.inputs.dmp, "--dmp"));
  const Pose start = cfg.rollout.start.value_or(d.demo_start);
  Pose goal = cfg.rollout.goal.value_or(d.demo_goal);
  goal.position += cfg.rollout.goal_offset;
  const double tau = cfg.rollout.tau > 0.0 ? cfg.rollout.tau : d.canonical.tau;
  const Trajectory traj = dmp::rollout(d, start, goal, tau, cfg.rollout.dt);
  o.write("rollout.csv", [&](std::ostream& f) { write_trajectory_csv(f, traj); });
  out << fmt::format("rollout samples={} goal_err_m={}\n", traj.size(),
                     format_number((traj.back().pose.position - goal.position).norm()));
}

void run_teach(const RunConfig& cfg, const Output& o, std::ostream& out) {
  const Trajectory demo = teach(cfg, cfg.teach.controller);
  o.write("demo.csv", [&](std::ostream& f) { write_trajectory_csv(f, demo); });
  double max_force = 0.0;
  o.write("force_log.csv", [&](std::ostream& f) {
    f << "t,force_n,torque_nm\n";
    for (const TrajectorySample& s : demo) {
      const double fn = s.wrench->force.norm();
      max_force = std::max(max_force, fn);
      f << format_number(s.t) << ',' << format_number(fn) << ','
        << format_number(s.wrench->torque.norm()) << '\n';
    }
  });
  out << fmt::format("teach-sim controller={} duration_s={} max_force_n={}\n",
                     cfg.teach.controller, format_number(demo.duration()),
                     format_number(max_force));
}

void run_localize(const RunConfig& cfg, const Output& o, std::ostream& out) {
  const vision::BarScene scene = vision::yawed(cfg.scene, cfg.assembly.yaw);
  std::vector<std::size_t> ids;
  std::vector<vision::HoleEstimate> estimates;
  std::string missed;
  for (std::size_t h = 0; h < scene.holes.size(); ++h) {
    try {
      const vision::MaskSample mask =
          vision::synthesize_mask(scene, cfg.camera, h, cfg.vision.noise_sigma, cfg.vision.dropout,
                                  mix_seed(cfg.seed, 1, h), cfg.vision.mask);
      estimates.push_back(vision::to_world(cfg.camera, vision::fit_circle3d(mask)));
      ids.push_back(h);
    } catch (const vision::NotDetectable&) {
      missed += fmt::format(" {}", h);
    } catch (const vision::FitError&) {
      missed += fmt::format(" {}", h);
    }
  }
  o.write("estimates.csv", [&](std::ostream& f) { vision::write_estimates_csv(f, ids, estimates); });
  out << fmt::format("localize detected={}/{}", ids.size(), scene.holes.size());
  if (!missed.empty()) {
    out << " missed:" << missed;
  }
  out << '\n';
}

void run_sweep(const RunConfig& cfg, const Output& o, std::ostream& out) {
  vision::SweepSettings s;
  s.yaw_min = cfg.sweep.yaw_min;
  s.yaw_max = cfg.sweep.yaw_max;
  s.step = cfg.sweep.step;
  s.tolerance = cfg.sweep.tolerance;
  s.noise_sigma = cfg.vision.noise_sigma;
  s.dropout = cfg.vision.dropout;
  s.seed = cfg.seed;
  s.mask = cfg.vision.mask;
  const vision::SweepResult r = vision::detection_range_sweep(cfg.scene, cfg.camera, s);
  o.write("sweep.csv", [&](std::ostream& f) { vision::write_sweep_csv(f, r); });
  Json holes = Json::array();
  for (std::size_t h = 0; h < r.intervals.size(); ++h) {
    Json iv = Json::array();
    for (const vision::YawInterval& i : r.intervals[h]) {
      iv.push_back({i.lo, i.hi});
      out << fmt::format("hole {} detectable yaw [{}, {}]\n", h, format_number(i.lo),
                         format_number(i.hi));
    }
    holes.push_back({{"hole_id", h}, {"intervals", iv}});
  }
  o.json("intervals.json", {{"step", s.step}, {"holes", holes}});
}

void run_trial(const RunConfig& cfg, const Output& o, std::ostream& out) {
  const std::vector<assembly::StepEvent> events = cfg.inputs.events.empty()
                                                      ? assembly::nominal_events()
                                                      : assembly::load_events(cfg.inputs.events);
  const assembly::TrialResult r =
      assembly::execute_trial(make_scenario(cfg, primitive_for(cfg)), events);
  o.json("trial.json", assembly::to_json(r));
  o.write("trial.csv", [&](std::ostream& f) { assembly::write_trials_csv(f, {r}); });
  if (!r.executed.empty()) {
    o.write("executed.csv", [&](std::ostream& f) { write_trajectory_csv(f, r.executed); });
  }
  out << fmt::format("trial success={} state={}", r.success, assembly::to_string(r.final_state.kind));
  if (!r.final_state.reason.empty()) {
    out << " reason=" << quoted(r.final_state.reason);
  }
  out << '\n';
}

void run_batch(const RunConfig& cfg, const Output& o, std::ostream& out) {
  assembly::BatchSettings s;
  s.n = cfg.assembly.n;
  s.seed = cfg.seed;
  s.yaw_min = cfg.assembly.yaw_min;
  s.yaw_max = cfg.assembly.yaw_max;
  const assembly::BatchResult b = assembly::run_batch(make_scenario(cfg, primitive_for(cfg)), s);
  o.json("batch.json", assembly::to_json(b));
  o.write("trials.csv", [&](std::ostream& f) { assembly::write_trials_csv(f, b.trials); });
  out << fmt::format("trials={} successes={}\n", b.trials.size(), b.successes);
  out << "success_rate=" << format_exact(b.success_rate) << '\n';
}

Json jerk_json(const metrics::JerkReport& j) {
  return {{"mean", j.mean},
          {"std", j.std},
          {"max", j.max},
          {"angular_mean", j.angular_mean},
          {"angular_std", j.angular_std},
          {"angular_max", j.angular_max},
          {"samples", j.samples}};
}

// Jerk needs a uniform grid; anything else is resampled at its mean step.
Trajectory uniform(const Trajectory& t) {
  if (t.size() < 2 || is_uniformly_sampled(t)) {
    return t;
  }
  return resample_trajectory(t, t.duration() / static_cast<double>(t.size() - 1));
}

void run_metrics(const RunConfig& cfg, const Output& o, std::ostream& out) {
  const Trajectory a = uniform(read_trajectory_csv(need(cfg.inputs.trajectory, "--traj")));
  const metrics::JerkReport ja = metrics::jerk_metrics(a);
  Json doc = {{"trajectory", {{"duration_s", a.duration()}, {"jerk", jerk_json(ja)}}}};

  std::vector<metrics::SummaryRow> timing = {metrics::summary_row("trajectory", a.duration(), 0.0, 2)};
  std::vector<metrics::SummaryRow> jerk = {metrics::summary_row("trajectory", ja.mean, ja.std, 3)};
  if (!cfg.inputs.compare.empty()) {
    const Trajectory b = uniform(read_trajectory_csv(cfg.inputs.compare));
    const metrics::JerkReport jb = metrics::jerk_metrics(b);
    doc["compare"] = {{"duration_s", b.duration()}, {"jerk", jerk_json(jb)}};
    Json cmp = Json::array();
    for (const metrics::MetricComparison& m : metrics::compare_demonstrations(a, b)) {
      cmp.push_back({{"metric", m.metric}, {"a", m.a}, {"b", m.b}, {"ratio", m.ratio},
                     {"winner", m.winner}});
    }
    doc["comparison"] = cmp;
    timing.push_back(metrics::summary_row("compare", b.duration(), 0.0, 2));
    jerk.push_back(metrics::summary_row("compare", jb.mean, jb.std, 3));
  }
  timing.insert(timing.end(), cfg.reference_timing.begin(), cfg.reference_timing.end());
  jerk.insert(jerk.end(), cfg.reference_jerk.begin(), cfg.reference_jerk.end());
  o.json("metrics.json", doc);
  out << metrics::render_table("Duration [s]", timing) << '\n'
      << metrics::render_table("Jerk norm, mean ± std [m/s^3]", jerk);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Learning-from-demonstration assembly toolkit", "lfd"};
  app.require_subcommand(1);

  Common common;
  std::string demo, dmp_path, scene, events, traj, compare, controller;
  std::vector<double> goal_offset;
  double tau = 0, dt = 0, yaw = 0, yaw_min = 0, yaw_max = 0, step = 0, force_noise = 0;
  std::size_t hole = 0, n = 0;

  struct Sub {
    CLI::App* app;
    void (*run)(const RunConfig&, const Output&, std::ostream&);
  };
  std::vector<Sub> subs;
  std::vector<std::pair<CLI::Option*, std::function<void(RunConfig&)>>> setters;
  auto set = [&](CLI::Option* opt, std::function<void(RunConfig&)> fn) {
    setters.emplace_back(opt, std::move(fn));
  };

  auto* fit = app.add_subcommand("fit", "fit a pose DMP to a demonstration CSV");
  set(fit->add_option("--demo", demo, "demonstration CSV"),
      [&](RunConfig& c) { c.inputs.demo = demo; });
  subs.push_back({fit, run_fit});

  auto* roll = app.add_subcommand("rollout", "integrate a fitted DMP");
  set(roll->add_option("--dmp", dmp_path, "DMP JSON"), [&](RunConfig& c) { c.inputs.dmp = dmp_path; });
  set(roll->add_option("--tau", tau, "duration, s"), [&](RunConfig& c) { c.rollout.tau = tau; });
  set(roll->add_option("--dt", dt, "step, s"), [&](RunConfig& c) { c.rollout.dt = dt; });
  set(roll->add_option("--goal-offset", goal_offset, "x y z added to the goal")->expected(3),
      [&](RunConfig& c) {
        c.rollout.goal_offset = {goal_offset[0], goal_offset[1], goal_offset[2]};
      });
  subs.push_back({roll, run_rollout});

  auto* teach_cmd = app.add_subcommand("teach-sim", "simulate a kinesthetic teaching run");
  set(teach_cmd->add_option("--controller", controller, "proposed or native")
          ->check(CLI::IsMember({"proposed", "native"})),
      [&](RunConfig& c) { c.teach.controller = controller; });
  set(teach_cmd->add_option("--force-noise", force_noise, "force sensor noise sigma, N"),
      [&](RunConfig& c) {
        c.teach.settings.force_noise_sigma = force_noise;
        c.teach.settings.torque_noise_sigma = 0.1 * force_noise;
      });
  subs.push_back({teach_cmd, run_teach});

  auto* loc = app.add_subcommand("localize", "estimate hole poses from synthetic masks");
  auto* sweep = app.add_subcommand("sweep", "detection range over bar yaw");
  auto* trial = app.add_subcommand("trial", "one assembly trial");
  auto* batch = app.add_subcommand("batch", "repeated assembly trials");
  for (CLI::App* s : {loc, sweep, trial, batch}) {
    set(s->add_option("--scene", scene, "scene JSON"), [&](RunConfig& c) { c.inputs.scene = scene; });
  }
  for (CLI::App* s : {loc, trial}) {
    set(s->add_option("--yaw", yaw, "bar yaw, rad"), [&](RunConfig& c) { c.assembly.yaw = yaw; });
  }
  for (CLI::App* s : {trial, batch}) {
    set(s->add_option("--dmp", dmp_path, "DMP JSON (default: fitted to a simulated demo)"),
        [&](RunConfig& c) { c.inputs.dmp = dmp_path; });
  }
  set(sweep->add_option("--yaw-min", yaw_min, "rad"), [&](RunConfig& c) { c.sweep.yaw_min = yaw_min; });
  set(sweep->add_option("--yaw-max", yaw_max, "rad"), [&](RunConfig& c) { c.sweep.yaw_max = yaw_max; });
  set(sweep->add_option("--step", step, "rad"), [&](RunConfig& c) { c.sweep.step = step; });
  set(trial->add_option("--events", events, "event file"),
      [&](RunConfig& c) { c.inputs.events = events; });
  set(trial->add_option("--hole", hole, "hole index"), [&](RunConfig& c) { c.assembly.hole_id = hole; });
  set(batch->add_option("--n", n, "number of trials")->check(CLI::PositiveNumber),
      [&](RunConfig& c) { c.assembly.n = n; });
  subs.push_back({loc, run_localize});
  subs.push_back({sweep, run_sweep});
  subs.push_back({trial, run_trial});
  subs.push_back({batch, run_batch});

  auto* met = app.add_subcommand("metrics", "jerk and timing reports for trajectory CSVs");
  set(met->add_option("--traj", traj, "trajectory CSV"),
      [&](RunConfig& c) { c.inputs.trajectory = traj; });
  set(met->add_option("--compare", compare, "second trajectory CSV"),
      [&](RunConfig& c) { c.inputs.compare = compare; });
  subs.push_back({met, run_metrics});

  // --config/--out/--seed on every subcommand; only one parses per run.
  for (const Sub& s : subs) {
    add_common(s.app, common);
  }

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error kind=usage msg=" << quoted(e.what()) << '\n' << app.help();
    return 2;
  }

  try {
    const Sub* chosen = nullptr;
    for (const Sub& s : subs) {
      if (s.app->parsed()) {
        chosen = &s;
      }
    }
    common.seed_opt = chosen->app->get_option("--seed");
    RunConfig cfg = resolve(common);
    for (auto& [opt, fn] : setters) {
      if (opt->count() > 0) {
        fn(cfg);
      }
    }
    finalize_inputs(cfg);
    const Output o(common.out);
    o.json("resolved_config.json", to_json(cfg));
    chosen->run(cfg, o, out);
    return 0;
  } catch (const ParseError& e) {
    err << fmt::format("error kind={} file={} line={} field={} msg={}\n",
                       e.field() == "file" ? "input" : "parse", e.file(), e.line(), e.field(),
                       quoted(e.what()));
  } catch (const UsageError& e) {
    err << "error kind=usage msg=" << quoted(e.what()) << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error kind=runtime msg=" << quoted(e.what()) << '\n';
  }
  return 1;
}

}  // namespace lfd::app
