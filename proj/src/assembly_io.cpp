#include "lfd/assembly_io.hpp"

#include <cmath>
#include <ostream>

#include <fmt/format.h>

#include "lfd/format.hpp"

namespace lfd::assembly {

using json_io::Json;

namespace {

// JSON has no NaN; missing measurements become null.
Json number_or_null(double v) { return std::isnan(v) ? Json(nullptr) : Json(v); }

std::string csv_number(double v) { return std::isnan(v) ? "nan" : format_number(v); }

}  // namespace

Json to_json(const TrialResult& t) {
  Json events = Json::array();
  for (const EventRecord& e : t.events) {
    Json rec{{"t", e.event.t}, {"kind", to_string(e.event.kind)}, {"state", to_string(e.state.kind)}};
    if (!e.state.reason.empty()) {
      rec["reason"] = e.state.reason;
    }
    events.push_back(std::move(rec));
  }
  Json j{{"seed", t.seed},
         {"bar_yaw", t.bar_yaw},
         {"hole_id", t.hole_id ? Json(*t.hole_id) : Json(nullptr)},
         {"success", t.success},
         {"final_state", to_string(t.final_state.kind)},
         {"lat_err_m", number_or_null(t.outcome.lateral_error)},
         {"tilt_rad", number_or_null(t.outcome.tilt)},
         {"depth_m", number_or_null(t.outcome.depth)},
         {"blocked", t.outcome.blocked},
         {"events", events}};
  if (!t.final_state.reason.empty()) {
    j["reason"] = t.final_state.reason;
  }
  if (t.estimate) {
    j["estimate"] = {{"center", json_io::from_vec3(t.estimate->center)},
                     {"axis", json_io::from_vec3(t.estimate->axis)},
                     {"radius", t.estimate->radius},
                     {"rms_residual", t.estimate->rms_residual}};
  }
  if (t.jerk) {
    j["jerk"] = {{"mean", t.jerk->mean}, {"std", t.jerk->std}, {"max", t.jerk->max}};
  }
  return j;
}

Json to_json(const BatchResult& b) {
  Json trials = Json::array();
  for (std::size_t i = 0; i < b.trials.size(); ++i) {
    Json t = to_json(b.trials[i]);
    t["trial"] = i;
    trials.push_back(std::move(t));
  }
  return {{"n", b.trials.size()},
          {"successes", b.successes},
          {"success_rate", b.success_rate},
          {"lat_err_mean_m", b.lateral_mean},
          {"lat_err_max_m", b.lateral_max},
          {"tilt_mean_rad", b.tilt_mean},
          {"tilt_max_rad", b.tilt_max},
          {"trials", trials}};
}

void write_trials_csv(std::ostream& out, const std::vector<TrialResult>& trials) {
  out << "trial,seed,hole_id,success,lat_err_m,tilt_rad,depth_m\n";
  for (std::size_t i = 0; i < trials.size(); ++i) {
    const TrialResult& t = trials[i];
    out << fmt::format("{},{},{},{},{},{},{}\n", i, t.seed,
                       t.hole_id ? std::to_string(*t.hole_id) : std::string(), t.success ? 1 : 0,
                       csv_number(t.outcome.lateral_error), csv_number(t.outcome.tilt),
                       csv_number(t.outcome.depth));
  }
}

}  // namespace lfd::assembly
