#pragma once

#include <iosfwd>

#include "lfd/assembly.hpp"
#include "lfd/json_io.hpp"

namespace lfd::assembly {

json_io::Json to_json(const TrialResult& trial);
json_io::Json to_json(const BatchResult& batch);

// `trial,seed,hole_id,success,lat_err_m,tilt_rad,depth_m`; hole_id is empty
// when no hole could be chosen, missing measurements are written as nan.
void write_trials_csv(std::ostream& out, const std::vector<TrialResult>& trials);

}  // namespace lfd::assembly
