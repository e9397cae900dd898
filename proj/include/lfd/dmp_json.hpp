#pragma once

#include <string>

#include "lfd/dmp.hpp"
#include "lfd/json_io.hpp"

namespace lfd::dmp {

// Parameter file layout:
//   {alpha_s, alpha_z, beta_z, tau, N, gate_mode, centers[N], widths[N],
//    weights_pos[3][N], weights_rot[3][N], demo_start, demo_goal}
// Doubles are written in shortest round-trip form, so save/load is exact.
json_io::Json to_json(const PoseDmp& dmp);
PoseDmp from_json(const json_io::Json& j, const std::string& source);

void save_dmp(const std::string& path, const PoseDmp& dmp);
PoseDmp load_dmp(const std::string& path);

}  // namespace lfd::dmp
