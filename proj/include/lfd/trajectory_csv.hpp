#pragma once

#include <iosfwd>
#include <string>

#include "lfd/trajectory.hpp"

namespace lfd {

// Trajectory files: header `t,px,py,pz,qw,qx,qy,qz` optionally followed by
// `fx,fy,fz,tx,ty,tz`, one sample per row, '.' decimal separator. Numbers are
// written with 9 significant digits.
//
// Readers throw ParseError naming the source, 1-based line and column.
Trajectory read_trajectory_csv(std::istream& in, const std::string& source_name);
Trajectory read_trajectory_csv(const std::string& path);

void write_trajectory_csv(std::ostream& out, const Trajectory& traj);
void write_trajectory_csv(const std::string& path, const Trajectory& traj);

}  // namespace lfd
