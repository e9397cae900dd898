#pragma once

#include <iosfwd>
#include <string>

#include "lfd/json_io.hpp"
#include "lfd/vision.hpp"

namespace lfd::vision {

// Scene file:
//   {"bar_pose": pose, "bar_dims": [l, w, h],
//    "holes": [{"center": [x, y, z], "radius": r, "axis": [x, y, z]}],
//    "occluders": [{"pose": pose, "dims": [x, y, z]}],   (optional)
//    "camera": {"pose": pose, "fx", "fy", "cx", "cy", "width", "height"}}
// Poses are {"position": [x, y, z], "orientation": [w, x, y, z]}.
struct SceneFile {
  BarScene scene;
  CameraModel camera;
};

json_io::Json to_json(const BarScene& scene, const CameraModel& camera);
SceneFile scene_from_json(const json_io::Json& j, const std::string& source);
SceneFile load_scene(const std::string& path);

// `hole_id,cx,cy,cz,ax,ay,az,radius_m,rms_m` (world frame)
void write_estimates_csv(std::ostream& out, const std::vector<std::size_t>& ids,
                         const std::vector<HoleEstimate>& estimates);
// `yaw,hole_id,detected,center_err_m,radius_err_m`
void write_sweep_csv(std::ostream& out, const SweepResult& result);

}  // namespace lfd::vision
