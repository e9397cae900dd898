#include "lfd/scene_json.hpp"

#include <cmath>
#include <ostream>


#include "lfd/format.hpp"

namespace lfd::vision {

using json_io::Json;
using json_io::Where;

Json to_json(const BarScene& scene, const CameraModel& camera) {
  Json holes = Json::array();
  for (const Hole& h : scene.holes) {
    holes.push_back({{"center", json_io::from_vec3(h.center)},
                     {"radius", h.radius},
                     {"axis", json_io::from_vec3(h.axis)}});
  }
  Json occluders = Json::array();
  for (const Box& b : scene.occluders) {
    occluders.push_back({{"pose", json_io::from_pose(b.pose)}, {"dims", json_io::from_vec3(b.dims)}});
  }
  return {{"bar_pose", json_io::from_pose(scene.bar_pose)},
          {"bar_dims", json_io::from_vec3(scene.bar_dims)},
          {"holes", holes},
          {"occluders", occluders},
          {"camera",
           {{"pose", json_io::from_pose(camera.pose)},
            {"fx", camera.fx},
            {"fy", camera.fy},
            {"cx", camera.cx},
            {"cy", camera.cy},
            {"width", camera.width},
            {"height", camera.height}}}};
}

SceneFile scene_from_json(const Json& j, const std::string& source) {
  const Where at{source, ""};
  json_io::reject_unknown_keys(j, {"bar_pose", "bar_dims", "holes", "occluders", "camera"}, at);
  SceneFile f;
  f.scene.bar_pose = json_io::to_pose(json_io::require(j, "bar_pose", at), at / "bar_pose");
  f.scene.bar_dims = json_io::to_vec3(json_io::require(j, "bar_dims", at), at / "bar_dims");

  const Json& holes = json_io::require(j, "holes", at);
  if (!holes.is_array()) {
    (at / "holes").fail("expected an array");
  }
  for (std::size_t i = 0; i < holes.size(); ++i) {
    const Where h_at = at / "holes" / std::to_string(i);
    json_io::reject_unknown_keys(holes[i], {"center", "radius", "axis"}, h_at);
    Hole h;
    h.center = json_io::to_vec3(json_io::require(holes[i], "center", h_at), h_at / "center");
    h.radius = json_io::to_double(json_io::require(holes[i], "radius", h_at), h_at / "radius");
    json_io::read_optional(holes[i], "axis", h_at, h.axis, json_io::to_vec3);
    f.scene.holes.push_back(h);
  }
  if (const auto it = j.find("occluders"); it != j.end()) {
    if (!it->is_array()) {
      (at / "occluders").fail("expected an array");
    }
    for (std::size_t i = 0; i < it->size(); ++i) {
      const Where o_at = at / "occluders" / std::to_string(i);
      json_io::reject_unknown_keys((*it)[i], {"pose", "dims"}, o_at);
      Box b;
      b.pose = json_io::to_pose(json_io::require((*it)[i], "pose", o_at), o_at / "pose");
      b.dims = json_io::to_vec3(json_io::require((*it)[i], "dims", o_at), o_at / "dims");
      f.scene.occluders.push_back(b);
    }
  }

  const Where c_at = at / "camera";
  const Json& cam = json_io::require(j, "camera", at);
  json_io::reject_unknown_keys(cam, {"pose", "fx", "fy", "cx", "cy", "width", "height"}, c_at);
  f.camera.pose = json_io::to_pose(json_io::require(cam, "pose", c_at), c_at / "pose");
  json_io::read_optional(cam, "fx", c_at, f.camera.fx, json_io::to_double);
  json_io::read_optional(cam, "fy", c_at, f.camera.fy, json_io::to_double);
  json_io::read_optional(cam, "cx", c_at, f.camera.cx, json_io::to_double);
  json_io::read_optional(cam, "cy", c_at, f.camera.cy, json_io::to_double);
  json_io::read_optional(cam, "width", c_at, f.camera.width, json_io::to_int);
  json_io::read_optional(cam, "height", c_at, f.camera.height, json_io::to_int);

  try {
    f.scene.validate();
  } catch (const std::invalid_argument& e) {
    (at / "holes").fail(e.what());
  }
  try {
    f.camera.validate();
  } catch (const std::invalid_argument& e) {
    c_at.fail(e.what());
  }
  return f;
}

SceneFile load_scene(const std::string& path) {
  return scene_from_json(json_io::read_file(path), path);
}

void write_estimates_csv(std::ostream& out, const std::vector<std::size_t>& ids,
                         const std::vector<HoleEstimate>& estimates) {
  out << "hole_id,cx,cy,cz,ax,ay,az,radius_m,rms_m\n";
  for (std::size_t i = 0; i < estimates.size(); ++i) {
    const HoleEstimate& e = estimates[i];
    out << ids[i];
    for (int k = 0; k < 3; ++k) {
      out << ',' << format_number(e.center[k]);
    }
    for (int k = 0; k < 3; ++k) {
      out << ',' << format_number(e.axis[k]);
    }
    out << ',' << format_number(e.radius) << ',' << format_number(e.rms_residual) << '\n';
  }
}

void write_sweep_csv(std::ostream& out, const SweepResult& result) {
  out << "yaw,hole_id,detected,center_err_m,radius_err_m\n";
  auto num = [](double v) { return std::isnan(v) ? std::string("nan") : format_number(v); };
  for (const SweepRow& r : result.rows) {
    out << format_number(r.yaw) << ',' << r.hole_id << ',' << (r.detected ? 1 : 0) << ','
        << num(r.center_err) << ',' << num(r.radius_err) << '\n';
  }
}

}  // namespace lfd::vision
