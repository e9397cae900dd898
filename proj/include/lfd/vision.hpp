#pragma once

// Hole localization from masked depth points: a controllable mask oracle
// stands in for the segmentation network, then a plane fit and an in-plane
// circle fit recover the hole center, axis and radius.
//
// Frames: the bar frame has its origin at the gripper point, the bar extends
// along +x, and its top face is z = height / 2. The camera frame is the usual
// pinhole one (x right, y down, z forward); mask points are expressed in it.

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lfd/se3.hpp"

namespace lfd::vision {

struct Hole {
  Eigen::Vector3d center = Eigen::Vector3d::Zero();  // bar frame, on the top face
  double radius = 0.006;
  Eigen::Vector3d axis = Eigen::Vector3d::UnitZ();  // bar frame, pointing out of the face
};

// Axis-aligned box in its own frame, centered at the frame origin.
struct Box {
  Pose pose;
  Eigen::Vector3d dims = Eigen::Vector3d::Ones();  // full extents along x, y, z
};

struct BarScene {
  Pose bar_pose;
  Eigen::Vector3d bar_dims{0.24, 0.04, 0.02};  // length, width, height
  std::vector<Hole> holes;
  std::vector<Box> occluders;  // extra obstacles in world frame (e.g. the gripper)

  // Throws std::invalid_argument unless every hole sits on the top face
  // inside its outline, with positive radius and unit axis.
  void validate() const;

  // The bar as a world-frame box (its frame origin is the gripper point, so
  // the box is offset by half a length along +x).
  Box bar_box() const;

  static BarScene desk_default();
};

// The scene with the bar yawed by `yaw` about the world z axis through its
// gripper point.
BarScene yawed(const BarScene& scene, double yaw);

struct CameraModel {
  Pose pose;  // camera frame in world
  double fx = 600.0;
  double fy = 600.0;
  double cx = 320.0;
  double cy = 240.0;
  int width = 640;
  int height = 480;

  void validate() const;
  // Pixel coordinates of a camera-frame point, or nullopt when it is behind
  // the camera or outside the image.
  std::optional<Eigen::Vector2d> project(const Eigen::Vector3d& p_cam) const;

  static CameraModel desk_default();
};

struct HoleTruth {
  Eigen::Vector3d center;  // world
  Eigen::Vector3d axis;    // world
  double radius = 0.0;
};
HoleTruth true_hole(const BarScene& scene, std::size_t hole_id);

struct MaskSample {
  std::vector<Eigen::Vector3d> points;  // camera frame
  std::size_t hole_id = 0;
  double noise_sigma = 0.0;
  double dropout = 0.0;
};

class NotDetectable : public std::runtime_error {
 public:
  explicit NotDetectable(const std::string& why) : std::runtime_error("not detectable: " + why) {}
};

struct MaskSettings {
  int rim_points = 200;
  double max_view_angle = 1.3089969389957472;  // 75 degrees off the hole axis
};

// M rim points at equal angles, kept only if the whole rim is in the image,
// the hole faces the camera within the view-angle limit and no box blocks
// the line of sight. Then isotropic Gaussian noise (seeded) and dropout of
// llround(dropout * M) randomly chosen points.
MaskSample synthesize_mask(const BarScene& scene, const CameraModel& cam, std::size_t hole_id,
                           double noise_sigma, double dropout, std::uint64_t seed,
                           const MaskSettings& settings = {});

struct PlaneFit {
  Eigen::Vector3d normal;  // unit, pointing toward `viewpoint`
  double offset = 0.0;     // plane: normal . p + offset = 0
  double rms = 0.0;        // RMS point-to-plane distance
  Eigen::Vector3d centroid;
};

class FitError : public std::runtime_error {
 public:
  FitError(std::string check, const std::string& what)
      : std::runtime_error(what), check_(std::move(check)) {}
  const std::string& check() const noexcept { return check_; }

 private:
  std::string check_;
};

// Centroid plus smallest principal direction. Throws FitError("points") for
// fewer than 3 points and FitError("degenerate") for collinear clouds.
PlaneFit fit_plane(std::span<const Eigen::Vector3d> points,
                   const Eigen::Vector3d& viewpoint = Eigen::Vector3d::Zero());

struct HoleEstimate {
  Eigen::Vector3d center;
  Eigen::Vector3d axis;  // unit, toward the camera
  double radius = 0.0;
  double rms_residual = 0.0;  // RMS 3-D distance of the points to the circle
};

// Plane fit, algebraic (Kasa) circle fit in the plane, one Gauss-Newton pass
// on the geometric residual, then lift back to 3-D. Throws FitError naming
// the failed check ("points", "degenerate", "arc_coverage") when fewer than
// 3 points are given or they span less than `min_arc` radians of the circle.
HoleEstimate fit_circle3d(std::span<const Eigen::Vector3d> points,
                          double min_arc = 1.5707963267948966);
HoleEstimate fit_circle3d(const MaskSample& sample);

// Camera-frame estimate expressed in world coordinates.
HoleEstimate to_world(const CameraModel& cam, const HoleEstimate& est);

struct SweepSettings {
  double yaw_min = -1.0;
  double yaw_max = 1.0;
  double step = 0.01;
  double tolerance = 1e-3;  // m, center error that still counts as detected
  double noise_sigma = 0.0;
  double dropout = 0.0;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  MaskSettings mask;
};

struct SweepRow {
  double yaw = 0.0;
  std::size_t hole_id = 0;
  bool detected = false;
  double center_err = 0.0;  // NaN when no estimate was produced
  double radius_err = 0.0;
};

struct YawInterval {
  double lo = 0.0;
  double hi = 0.0;
};

struct SweepResult {
  std::vector<double> yaws;
  std::vector<SweepRow> rows;  // yaw-major, then hole id
  std::vector<std::vector<YawInterval>> intervals;  // per hole, maximal runs
};

// Grid of yaws yaw_min + k * step up to yaw_max. Each (yaw, hole) uses its
// own derived seed, so the result does not depend on evaluation order.
// Throws std::invalid_argument for step <= 0 or an empty range.
SweepResult detection_range_sweep(const BarScene& scene, const CameraModel& cam,
                                  const SweepSettings& settings);

// Maximal runs of consecutive detections over the given yaw grid.
std::vector<YawInterval> contiguous_intervals(std::span<const double> yaws,
                                              const std::vector<bool>& detected);

}  // namespace lfd::vision
