#include "lfd/vision.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "lfd/parallel.hpp"

namespace lfd::vision {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Any unit vector perpendicular to `axis`, chosen deterministically.
Eigen::Vector3d perpendicular(const Eigen::Vector3d& axis) {
  Eigen::Vector3d u = Eigen::Vector3d::UnitX() - axis.x() * axis;
  if (u.norm() < 1e-6) {
    u = Eigen::Vector3d::UnitY() - axis.y() * axis;
  }
  return u.normalized();
}

// Slab test: does the open segment from `a` to just before `b` enter the box?
bool segment_hits_box(const Eigen::Vector3d& a, const Eigen::Vector3d& b, const Box& box) {
  const Pose inv = box.pose.inverse();
  const Eigen::Vector3d p = inv.transform_point(a);
  const Eigen::Vector3d d = inv.transform_point(b) - p;
  const Eigen::Vector3d half = 0.5 * box.dims;
  double t0 = 0.0;
  double t1 = 1.0 - 1e-9;
  for (int i = 0; i < 3; ++i) {
    if (std::abs(d[i]) < 1e-15) {
      if (p[i] < -half[i] || p[i] > half[i]) {
        return false;
      }
      continue;
    }
    double ta = (-half[i] - p[i]) / d[i];
    double tb = (half[i] - p[i]) / d[i];
    if (ta > tb) {
      std::swap(ta, tb);
    }
    t0 = std::max(t0, ta);
    t1 = std::min(t1, tb);
    if (t0 > t1) {
      return false;
    }
  }
  // Grazing contact with the face the point lies on is not an occlusion.
  return t1 - t0 > 1e-9;
}

}  // namespace

void BarScene::validate() const {
  if (!(bar_dims.array() > 0.0).all() || !bar_dims.allFinite()) {
    throw std::invalid_argument("bar dimensions must be positive");
  }
  for (std::size_t i = 0; i < holes.size(); ++i) {
    const Hole& h = holes[i];
    const std::string id = "hole " + std::to_string(i);
    if (!(h.radius > 0.0) || !std::isfinite(h.radius)) {
      throw std::invalid_argument(id + ": radius must be positive");
    }
    if (std::abs(h.axis.norm() - 1.0) > 1e-9) {
      throw std::invalid_argument(id + ": axis must be a unit vector");
    }
    if (std::abs(h.center.z() - 0.5 * bar_dims.z()) > 1e-9) {
      throw std::invalid_argument(id + ": center must lie on the top face");
    }
    if (h.center.x() - h.radius < 0.0 || h.center.x() + h.radius > bar_dims.x() ||
        std::abs(h.center.y()) + h.radius > 0.5 * bar_dims.y()) {
      throw std::invalid_argument(id + ": hole does not fit inside the top face");
    }
  }
  for (const Box& b : occluders) {
    if (!(b.dims.array() > 0.0).all()) {
      throw std::invalid_argument("occluder dimensions must be positive");
    }
  }
}

Box BarScene::bar_box() const {
  return {compose(bar_pose, Pose{{0.5 * bar_dims.x(), 0.0, 0.0}, UnitQuaternion()}), bar_dims};
}

BarScene BarScene::desk_default() {
  BarScene s;
  s.bar_pose.position = {0.5, 0.0, 0.1};
  const double top = 0.5 * s.bar_dims.z();
  for (const double x : {0.06, 0.12, 0.18}) {
    s.holes.push_back({{x, 0.0, top}, 0.006, Eigen::Vector3d::UnitZ()});
  }
  return s;
}

BarScene yawed(const BarScene& scene, double yaw) {
  BarScene out = scene;
  out.bar_pose.orientation = quat_mul(
      UnitQuaternion::from_axis_angle(Eigen::Vector3d::UnitZ(), yaw), scene.bar_pose.orientation);
  return out;
}

void CameraModel::validate() const {
  if (!(fx > 0.0) || !(fy > 0.0) || width <= 0 || height <= 0) {
    throw std::invalid_argument("camera intrinsics must be positive");
  }
}

std::optional<Eigen::Vector2d> CameraModel::project(const Eigen::Vector3d& p) const {
  if (!(p.z() > 0.0)) {
    return std::nullopt;
  }
  const Eigen::Vector2d px{fx * p.x() / p.z() + cx, fy * p.y() / p.z() + cy};
  if (px.x() < 0.0 || px.y() < 0.0 || px.x() > width - 1 || px.y() > height - 1) {
    return std::nullopt;
  }
  return px;
}

CameraModel CameraModel::desk_default() {
  CameraModel c;
  c.pose.position = {0.60, 0.0, 0.40};
  c.pose.orientation = UnitQuaternion(0.0, 1.0, 0.0, 0.0);  // looking straight down
  return c;
}

HoleTruth true_hole(const BarScene& scene, std::size_t hole_id) {
  if (hole_id >= scene.holes.size()) {
    throw std::out_of_range("hole id " + std::to_string(hole_id) + " not in scene");
  }
  const Hole& h = scene.holes[hole_id];
  return {scene.bar_pose.transform_point(h.center), scene.bar_pose.transform_vector(h.axis),
          h.radius};
}

MaskSample synthesize_mask(const BarScene& scene, const CameraModel& cam, std::size_t hole_id,
                           double noise_sigma, double dropout, std::uint64_t seed,
                           const MaskSettings& settings) {
  if (!(noise_sigma >= 0.0) || !(dropout >= 0.0 && dropout < 1.0)) {
    throw std::invalid_argument("noise sigma must be >= 0 and dropout in [0, 1)");
  }
  if (settings.rim_points < 3) {
    throw std::invalid_argument("mask needs at least 3 rim points");
  }
  const HoleTruth hole = true_hole(scene, hole_id);
  const Eigen::Vector3d to_cam = cam.pose.position - hole.center;
  const double facing = hole.axis.dot(to_cam.normalized());
  if (facing <= 0.0) {
    throw NotDetectable("hole faces away from the camera");
  }
  if (std::acos(std::min(1.0, facing)) > settings.max_view_angle) {
    throw NotDetectable("viewing angle too oblique");
  }

  std::vector<Box> boxes = scene.occluders;
  boxes.push_back(scene.bar_box());
  const Pose world_to_cam = cam.pose.inverse();
  const Eigen::Vector3d u = perpendicular(hole.axis);
  const Eigen::Vector3d v = hole.axis.cross(u);
  const auto m = static_cast<std::size_t>(settings.rim_points);

  MaskSample out;
  out.hole_id = hole_id;
  out.noise_sigma = noise_sigma;
  out.dropout = dropout;
  out.points.reserve(m);
  for (std::size_t k = 0; k < m; ++k) {
    const double a = kTwoPi * static_cast<double>(k) / static_cast<double>(m);
    const Eigen::Vector3d p =
        hole.center + hole.radius * (std::cos(a) * u + std::sin(a) * v);
    const Eigen::Vector3d pc = world_to_cam.transform_point(p);
    if (!cam.project(pc)) {
      throw NotDetectable("hole rim outside the image");
    }
    for (const Box& b : boxes) {
      if (segment_hits_box(cam.pose.position, p, b)) {
        throw NotDetectable("hole rim occluded");
      }
    }
    out.points.push_back(pc);
  }

  std::mt19937_64 rng(seed);
  if (noise_sigma > 0.0) {
    std::normal_distribution<double> normal(0.0, noise_sigma);
    for (auto& p : out.points) {
      for (int i = 0; i < 3; ++i) {
        p[i] += normal(rng);
      }
    }
  }
  const auto drop = static_cast<std::size_t>(std::llround(dropout * static_cast<double>(m)));
  if (drop > 0) {
    std::vector<std::size_t> order(m);
    for (std::size_t i = 0; i < m; ++i) {
      order[i] = i;
    }
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<bool> keep(m, true);
    for (std::size_t i = 0; i < drop; ++i) {
      keep[order[i]] = false;
    }
    std::vector<Eigen::Vector3d> kept;
    kept.reserve(m - drop);
    for (std::size_t i = 0; i < m; ++i) {
      if (keep[i]) {
        kept.push_back(out.points[i]);
      }
    }
    out.points = std::move(kept);
  }
  return out;
}

PlaneFit fit_plane(std::span<const Eigen::Vector3d> points, const Eigen::Vector3d& viewpoint) {
  if (points.size() < 3) {
    throw FitError("points", "plane fit needs at least 3 points, got " +
                                 std::to_string(points.size()));
  }
  Eigen::Vector3d centroid = Eigen::Vector3d::Zero();
  for (const auto& p : points) {
    centroid += p;
  }
  centroid /= static_cast<double>(points.size());
  Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
  for (const auto& p : points) {
    const Eigen::Vector3d d = p - centroid;
    cov += d * d.transpose();
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(cov);
  const Eigen::Vector3d ev = eig.eigenvalues();
  if (!(ev[2] > 0.0) || ev[1] <= 1e-12 * ev[2]) {
    throw FitError("degenerate", "points are collinear or coincident");
  }
  PlaneFit fit;
  fit.centroid = centroid;
  fit.normal = eig.eigenvectors().col(0).normalized();
  if (fit.normal.dot(viewpoint - centroid) < 0.0) {
    fit.normal = -fit.normal;
  }
  fit.offset = -fit.normal.dot(centroid);
  double ss = 0.0;
  for (const auto& p : points) {
    const double d = fit.normal.dot(p) + fit.offset;
    ss += d * d;
  }
  fit.rms = std::sqrt(ss / static_cast<double>(points.size()));
  return fit;
}

HoleEstimate fit_circle3d(std::span<const Eigen::Vector3d> points, double min_arc) {
  const PlaneFit plane = fit_plane(points);
  const Eigen::Vector3d u = perpendicular(plane.normal);
  const Eigen::Vector3d v = plane.normal.cross(u);
  const auto n = static_cast<Eigen::Index>(points.size());

  // In-plane coordinates relative to the centroid.
  Eigen::MatrixXd xy(n, 2);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Vector3d d = points[static_cast<std::size_t>(i)] - plane.centroid;
    xy(i, 0) = d.dot(u);
    xy(i, 1) = d.dot(v);
  }

  // Kasa: x^2 + y^2 = 2 a x + 2 b y + c.
  Eigen::MatrixXd a(n, 3);
  Eigen::VectorXd rhs(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    a(i, 0) = 2.0 * xy(i, 0);
    a(i, 1) = 2.0 * xy(i, 1);
    a(i, 2) = 1.0;
    rhs[i] = xy.row(i).squaredNorm();
  }
  const Eigen::Vector3d sol = a.colPivHouseholderQr().solve(rhs);
  Eigen::Vector2d c{sol[0], sol[1]};
  const double r2 = sol[2] + c.squaredNorm();
  if (!(r2 > 0.0) || !std::isfinite(r2)) {
    throw FitError("degenerate", "circle fit failed");
  }
  double r = std::sqrt(r2);

  auto coverage = [&](const Eigen::Vector2d& center) {
    std::vector<double> ang(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
      ang[static_cast<std::size_t>(i)] =
          std::atan2(xy(i, 1) - center.y(), xy(i, 0) - center.x());
    }
    std::sort(ang.begin(), ang.end());
    double gap = ang.front() + kTwoPi - ang.back();
    for (std::size_t i = 1; i < ang.size(); ++i) {
      gap = std::max(gap, ang[i] - ang[i - 1]);
    }
    return kTwoPi - gap;
  };
  const double arc = coverage(c);
  if (arc < min_arc) {
    throw FitError("arc_coverage", "points span " + std::to_string(arc) +
                                       " rad of arc, need at least " + std::to_string(min_arc));
  }

  // One Gauss-Newton step on r_i = |p_i - c| - r.
  Eigen::MatrixXd jac(n, 3);
  Eigen::VectorXd res(n);
  bool usable = true;
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Vector2d d = xy.row(i).transpose() - c;
    const double dn = d.norm();
    if (dn == 0.0) {
      usable = false;
      break;
    }
    jac(i, 0) = -d.x() / dn;
    jac(i, 1) = -d.y() / dn;
    jac(i, 2) = -1.0;
    res[i] = dn - r;
  }
  if (usable) {
    const Eigen::Vector3d step = jac.colPivHouseholderQr().solve(-res);
    if (step.allFinite() && r + step[2] > 0.0) {
      c += step.head<2>();
      r += step[2];
    }
  }

  HoleEstimate est;
  est.center = plane.centroid + c.x() * u + c.y() * v;
  est.axis = plane.normal;
  est.radius = r;
  double ss = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Vector3d p = points[static_cast<std::size_t>(i)] - est.center;
    const double h = p.dot(est.axis);
    const double rho = (p - h * est.axis).norm();
    ss += h * h + (rho - r) * (rho - r);
  }
  est.rms_residual = std::sqrt(ss / static_cast<double>(n));
  return est;
}

HoleEstimate fit_circle3d(const MaskSample& sample) { return fit_circle3d(sample.points); }

HoleEstimate to_world(const CameraModel& cam, const HoleEstimate& est) {
  HoleEstimate w = est;
  w.center = cam.pose.transform_point(est.center);
  w.axis = cam.pose.transform_vector(est.axis);
  return w;
}

std::vector<YawInterval> contiguous_intervals(std::span<const double> yaws,
                                              const std::vector<bool>& detected) {
  std::vector<YawInterval> out;
  for (std::size_t i = 0; i < yaws.size(); ++i) {
    if (!detected[i]) {
      continue;
    }
    if (i > 0 && detected[i - 1]) {
      out.back().hi = yaws[i];
    } else {
      out.push_back({yaws[i], yaws[i]});
    }
  }
  return out;
}

SweepResult detection_range_sweep(const BarScene& scene, const CameraModel& cam,
                                  const SweepSettings& settings) {
  if (!(settings.step > 0.0) || !std::isfinite(settings.step)) {
    throw std::invalid_argument("sweep step must be positive");
  }
  if (!(settings.yaw_max >= settings.yaw_min)) {
    throw std::invalid_argument("sweep range is empty");
  }
  if (scene.holes.empty()) {
    throw std::invalid_argument("scene has no holes");
  }
  scene.validate();
  cam.validate();

  SweepResult result;
  const auto count = static_cast<std::size_t>(
      std::floor((settings.yaw_max - settings.yaw_min) / settings.step + 1e-9)) + 1;
  for (std::size_t k = 0; k < count; ++k) {
    result.yaws.push_back(settings.yaw_min + static_cast<double>(k) * settings.step);
  }
  const std::size_t holes = scene.holes.size();
  result.rows.resize(count * holes);
  parallel_for(
      count,
      [&](std::size_t k) {
        const BarScene s = yawed(scene, result.yaws[k]);
        for (std::size_t h = 0; h < holes; ++h) {
          SweepRow& row = result.rows[k * holes + h];
          row.yaw = result.yaws[k];
          row.hole_id = h;
          row.center_err = std::numeric_limits<double>::quiet_NaN();
          row.radius_err = std::numeric_limits<double>::quiet_NaN();
          try {
            const MaskSample mask = synthesize_mask(s, cam, h, settings.noise_sigma,
                                                    settings.dropout,
                                                    mix_seed(settings.seed, k, h), settings.mask);
            const HoleEstimate est = to_world(cam, fit_circle3d(mask));
            const HoleTruth truth = true_hole(s, h);
            row.center_err = (est.center - truth.center).norm();
            row.radius_err = std::abs(est.radius - truth.radius);
            row.detected = row.center_err <= settings.tolerance;
          } catch (const NotDetectable&) {
          } catch (const FitError&) {
          }
        }
      },
      settings.threads);

  result.intervals.resize(holes);
  for (std::size_t h = 0; h < holes; ++h) {
    std::vector<bool> det(count);
    for (std::size_t k = 0; k < count; ++k) {
      det[k] = result.rows[k * holes + h].detected;
    }
    result.intervals[h] = contiguous_intervals(result.yaws, det);
  }
  return result;
}

}  // namespace lfd::vision
