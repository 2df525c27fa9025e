#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <Eigen/LU>
#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "fieldsynth/errors.hpp"
#include "fieldsynth/field_geometry.hpp"
#include "fieldsynth/rng.hpp"

namespace fieldsynth {

using Mat3 = Eigen::Matrix3d;

struct PixelPoint {
  double u = 0.0;
  double v = 0.0;
};

struct Resolution {
  int width = 1920;
  int height = 1080;
  friend bool operator==(const Resolution&, const Resolution&) = default;
};

/// Pinhole camera. At pan = tilt = roll = 0 the camera looks along world +y
/// with image right = +x and image down = -z. Orientation is composed as pan
/// (about world z, positive turns toward -x), then tilt (positive looks down),
/// then roll (about the optical axis).
struct CameraParams {
  Vec3 position = Vec3(0, -45, 18);
  double pan = 0.0;
  double tilt = 0.0;
  double roll = 0.0;
  double focal_px = 1300.0;
  PixelPoint principal_point{960.0, 540.0};
  Resolution resolution{};
  double near_plane = 0.1;

  friend bool operator==(const CameraParams& a, const CameraParams& b) {
    return a.position == b.position && a.pan == b.pan && a.tilt == b.tilt && a.roll == b.roll &&
           a.focal_px == b.focal_px && a.principal_point.u == b.principal_point.u &&
           a.principal_point.v == b.principal_point.v && a.resolution == b.resolution &&
           a.near_plane == b.near_plane;
  }
};

/// Rotation taking camera-frame directions to world-frame directions.
inline Mat3 world_from_camera(const CameraParams& cam) {
  Mat3 base;
  // columns: camera x (right), y (down), z (forward) in world coordinates
  base << 1, 0, 0,  //
      0, 0, 1,      //
      0, -1, 0;
  const Mat3 pan = Eigen::AngleAxisd(cam.pan, Vec3::UnitZ()).toRotationMatrix();
  const Mat3 tilt = Eigen::AngleAxisd(-cam.tilt, Vec3::UnitX()).toRotationMatrix();
  const Mat3 roll = Eigen::AngleAxisd(cam.roll, Vec3::UnitZ()).toRotationMatrix();
  return pan * base * tilt * roll;
}

/// Camera with its rotation precomputed; use when projecting many points.
class CameraFrame {
public:
  explicit CameraFrame(const CameraParams& cam)
      : cam_(cam), camera_from_world_(world_from_camera(cam).transpose()) {}

  const CameraParams& params() const noexcept { return cam_; }
  const Mat3& camera_from_world() const noexcept { return camera_from_world_; }

  Vec3 to_camera(const Vec3& p) const { return camera_from_world_ * (p - cam_.position); }

  /// Perspective divide without the near-plane test. Caller guarantees z > 0.
  PixelPoint divide(const Vec3& pc) const {
    return {cam_.principal_point.u + cam_.focal_px * pc.x() / pc.z(),
            cam_.principal_point.v + cam_.focal_px * pc.y() / pc.z()};
  }

  std::optional<PixelPoint> project(const Vec3& p) const {
    const Vec3 pc = to_camera(p);
    if (pc.z() <= cam_.near_plane) return std::nullopt;
    return divide(pc);
  }

  bool in_image(const PixelPoint& q, double margin = 0.0) const {
    return q.u >= -margin && q.u <= cam_.resolution.width + margin && q.v >= -margin &&
           q.v <= cam_.resolution.height + margin;
  }

private:
  CameraParams cam_;
  Mat3 camera_from_world_;
};

inline std::optional<PixelPoint> project_point(const CameraParams& cam, const Vec3& p) {
  return CameraFrame(cam).project(p);
}

inline Mat3 intrinsics(const CameraParams& cam) {
  Mat3 k;
  k << cam.focal_px, 0, cam.principal_point.u,  //
      0, cam.focal_px, cam.principal_point.v,   //
      0, 0, 1;
  return k;
}

/// Maps (x, y, 1) on the ground plane z = 0 to homogeneous pixels.
inline Mat3 ground_homography(const CameraParams& cam) {
  const Mat3 r = world_from_camera(cam).transpose();
  const Vec3 t = -r * cam.position;
  Mat3 rt;
  rt.col(0) = r.col(0);
  rt.col(1) = r.col(1);
  rt.col(2) = t;
  const Mat3 h = intrinsics(cam) * rt;
  // det(H) = f^2 * det(R) * (r3 . t) up to sign, which vanishes with the
  // camera height.
  const double scale = h.cwiseAbs().maxCoeff();
  if (!(scale > 0) || std::abs(h.determinant()) <= 1e-12 * scale * scale * scale)
    throw DegeneratePose("camera centre lies in the ground plane; homography is singular");
  return h;
}

inline PixelPoint apply_homography(const Mat3& h, double x, double y) {
  const Vec3 q = h * Vec3(x, y, 1.0);
  return {q.x() / q.z(), q.y() / q.z()};
}

/// Liang-Barsky parametric clip of the 2D segment a->b against a box.
/// Returns the surviving parameter interval in [0,1], if any.
inline std::optional<std::pair<double, double>> clip_to_box(PixelPoint a, PixelPoint b, double x0,
                                                            double y0, double x1, double y1) {
  double t0 = 0.0, t1 = 1.0;
  const double dx = b.u - a.u, dy = b.v - a.v;
  const double p[4] = {-dx, dx, -dy, dy};
  const double q[4] = {a.u - x0, x1 - a.u, a.v - y0, y1 - a.v};
  for (int i = 0; i < 4; ++i) {
    if (p[i] == 0.0) {
      if (q[i] < 0.0) return std::nullopt;
      continue;
    }
    const double r = q[i] / p[i];
    if (p[i] < 0.0)
      t0 = std::max(t0, r);
    else
      t1 = std::min(t1, r);
    if (t0 > t1) return std::nullopt;
  }
  return std::pair{t0, t1};
}

/// Segment parameters [s0, s1] of the visible part of p0->p1: in front of the
/// near plane and projecting inside the image grown by `margin` pixels.
inline std::optional<std::pair<double, double>> clip_segment_params(const CameraFrame& frame,
                                                                    const Vec3& p0, const Vec3& p1,
                                                                    double margin = 0.0) {
  const auto& cam = frame.params();
  const Vec3 a = frame.to_camera(p0);
  const Vec3 b = frame.to_camera(p1);
  // Points exactly on the near plane do not project; keep a hair in front.
  const double near = cam.near_plane * (1.0 + 1e-9) + 1e-12;
  double s0 = 0.0, s1 = 1.0;
  if (a.z() < near && b.z() < near) return std::nullopt;
  if (a.z() < near) s0 = (near - a.z()) / (b.z() - a.z());
  if (b.z() < near) s1 = (near - a.z()) / (b.z() - a.z());
  const Vec3 ca = a + s0 * (b - a);
  const Vec3 cb = a + s1 * (b - a);
  const auto box = clip_to_box(frame.divide(ca), frame.divide(cb), -margin, -margin,
                               cam.resolution.width + margin, cam.resolution.height + margin);
  if (!box) return std::nullopt;
  // Image-space parameter u maps to 3D parameter lambda on ca->cb through the
  // projective relation lambda = u za / ((1 - u) zb + u za).
  const auto to_3d = [&](double u) {
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 1.0;
    return u * ca.z() / ((1.0 - u) * cb.z() + u * ca.z());
  };
  const double l0 = to_3d(box->first);
  const double l1 = to_3d(box->second);
  return std::pair{s0 + l0 * (s1 - s0), s0 + l1 * (s1 - s0)};
}

inline std::optional<std::pair<Vec3, Vec3>> clip_segment(const CameraParams& cam, const Vec3& p0,
                                                         const Vec3& p1, double margin = 0.0) {
  const CameraFrame frame(cam);
  const auto params = clip_segment_params(frame, p0, p1, margin);
  if (!params) return std::nullopt;
  const auto lerp = [&](double s) {
    if (s <= 0.0) return p0;
    if (s >= 1.0) return p1;
    return Vec3(p0 + s * (p1 - p0));
  };
  return std::pair{lerp(params->first), lerp(params->second)};
}

/// Pan and tilt that put `target` on the optical axis of a camera at `position`.
inline std::pair<double, double> aim_at(const Vec3& position, const Vec3& target) {
  const Vec3 d = (target - position).normalized();
  return {std::atan2(-d.x(), d.y()), std::asin(std::clamp(-d.z(), -1.0, 1.0))};
}

/// Fraction of the pitch area whose projection lands inside the frame. The
/// visible ground region is the pitch rectangle cut by five half-planes: the
/// near plane and the four image-edge planes, each linear in (x, y) on z = 0.
inline double pitch_coverage(const CameraParams& cam, const FieldModel& field) {
  const CameraFrame frame(cam);
  const double hl = field.half_length(), hw = field.half_width();
  const double f = cam.focal_px, cx = cam.principal_point.u, cy = cam.principal_point.v;
  const double w = cam.resolution.width, h = cam.resolution.height;
  // Each constraint is c . (camera-frame point) + k >= 0.
  const std::array<std::pair<Vec3, double>, 5> planes = {{
      {Vec3(0, 0, 1), -cam.near_plane},
      {Vec3(f, 0, cx), 0.0},
      {Vec3(-f, 0, w - cx), 0.0},
      {Vec3(0, f, cy), 0.0},
      {Vec3(0, -f, h - cy), 0.0},
  }};
  std::vector<Vec3> poly = {Vec3(-hl, -hw, 0), Vec3(hl, -hw, 0), Vec3(hl, hw, 0), Vec3(-hl, hw, 0)};
  for (const auto& [c, k] : planes) {
    std::vector<Vec3> next;
    const auto value = [&](const Vec3& p) { return c.dot(frame.to_camera(p)) + k; };
    for (std::size_t i = 0; i < poly.size(); ++i) {
      const Vec3& a = poly[i];
      const Vec3& b = poly[(i + 1) % poly.size()];
      const double va = value(a), vb = value(b);
      if (va >= 0) next.push_back(a);
      if ((va >= 0) != (vb >= 0)) next.push_back(a + (va / (va - vb)) * (b - a));
    }
    poly = std::move(next);
    if (poly.size() < 3) return 0.0;
  }
  double area2 = 0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Vec3& a = poly[i];
    const Vec3& b = poly[(i + 1) % poly.size()];
    area2 += a.x() * b.y() - b.x() * a.y();
  }
  return std::abs(area2) / 2 / (field.dims().length * field.dims().width);
}

enum class CameraPreset { FixedBroadcast, MultiBroadcast };

/// Pose/intrinsics ranges for MultiBroadcast. Focal lengths are for a
/// 1920-wide frame and scale with the configured width.
struct CameraRanges {
  double x_min = -30, x_max = 30;
  double y_min = -55, y_max = -40;
  double z_min = 10, z_max = 30;
  double focal_min = 900, focal_max = 1800;
  double roll_max_deg = 2.0;
  double fixed_focal = 1300;
  Vec3 fixed_position = Vec3(0, -45, 18);
  double min_coverage = 0.6;
  int max_attempts = 64;
};

inline CameraParams fixed_broadcast_camera(const FieldModel&, Resolution res = {},
                                           const CameraRanges& ranges = {}) {
  CameraParams cam;
  cam.resolution = res;
  cam.principal_point = {res.width / 2.0, res.height / 2.0};
  cam.focal_px = ranges.fixed_focal * res.width / 1920.0;
  cam.position = ranges.fixed_position;
  std::tie(cam.pan, cam.tilt) = aim_at(cam.position, Vec3::Zero());
  cam.roll = 0.0;
  return cam;
}

inline CameraParams sample_camera(Rng& rng, CameraPreset preset, const FieldModel& field,
                                  Resolution res = {}, const CameraRanges& ranges = {}) {
  if (preset == CameraPreset::FixedBroadcast) {
    CameraParams cam = fixed_broadcast_camera(field, res, ranges);
    if (pitch_coverage(cam, field) < ranges.min_coverage)
      throw SamplingExhausted("fixed broadcast camera does not cover the required pitch area");
    return cam;
  }
  const double scale = res.width / 1920.0;
  for (int attempt = 0; attempt < ranges.max_attempts; ++attempt) {
    CameraParams cam;
    cam.resolution = res;
    cam.principal_point = {res.width / 2.0, res.height / 2.0};
    cam.position = Vec3(rng.uniform(ranges.x_min, ranges.x_max), rng.uniform(ranges.y_min, ranges.y_max),
                        rng.uniform(ranges.z_min, ranges.z_max));
    cam.focal_px = rng.uniform(ranges.focal_min, ranges.focal_max) * scale;
    const double deg = std::numbers::pi / 180.0;
    cam.roll = rng.uniform(-ranges.roll_max_deg, ranges.roll_max_deg) * deg;
    const Vec3 target(rng.uniform(-field.half_length(), field.half_length()),
                      rng.uniform(-field.half_width(), field.half_width()), 0.0);
    std::tie(cam.pan, cam.tilt) = aim_at(cam.position, target);
    if (pitch_coverage(cam, field) >= ranges.min_coverage) return cam;
  }
  throw SamplingExhausted("no camera pose met the pitch coverage requirement after " +
                          std::to_string(ranges.max_attempts) + " draws");
}

}  // namespace fieldsynth
