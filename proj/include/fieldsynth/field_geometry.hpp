#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "fieldsynth/errors.hpp"
#include "fieldsynth/line_class.hpp"

namespace fieldsynth {

using Vec3 = Eigen::Vector3d;

/// Pitch measurements in meters. Defaults are the Laws-of-the-Game broadcast
/// pitch.
struct FieldDimensions {
  double length = 105.0;
  double width = 68.0;
  double circle_radius = 9.15;
  double penalty_area_depth = 16.5;
  double penalty_area_width = 40.32;
  double goal_area_depth = 5.5;
  double goal_area_width = 18.32;
  double penalty_spot_distance = 11.0;
  double goal_width = 7.32;
  double goal_height = 2.44;
  double line_width = 0.12;

  /// Throws InvalidDimensions naming the first violated constraint.
  void validate() const {
    const std::pair<const char*, double> positive[] = {
        {"length", length},
        {"width", width},
        {"circle_radius", circle_radius},
        {"penalty_area_depth", penalty_area_depth},
        {"penalty_area_width", penalty_area_width},
        {"goal_area_depth", goal_area_depth},
        {"goal_area_width", goal_area_width},
        {"penalty_spot_distance", penalty_spot_distance},
        {"goal_width", goal_width},
        {"goal_height", goal_height},
        {"line_width", line_width},
    };
    for (const auto& [name, v] : positive)
      if (!(v > 0.0) || !std::isfinite(v))
        throw InvalidDimensions(std::string(name) + " must be strictly positive");
    if (!(penalty_area_depth < length / 2))
      throw InvalidDimensions("penalty_area_depth < length/2 violated");
    if (!(goal_area_depth < penalty_area_depth))
      throw InvalidDimensions("goal_area_depth < penalty_area_depth violated");
    if (!(goal_area_width < penalty_area_width))
      throw InvalidDimensions("goal_area_width < penalty_area_width violated");
    if (!(penalty_area_width < width))
      throw InvalidDimensions("penalty_area_width < width violated");
    if (!(penalty_spot_distance < penalty_area_depth + circle_radius))
      throw InvalidDimensions("penalty_spot_distance < penalty_area_depth + circle_radius violated");
    // The penalty arc must poke out of the box and stay on the pitch.
    if (!(penalty_spot_distance + circle_radius > penalty_area_depth))
      throw InvalidDimensions("penalty_spot_distance + circle_radius > penalty_area_depth violated");
    if (!(circle_radius < width / 2 && circle_radius < length / 2))
      throw InvalidDimensions("circle_radius must fit inside the pitch");
    if (!(goal_width < width)) throw InvalidDimensions("goal_width < width violated");
  }
};

struct Segment {
  Vec3 p0;
  Vec3 p1;
};

/// Horizontal arc in the plane z = center.z, swept counter-clockwise from
/// angle_start to angle_end (angle_end > angle_start).
struct Arc {
  Vec3 center;
  double radius = 0.0;
  double angle_start = 0.0;
  double angle_end = 0.0;

  Vec3 at(double angle) const {
    return center + Vec3(radius * std::cos(angle), radius * std::sin(angle), 0.0);
  }
  double length() const { return radius * (angle_end - angle_start); }
};

using PrimitiveShape = std::variant<Segment, Arc>;

struct FieldPrimitive {
  LineClass line_class{};
  PrimitiveShape shape;
};

/// World frame: origin at the centre spot, +x toward the right goal, +y toward
/// "Side line top", +z up. One primitive per class, indexed by class.
class FieldModel {
public:
  const FieldDimensions& dims() const noexcept { return dims_; }
  const FieldPrimitive& primitive(LineClass c) const { return primitives_[index_of(c)]; }
  const std::array<FieldPrimitive, kLineClassCount>& primitives() const noexcept {
    return primitives_;
  }
  double half_length() const { return dims_.length / 2; }
  double half_width() const { return dims_.width / 2; }

  friend FieldModel build_field_model(const FieldDimensions& dims);

private:
  FieldDimensions dims_;
  std::array<FieldPrimitive, kLineClassCount> primitives_;
};

namespace detail {

inline void put(std::array<FieldPrimitive, kLineClassCount>& out, LineClass c, PrimitiveShape s) {
  out[index_of(c)] = FieldPrimitive{c, std::move(s)};
}

inline Segment ground_segment(double x0, double y0, double x1, double y1) {
  return {Vec3(x0, y0, 0.0), Vec3(x1, y1, 0.0)};
}

}  // namespace detail

/// Builds all 26 primitives. Rectangle "main" edges run parallel to the goal
/// line; "top"/"bottom" edges run from the goal line into the pitch at +y/-y.
/// "Post left" is the +y post of either goal.
inline FieldModel build_field_model(const FieldDimensions& dims) {
  dims.validate();
  using enum LineClass;
  using detail::ground_segment;
  using detail::put;

  FieldModel model;
  model.dims_ = dims;
  auto& p = model.primitives_;
  const double hl = dims.length / 2;
  const double hw = dims.width / 2;

  put(p, SideLineBottom, ground_segment(-hl, -hw, hl, -hw));
  put(p, SideLineTop, ground_segment(-hl, hw, hl, hw));
  put(p, SideLineLeft, ground_segment(-hl, -hw, -hl, hw));
  put(p, SideLineRight, ground_segment(hl, -hw, hl, hw));
  put(p, MiddleLine, ground_segment(0.0, -hw, 0.0, hw));
  put(p, CircleCentral, Arc{Vec3::Zero(), dims.circle_radius, 0.0, 2 * std::numbers::pi});

  struct Box {
    double depth, half_width;
    LineClass main_l, top_l, bottom_l, main_r, top_r, bottom_r;
  };
  const Box boxes[] = {
      {dims.penalty_area_depth, dims.penalty_area_width / 2, BigRectLeftMain, BigRectLeftTop,
       BigRectLeftBottom, BigRectRightMain, BigRectRightTop, BigRectRightBottom},
      {dims.goal_area_depth, dims.goal_area_width / 2, SmallRectLeftMain, SmallRectLeftTop,
       SmallRectLeftBottom, SmallRectRightMain, SmallRectRightTop, SmallRectRightBottom},
  };
  for (const Box& b : boxes) {
    const double xl = -hl + b.depth;
    const double xr = hl - b.depth;
    put(p, b.main_l, ground_segment(xl, -b.half_width, xl, b.half_width));
    put(p, b.top_l, ground_segment(-hl, b.half_width, xl, b.half_width));
    put(p, b.bottom_l, ground_segment(-hl, -b.half_width, xl, -b.half_width));
    put(p, b.main_r, ground_segment(xr, -b.half_width, xr, b.half_width));
    put(p, b.top_r, ground_segment(hl, b.half_width, xr, b.half_width));
    put(p, b.bottom_r, ground_segment(hl, -b.half_width, xr, -b.half_width));
  }

  // Penalty arcs: the part of the spot-centred circle beyond the box edge.
  const double half_angle =
      std::acos((dims.penalty_area_depth - dims.penalty_spot_distance) / dims.circle_radius);
  put(p, CircleLeft,
      Arc{Vec3(-hl + dims.penalty_spot_distance, 0, 0), dims.circle_radius, -half_angle, half_angle});
  put(p, CircleRight,
      Arc{Vec3(hl - dims.penalty_spot_distance, 0, 0), dims.circle_radius,
          std::numbers::pi - half_angle, std::numbers::pi + half_angle});

  const double gw = dims.goal_width / 2;
  const double gh = dims.goal_height;
  for (const double x : {-hl, hl}) {
    const bool left = x < 0;
    put(p, left ? GoalLeftPostLeft : GoalRightPostLeft, Segment{Vec3(x, gw, 0), Vec3(x, gw, gh)});
    put(p, left ? GoalLeftPostRight : GoalRightPostRight,
        Segment{Vec3(x, -gw, 0), Vec3(x, -gw, gh)});
    put(p, left ? GoalLeftCrossbar : GoalRightCrossbar, Segment{Vec3(x, -gw, gh), Vec3(x, gw, gh)});
  }
  return model;
}

inline FieldModel build_field_model() { return build_field_model(FieldDimensions{}); }

/// Points along one primitive, ordered by its parameter. Segments include both
/// endpoints and are split into ceil(length / spacing) equal steps; arcs are
/// split into ceil(arc_length / spacing) equal angular steps.
inline std::vector<Vec3> sample_primitive_points(const FieldModel& model, LineClass c,
                                                 double spacing) {
  if (!(spacing > 0.0)) throw std::invalid_argument("spacing must be > 0");
  std::vector<Vec3> out;
  std::visit(
      [&](const auto& shape) {
        using T = std::decay_t<decltype(shape)>;
        if constexpr (std::is_same_v<T, Segment>) {
          const double len = (shape.p1 - shape.p0).norm();
          const auto n = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(len / spacing)));
          out.reserve(n + 1);
          for (std::size_t k = 0; k <= n; ++k) {
            const double t = static_cast<double>(k) / static_cast<double>(n);
            out.push_back(k == n ? shape.p1 : shape.p0 + t * (shape.p1 - shape.p0));
          }
        } else {
          const auto n =
              std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(shape.length() / spacing)));
          out.reserve(n + 1);
          const double sweep = shape.angle_end - shape.angle_start;
          for (std::size_t k = 0; k <= n; ++k)
            out.push_back(shape.at(shape.angle_start + sweep * static_cast<double>(k) /
                                                           static_cast<double>(n)));
        }
      },
      model.primitive(c).shape);
  return out;
}

/// Point on the pitch boundary at fraction t of its perimeter, starting at the
/// (-x, -y) corner and running counter-clockwise seen from above.
inline Vec3 perimeter_point(const FieldModel& model, double t) {
  const double l = model.dims().length;
  const double w = model.dims().width;
  const double hl = l / 2;
  const double hw = w / 2;
  double s = std::clamp(t, 0.0, 1.0) * 2 * (l + w);
  if (s < l) return Vec3(-hl + s, -hw, 0);
  s -= l;
  if (s < w) return Vec3(hl, -hw + s, 0);
  s -= w;
  if (s < l) return Vec3(hl - s, hw, 0);
  s -= l;
  return Vec3(-hl, std::min(hw - s, hw), 0);
}

/// Which side of the boundary rectangle perimeter_point(t) lands on:
/// 0 bottom, 1 right, 2 top, 3 left.
inline int perimeter_side(const FieldModel& model, double t) {
  const double l = model.dims().length;
  const double w = model.dims().width;
  const double s = std::clamp(t, 0.0, 1.0) * 2 * (l + w);
  if (s < l) return 0;
  if (s < l + w) return 1;
  if (s < 2 * l + w) return 2;
  return 3;
}

/// True when p lies on the boundary rectangle within tol.
inline bool on_perimeter(const FieldModel& model, const Vec3& p, double tol = 1e-9) {
  const double hl = model.half_length();
  const double hw = model.half_width();
  const bool inside = std::abs(p.x()) <= hl + tol && std::abs(p.y()) <= hw + tol;
  return inside && std::abs(p.z()) <= tol &&
         (std::abs(std::abs(p.x()) - hl) <= tol || std::abs(std::abs(p.y()) - hw) <= tol);
}

/// Euclidean distance from p to the primitive's point set.
inline double distance_to_primitive(const FieldPrimitive& prim, const Vec3& p) {
  return std::visit(
      [&](const auto& shape) -> double {
        using T = std::decay_t<decltype(shape)>;
        if constexpr (std::is_same_v<T, Segment>) {
          const Vec3 d = shape.p1 - shape.p0;
          const double t = std::clamp((p - shape.p0).dot(d) / d.squaredNorm(), 0.0, 1.0);
          return (shape.p0 + t * d - p).norm();
        } else {
          const Vec3 rel = p - shape.center;
          double a = std::atan2(rel.y(), rel.x());
          // bring the angle into [angle_start, angle_start + 2pi)
          while (a < shape.angle_start) a += 2 * std::numbers::pi;
          while (a >= shape.angle_start + 2 * std::numbers::pi) a -= 2 * std::numbers::pi;
          if (a <= shape.angle_end) {
            const double radial = std::hypot(rel.x(), rel.y()) - shape.radius;
            return std::hypot(radial, rel.z());
          }
          return std::min((shape.at(shape.angle_start) - p).norm(), (shape.at(shape.angle_end) - p).norm());
        }
      },
      prim.shape);
}

}  // namespace fieldsynth
