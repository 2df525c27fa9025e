#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>

#include "fieldsynth/field_geometry.hpp"

using namespace fieldsynth;

namespace {

const FieldModel& default_field() {
  static const FieldModel m = build_field_model();
  return m;
}

double boundary_arclength(const Vec3& p, double l, double w) {
  // independent inverse of the perimeter walk
  const double hl = l / 2, hw = w / 2;
  if (std::abs(p.y() + hw) < 1e-9 && p.x() < hl) return p.x() + hl;
  if (std::abs(p.x() - hl) < 1e-9 && p.y() < hw) return l + p.y() + hw;
  if (std::abs(p.y() - hw) < 1e-9 && p.x() > -hl) return l + w + (hl - p.x());
  return 2 * l + w + (hw - p.y());
}

}  // namespace

TEST(LineClass, TwentySixCanonicalNames) {
  EXPECT_EQ(kLineClassNames.size(), 26u);
  std::set<std::string_view> unique(kLineClassNames.begin(), kLineClassNames.end());
  EXPECT_EQ(unique.size(), 26u);
  EXPECT_EQ(kLineClassNames.front(), "Big rect. left bottom");
  EXPECT_EQ(kLineClassNames.back(), "Small rect. right top");
  for (auto c : all_line_classes()) {
    EXPECT_EQ(class_from_name(name_of(c)), c);
    EXPECT_EQ(class_from_id(class_id(c)), c);
  }
  EXPECT_FALSE(class_from_name("Centre circle"));
  EXPECT_FALSE(class_from_id(0));
  EXPECT_FALSE(class_from_id(kFakeLineId));
}

TEST(FieldGeometry, MiddleLineFromDefaults) {
  const auto& seg = std::get<Segment>(default_field().primitive(LineClass::MiddleLine).shape);
  EXPECT_EQ(seg.p0, Vec3(0, -34, 0));
  EXPECT_EQ(seg.p1, Vec3(0, 34, 0));
}

TEST(FieldGeometry, EveryClassExactlyOnce) {
  std::set<LineClass> seen;
  for (const auto& p : default_field().primitives()) seen.insert(p.line_class);
  EXPECT_EQ(seen.size(), kLineClassCount);
}

TEST(FieldGeometry, RectangleLayout) {
  const auto& f = default_field();
  const auto& main = std::get<Segment>(f.primitive(LineClass::BigRectLeftMain).shape);
  EXPECT_DOUBLE_EQ(main.p0.x(), -52.5 + 16.5);
  EXPECT_DOUBLE_EQ(std::abs(main.p1.y() - main.p0.y()), 40.32);
  const auto& top = std::get<Segment>(f.primitive(LineClass::SmallRectRightTop).shape);
  EXPECT_DOUBLE_EQ(top.p0.y(), 18.32 / 2);
  EXPECT_DOUBLE_EQ(top.p1.y(), 18.32 / 2);
  EXPECT_DOUBLE_EQ(std::abs(top.p1.x() - top.p0.x()), 5.5);
  const auto& post = std::get<Segment>(f.primitive(LineClass::GoalLeftPostLeft).shape);
  EXPECT_DOUBLE_EQ(std::max(post.p0.z(), post.p1.z()), 2.44);
  EXPECT_DOUBLE_EQ(std::min(post.p0.z(), post.p1.z()), 0.0);
}

TEST(FieldGeometry, PenaltyArcStaysOutsideBox) {
  const auto& f = default_field();
  for (auto c : {LineClass::CircleLeft, LineClass::CircleRight}) {
    const auto pts = sample_primitive_points(f, c, 0.1);
    for (const auto& p : pts) {
      EXPECT_GE(std::abs(p.x()), 0.0);
      EXPECT_LE(std::abs(p.x()), 52.5 - 16.5 + 1e-9);
      EXPECT_NEAR(std::hypot(std::abs(p.x()) - 41.5, p.y()), 9.15, 1e-9);
    }
    // endpoints sit on the penalty-area line
    EXPECT_NEAR(std::abs(pts.front().x()), 36.0, 1e-9);
    EXPECT_NEAR(std::abs(pts.back().x()), 36.0, 1e-9);
  }
}

TEST(FieldGeometry, MirrorSymmetry) {
  const auto& f = default_field();
  int pairs = 0;
  for (auto c : all_line_classes()) {
    if (!is_left_class(c)) continue;
    ++pairs;
    const auto& right = f.primitive(mirror_class(c));
    for (double spacing : {0.25, 1.0, 5.0})
      for (const auto& p : sample_primitive_points(f, c, spacing))
        EXPECT_LE(distance_to_primitive(right, Vec3(-p.x(), p.y(), p.z())), 1e-9) << name_of(c);
  }
  EXPECT_EQ(pairs, 11);
}

TEST(FieldGeometry, InvalidDimensions) {
  FieldDimensions d;
  d.goal_area_width = 50;
  EXPECT_THROW(build_field_model(d), InvalidDimensions);
  d = {};
  d.length = -1;
  EXPECT_THROW(build_field_model(d), InvalidDimensions);
  d = {};
  d.penalty_spot_distance = 30;
  try {
    build_field_model(d);
    FAIL();
  } catch (const InvalidDimensions& e) {
    EXPECT_NE(std::string(e.what()).find("penalty_spot_distance"), std::string::npos);
  }
}

TEST(SamplePoints, MiddleLineCount) {
  const auto pts = sample_primitive_points(default_field(), LineClass::MiddleLine, 1.0);
  ASSERT_EQ(pts.size(), 69u);
  EXPECT_EQ(pts.front(), Vec3(0, -34, 0));
  EXPECT_EQ(pts.back(), Vec3(0, 34, 0));
  for (std::size_t k = 1; k < pts.size(); ++k) EXPECT_LE((pts[k] - pts[k - 1]).norm(), 1.0 + 1e-12);
}

TEST(SamplePoints, CentralCircleRadius) {
  for (double spacing : {0.25, 1.0, 5.0})
    for (const auto& p : sample_primitive_points(default_field(), LineClass::CircleCentral, spacing))
      EXPECT_NEAR(std::hypot(p.x(), p.y()), 9.15, 1e-9);
}

TEST(SamplePoints, WideSpacingGivesEndpoints) {
  const auto pts = sample_primitive_points(default_field(), LineClass::SmallRectLeftTop, 100.0);
  ASSERT_EQ(pts.size(), 2u);
}

TEST(SamplePoints, AllPointsOnPrimitive) {
  const auto& f = default_field();
  for (auto c : all_line_classes())
    for (double spacing : {0.25, 1.0, 5.0}) {
      const auto pts = sample_primitive_points(f, c, spacing);
      for (const auto& p : pts) EXPECT_LE(distance_to_primitive(f.primitive(c), p), 1e-9) << name_of(c);
      // arcs: intervals measured along the arc
      for (std::size_t k = 1; k < pts.size(); ++k) EXPECT_LE((pts[k] - pts[k - 1]).norm(), spacing + 1e-9);
    }
}

TEST(SamplePoints, RejectsNonPositiveSpacing) {
  EXPECT_THROW(sample_primitive_points(default_field(), LineClass::MiddleLine, 0.0), std::invalid_argument);
}

TEST(Perimeter, Corners) {
  const auto& f = default_field();
  EXPECT_EQ(perimeter_point(f, 0.0), Vec3(-52.5, -34, 0));
  const Vec3 half = perimeter_point(f, 0.5);
  EXPECT_NEAR(half.x(), 52.5, 1e-12);
  EXPECT_NEAR(half.y(), 34, 1e-12);
}

TEST(Perimeter, MonotoneAndOnBoundary) {
  const auto& f = default_field();
  double prev = -1;
  for (int i = 0; i < 10000; ++i) {
    const double t = i / 10000.0;
    const Vec3 p = perimeter_point(f, t);
    EXPECT_TRUE(on_perimeter(f, p));
    const double s = boundary_arclength(p, 105, 68);
    EXPECT_GT(s, prev);
    EXPECT_NEAR(s, t * 2 * (105 + 68), 1e-9);
    prev = s;
  }
}

TEST(Perimeter, SideMatchesPoint) {
  const auto& f = default_field();
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    const double t = u(gen);
    const Vec3 p = perimeter_point(f, t);
    switch (perimeter_side(f, t)) {
      case 0: EXPECT_DOUBLE_EQ(p.y(), -34); break;
      case 1: EXPECT_DOUBLE_EQ(p.x(), 52.5); break;
      case 2: EXPECT_DOUBLE_EQ(p.y(), 34); break;
      case 3: EXPECT_DOUBLE_EQ(p.x(), -52.5); break;
    }
  }
}
