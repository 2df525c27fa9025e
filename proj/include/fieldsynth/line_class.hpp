#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string_view>

namespace fieldsynth {

/// The 26 annotated pitch markings, in canonical listing order. The
/// underlying value plus one is the class id used in masks.
enum class LineClass : std::uint8_t {
  BigRectLeftBottom,
  BigRectLeftMain,
  BigRectLeftTop,
  BigRectRightBottom,
  BigRectRightMain,
  BigRectRightTop,
  CircleCentral,
  CircleLeft,
  CircleRight,
  GoalLeftCrossbar,
  GoalLeftPostLeft,
  GoalLeftPostRight,
  GoalRightCrossbar,
  GoalRightPostLeft,
  GoalRightPostRight,
  MiddleLine,
  SideLineBottom,
  SideLineLeft,
  SideLineRight,
  SideLineTop,
  SmallRectLeftBottom,
  SmallRectLeftMain,
  SmallRectLeftTop,
  SmallRectRightBottom,
  SmallRectRightMain,
  SmallRectRightTop,
};

inline constexpr std::size_t kLineClassCount = 26;

/// Mask label for pixels covered by a fake line (diagnostic layer only).
inline constexpr std::uint8_t kFakeLineId = 27;
inline constexpr std::uint8_t kBackgroundId = 0;

inline constexpr std::array<std::string_view, kLineClassCount> kLineClassNames = {
    "Big rect. left bottom",   "Big rect. left main",    "Big rect. left top",
    "Big rect. right bottom",  "Big rect. right main",   "Big rect. right top",
    "Circle central",          "Circle left",            "Circle right",
    "Goal left crossbar",      "Goal left post left",    "Goal left post right",
    "Goal right crossbar",     "Goal right post left",   "Goal right post right",
    "Middle line",             "Side line bottom",       "Side line left",
    "Side line right",         "Side line top",          "Small rect. left bottom",
    "Small rect. left main",   "Small rect. left top",   "Small rect. right bottom",
    "Small rect. right main",  "Small rect. right top",
};

inline constexpr std::array<LineClass, kLineClassCount> all_line_classes() {
  std::array<LineClass, kLineClassCount> out{};
  for (std::size_t i = 0; i < kLineClassCount; ++i) out[i] = static_cast<LineClass>(i);
  return out;
}

constexpr std::size_t index_of(LineClass c) { return static_cast<std::size_t>(c); }
constexpr std::uint8_t class_id(LineClass c) { return static_cast<std::uint8_t>(index_of(c) + 1); }
constexpr std::string_view name_of(LineClass c) { return kLineClassNames[index_of(c)]; }

constexpr std::optional<LineClass> class_from_id(std::uint8_t id) {
  if (id == 0 || id > kLineClassCount) return std::nullopt;
  return static_cast<LineClass>(id - 1);
}

constexpr std::optional<LineClass> class_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kLineClassCount; ++i)
    if (kLineClassNames[i] == name) return static_cast<LineClass>(i);
  return std::nullopt;
}

/// Left/right counterpart under the reflection x -> -x. Classes without a
/// side (centre circle, middle line, top/bottom side lines) map to themselves.
constexpr LineClass mirror_class(LineClass c) {
  using enum LineClass;
  switch (c) {
    case BigRectLeftBottom: return BigRectRightBottom;
    case BigRectLeftMain: return BigRectRightMain;
    case BigRectLeftTop: return BigRectRightTop;
    case BigRectRightBottom: return BigRectLeftBottom;
    case BigRectRightMain: return BigRectLeftMain;
    case BigRectRightTop: return BigRectLeftTop;
    case CircleLeft: return CircleRight;
    case CircleRight: return CircleLeft;
    case GoalLeftCrossbar: return GoalRightCrossbar;
    case GoalLeftPostLeft: return GoalRightPostLeft;
    case GoalLeftPostRight: return GoalRightPostRight;
    case GoalRightCrossbar: return GoalLeftCrossbar;
    case GoalRightPostLeft: return GoalLeftPostLeft;
    case GoalRightPostRight: return GoalLeftPostRight;
    case SideLineLeft: return SideLineRight;
    case SideLineRight: return SideLineLeft;
    case SmallRectLeftBottom: return SmallRectRightBottom;
    case SmallRectLeftMain: return SmallRectRightMain;
    case SmallRectLeftTop: return SmallRectRightTop;
    case SmallRectRightBottom: return SmallRectLeftBottom;
    case SmallRectRightMain: return SmallRectLeftMain;
    case SmallRectRightTop: return SmallRectLeftTop;
    default: return c;
  }
}

/// True for classes that belong to the x < 0 half ("... left ..." as the side
/// qualifier, not as the post qualifier in "Goal right post left").
constexpr bool is_left_class(LineClass c) {
  const std::string_view n = name_of(c);
  for (std::string_view prefix : {"Big rect. left", "Small rect. left", "Circle left",
                                  "Goal left", "Side line left"})
    if (n.starts_with(prefix)) return true;
  return false;
}

}  // namespace fieldsynth
