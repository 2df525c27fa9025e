#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fieldsynth/errors.hpp"
#include "fieldsynth/line_class.hpp"
#include "fieldsynth/raster.hpp"

namespace fieldsynth {

inline constexpr std::size_t kEvalClasses = kLineClassCount + 1;  // background + 26

/// Confusion counts indexed [ground truth][prediction] over ids 0..26.
class ConfusionTally {
public:
  using Row = std::array<std::uint64_t, kEvalClasses>;

  std::uint64_t at(std::size_t gt, std::size_t pred) const { return counts_[gt][pred]; }
  std::uint64_t& at(std::size_t gt, std::size_t pred) { return counts_[gt][pred]; }

  std::uint64_t total() const {
    std::uint64_t t = 0;
    for (const auto& row : counts_)
      for (auto v : row) t += v;
    return t;
  }
  std::uint64_t trace() const {
    std::uint64_t t = 0;
    for (std::size_t i = 0; i < kEvalClasses; ++i) t += counts_[i][i];
    return t;
  }

  ConfusionTally& merge(const ConfusionTally& o) {
    for (std::size_t i = 0; i < kEvalClasses; ++i)
      for (std::size_t j = 0; j < kEvalClasses; ++j) counts_[i][j] += o.counts_[i][j];
    return *this;
  }

  friend bool operator==(const ConfusionTally&, const ConfusionTally&) = default;

private:
  std::array<Row, kEvalClasses> counts_{};
};

inline ConfusionTally& accumulate(ConfusionTally& tally, const Mask& pred, const Mask& gt) {
  if (pred.width != gt.width || pred.height != gt.height)
    throw DimensionMismatch("prediction is " + std::to_string(pred.width) + "x" + std::to_string(pred.height) +
                            ", ground truth is " + std::to_string(gt.width) + "x" + std::to_string(gt.height));
  for (std::size_t i = 0; i < gt.labels.size(); ++i) {
    const auto g = gt.labels[i], p = pred.labels[i];
    if (g >= kEvalClasses || p >= kEvalClasses)
      throw LabelOutOfRange("label " + std::to_string(std::max(g, p)) + " at pixel " + std::to_string(i) +
                            " exceeds 26");
    ++tally.at(g, p);
  }
  return tally;
}

/// Overall per-pixel accuracy, background included.
inline double pixel_accuracy(const ConfusionTally& tally) {
  const auto total = tally.total();
  if (total == 0) throw EmptyTally("pixel accuracy of an empty tally");
  return static_cast<double>(tally.trace()) / static_cast<double>(total);
}

/// IoU of one class, absent when the class has an empty union.
inline std::optional<double> class_iou(const ConfusionTally& tally, std::size_t c) {
  std::uint64_t row = 0, col = 0;
  for (std::size_t k = 0; k < kEvalClasses; ++k) {
    row += tally.at(c, k);
    col += tally.at(k, c);
  }
  const std::uint64_t tp = tally.at(c, c);
  const std::uint64_t uni = row + col - tp;
  if (uni == 0) return std::nullopt;
  return static_cast<double>(tp) / static_cast<double>(uni);
}

/// Mean IoU over classes with a nonempty union.
inline double mean_iou(const ConfusionTally& tally, bool include_background) {
  if (tally.total() == 0) throw EmptyTally("mean IoU of an empty tally");
  double sum = 0.0;
  int n = 0;
  for (std::size_t c = include_background ? 0 : 1; c < kEvalClasses; ++c)
    if (auto iou = class_iou(tally, c)) {
      sum += *iou;
      ++n;
    }
  // Both masks all background: nothing to disagree on.
  return n == 0 ? 1.0 : sum / n;
}

}  // namespace fieldsynth
