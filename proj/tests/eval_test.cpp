#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "fieldsynth/eval.hpp"
#include "metric_oracle.hpp"

using namespace fieldsynth;

namespace {

Mask from_rows(int w, int h, std::initializer_list<std::uint8_t> v) {
  Mask m(w, h);
  std::copy(v.begin(), v.end(), m.labels.begin());
  return m;
}

Mask random_mask(std::mt19937_64& gen, int w, int h, int max_label) {
  std::uniform_int_distribution<int> d(0, max_label);
  Mask m(w, h);
  for (auto& l : m.labels) l = static_cast<std::uint8_t>(d(gen));
  return m;
}

ConfusionTally tally_of(const Mask& pred, const Mask& gt) {
  ConfusionTally t;
  return accumulate(t, pred, gt);
}

}  // namespace

TEST(Accumulate, TwoByTwoExample) {
  const Mask gt = from_rows(2, 2, {0, 1, 1, 0});
  const Mask pred = from_rows(2, 2, {0, 1, 0, 0});
  const auto t = tally_of(pred, gt);
  EXPECT_EQ(t.at(0, 0), 2u);
  EXPECT_EQ(t.at(1, 1), 1u);
  EXPECT_EQ(t.at(1, 0), 1u);
  EXPECT_EQ(t.total(), 4u);
  EXPECT_DOUBLE_EQ(pixel_accuracy(t), 0.75);
}

TEST(Accumulate, AllBackground) {
  const Mask m(5, 3);
  const auto t = tally_of(m, m);
  EXPECT_EQ(t.at(0, 0), 15u);
  EXPECT_EQ(t.total(), 15u);
  EXPECT_EQ(mean_iou(t, false), 1.0);
  EXPECT_EQ(mean_iou(t, true), 1.0);
}

TEST(Metrics, IdenticalAndDisjoint) {
  std::mt19937_64 gen(3);
  const Mask m = random_mask(gen, 16, 16, 26);
  const auto same = tally_of(m, m);
  EXPECT_EQ(pixel_accuracy(same), 1.0);
  EXPECT_EQ(mean_iou(same, true), 1.0);

  Mask a(4, 4), b(4, 4);
  std::fill(a.labels.begin(), a.labels.end(), 3);
  std::fill(b.labels.begin(), b.labels.end(), 5);
  const auto disjoint = tally_of(a, b);
  EXPECT_EQ(pixel_accuracy(disjoint), 0.0);
  EXPECT_EQ(mean_iou(disjoint, true), 0.0);
}

TEST(Metrics, HalfAndHalfFourByFour) {
  // class 1 on four pixels in gt and four other pixels in pred; background
  // agrees on the remaining eight
  const Mask gt = from_rows(4, 4, {1, 1, 0, 0, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0});
  const Mask pred = from_rows(4, 4, {0, 0, 1, 1, 0, 0, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0});
  const auto t = tally_of(pred, gt);
  EXPECT_EQ(class_iou(t, 1), 0.0);
  EXPECT_DOUBLE_EQ(*class_iou(t, 0), 8.0 / 16.0);
  EXPECT_FALSE(class_iou(t, 2));
  EXPECT_DOUBLE_EQ(mean_iou(t, true), oracle::mean_iou({pred}, {gt}, true));
  EXPECT_DOUBLE_EQ(mean_iou(t, true), 0.25);
  EXPECT_DOUBLE_EQ(mean_iou(t, false), 0.0);
  EXPECT_DOUBLE_EQ(pixel_accuracy(t), 0.5);
}

TEST(Metrics, MatchBruteForce) {
  std::mt19937_64 gen(11);
  for (int trial = 0; trial < 300; ++trial) {
    const int max_label = trial % 2 ? 26 : 3;
    const Mask gt = random_mask(gen, 8, 8, max_label), pred = random_mask(gen, 8, 8, max_label);
    const auto t = tally_of(pred, gt);
    EXPECT_EQ(pixel_accuracy(t), oracle::pixel_accuracy({pred}, {gt}));
    EXPECT_DOUBLE_EQ(mean_iou(t, true), oracle::mean_iou({pred}, {gt}, true));
    EXPECT_DOUBLE_EQ(mean_iou(t, false), oracle::mean_iou({pred}, {gt}, false));
  }
}

TEST(Metrics, PermutationCovariant) {
  std::mt19937_64 gen(5);
  std::array<std::uint8_t, kEvalClasses> perm{};
  std::iota(perm.begin(), perm.end(), 0);
  for (int trial = 0; trial < 50; ++trial) {
    const Mask gt = random_mask(gen, 12, 9, 26), pred = random_mask(gen, 12, 9, 26);
    std::shuffle(perm.begin(), perm.end(), gen);
    Mask gt2 = gt, pred2 = pred;
    for (auto& l : gt2.labels) l = perm[l];
    for (auto& l : pred2.labels) l = perm[l];
    const auto a = tally_of(pred, gt), b = tally_of(pred2, gt2);
    EXPECT_DOUBLE_EQ(pixel_accuracy(a), pixel_accuracy(b));
    EXPECT_NEAR(mean_iou(a, true), mean_iou(b, true), 1e-12);
  }
}

TEST(Accumulate, AssociativeAcrossBatches) {
  std::mt19937_64 gen(8);
  std::vector<Mask> preds, gts;
  for (int i = 0; i < 6; ++i) {
    preds.push_back(random_mask(gen, 10, 7, 26));
    gts.push_back(random_mask(gen, 10, 7, 26));
  }
  ConfusionTally all;
  for (int i = 0; i < 6; ++i) accumulate(all, preds[i], gts[i]);
  ConfusionTally first, second;
  for (int i = 0; i < 3; ++i) accumulate(first, preds[i], gts[i]);
  for (int i = 3; i < 6; ++i) accumulate(second, preds[i], gts[i]);
  EXPECT_EQ(first.merge(second), all);
  EXPECT_EQ(pixel_accuracy(all), oracle::pixel_accuracy(preds, gts));
  EXPECT_DOUBLE_EQ(mean_iou(all, true), oracle::mean_iou(preds, gts, true));
}

TEST(Errors, RejectsBadInput) {
  ConfusionTally t;
  EXPECT_THROW(accumulate(t, Mask(4, 4), Mask(4, 5)), DimensionMismatch);
  Mask bad(2, 2);
  bad.labels[3] = kFakeLineId;
  EXPECT_THROW(accumulate(t, bad, Mask(2, 2)), LabelOutOfRange);
  EXPECT_THROW(pixel_accuracy(ConfusionTally{}), EmptyTally);
  EXPECT_THROW(mean_iou(ConfusionTally{}, true), EmptyTally);
}
