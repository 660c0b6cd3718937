#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "datrack/correlation.hpp"
#include "datrack/errors.hpp"
#include "datrack/proposals.hpp"
#include "oracles.hpp"

using namespace datrack;

TEST(Iou, SpotValues) {
  const BBox a{1.0, 0.5, 2.0, 1.0};
  EXPECT_EQ(iou(a, a), 1.0);
  EXPECT_EQ(iou(a, BBox{10.0, 10.0, 2.0, 1.0}), 0.0);
  EXPECT_EQ(iou(a, BBox{3.0, 0.5, 2.0, 1.0}), 0.0);  // touching edges
  EXPECT_NEAR(iou(a, BBox{2.0, 0.5, 2.0, 1.0}), 1.0 / 3.0, 1e-12);
}

TEST(Iou, SymmetricAndBounded) {
  Rng rng(21);
  for (int i = 0; i < 500; ++i) {
    const BBox a{rng.uniform(0, 50), rng.uniform(0, 50), rng.uniform(1, 30), rng.uniform(1, 30)};
    const BBox b{rng.uniform(0, 50), rng.uniform(0, 50), rng.uniform(1, 30), rng.uniform(1, 30)};
    const double v = iou(a, b);
    EXPECT_EQ(v, iou(b, a));
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
    EXPECT_NEAR(v, oracle::iou(a, b), 1e-12);
  }
}

namespace {

std::vector<Proposal> random_proposals(Rng& rng, int n, bool coarse_scores) {
  std::vector<Proposal> p(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    p[i].box = {rng.uniform(0, 100), rng.uniform(0, 100), rng.uniform(5, 40), rng.uniform(5, 40)};
    // Coarse scores force ties so the cell tie-break is exercised.
    p[i].score = coarse_scores ? static_cast<double>(rng.below(5)) / 4.0 : rng.uniform();
    p[i].cell = {i / 10, i % 10, 0};
  }
  return p;
}

}  // namespace

TEST(Nms, MatchesQuadraticOracle) {
  Rng rng(22);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = static_cast<int>(rng.below(201));
    const auto input = random_proposals(rng, n, trial % 2 == 0);
    const double threshold = rng.uniform(0.05, 1.0);
    const auto kept = nms(input, threshold);
    const auto expected = oracle::nms(input, threshold);
    ASSERT_EQ(kept.size(), expected.size()) << "trial " << trial;
    for (std::size_t i = 0; i < kept.size(); ++i) {
      EXPECT_EQ(kept[i].cell, input[expected[i]].cell);
      EXPECT_EQ(kept[i].box, input[expected[i]].box);
    }
  }
}

TEST(Nms, KeptBoxesRespectThresholdAndPermutationInvariant) {
  Rng rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    auto input = random_proposals(rng, 120, true);
    const auto kept = nms(input, 0.4);
    for (std::size_t i = 0; i < kept.size(); ++i) {
      for (std::size_t j = i + 1; j < kept.size(); ++j) EXPECT_LE(iou(kept[i].box, kept[j].box), 0.4);
    }
    std::reverse(input.begin(), input.end());
    std::swap(input[3], input[50]);
    const auto again = nms(input, 0.4);
    ASSERT_EQ(again.size(), kept.size());
    for (std::size_t i = 0; i < kept.size(); ++i) EXPECT_EQ(again[i].cell, kept[i].cell);
  }
}

TEST(Nms, EdgeCases) {
  EXPECT_TRUE(nms({}, 0.5).empty());
  Proposal a;
  a.box = {10, 10, 4, 4};
  a.score = 1.0;
  Proposal b = a;
  b.cell = {0, 1, 0};
  EXPECT_EQ(nms({a, b}, 0.5).size(), 1u);
  // Threshold 1 only suppresses boxes overlapping by more than IoU 1: none.
  EXPECT_EQ(nms({a, b}, 1.0).size(), 2u);
  EXPECT_THROW(nms({a}, 0.0), ArgumentError);
  EXPECT_THROW(nms({a}, 1.5), ArgumentError);
}

TEST(Anchors, GridCountsAndGeometry) {
  AnchorConfig cfg;
  const auto anchors = generate_anchors(cfg, 17, 17, {100.0, 200.0}, 255.0);
  ASSERT_EQ(anchors.size(), 17u * 17u * 5u);
  const BBox& center = anchors[(8 * 17 + 8) * 5 + 2];  // ratio 1
  EXPECT_DOUBLE_EQ(center.cx, 100.0);
  EXPECT_DOUBLE_EQ(center.cy, 200.0);
  EXPECT_DOUBLE_EQ(center.w, 64.0);
  EXPECT_DOUBLE_EQ(center.h, 64.0);
  EXPECT_DOUBLE_EQ(anchors[0].cx, 100.0 - 8 * 8.0);
  for (int a = 0; a < 5; ++a) {
    const BBox& b = anchors[static_cast<std::size_t>(a)];
    EXPECT_NEAR(b.w / b.h, cfg.ratios[static_cast<std::size_t>(a)], 1e-12);
    EXPECT_NEAR(b.w * b.h, 64.0 * 64.0, 1e-9);
  }
  EXPECT_THROW(generate_anchors(AnchorConfig{64.0, {}, {1.0}, 8.0}, 3, 3, {}, 10.0), ArgumentError);
}

TEST(Anchors, DecodeDeltas) {
  const BBox anchor{50, 60, 20, 10};
  EXPECT_EQ(decode_deltas(anchor, {}), anchor);
  const BBox moved = decode_deltas(anchor, {0.5, -1.0, std::log(2.0), 0.0});
  EXPECT_DOUBLE_EQ(moved.cx, 60.0);
  EXPECT_DOUBLE_EQ(moved.cy, 50.0);
  EXPECT_NEAR(moved.w, 40.0, 1e-12);
  EXPECT_DOUBLE_EQ(moved.h, 10.0);
  EXPECT_NEAR(decode_deltas(anchor, {0, 0, 100.0, -100.0}).w, 20.0 * std::exp(4.0), 1e-9);
}

TEST(TopK, KeepsBestInRankOrder) {
  Rng rng(24);
  auto input = random_proposals(rng, 50, true);
  const auto best = top_k(input, 7);
  ASSERT_EQ(best.size(), 7u);
  std::sort(input.begin(), input.end(), ranks_before);
  for (std::size_t i = 0; i < best.size(); ++i) EXPECT_EQ(best[i].cell, input[i].cell);
  EXPECT_EQ(top_k(input, 100).size(), 50u);
  EXPECT_THROW(top_k(input, 0), ArgumentError);
}

TEST(ScoreGrid, ProposalsMixWindowAndKeepConfidence) {
  ScoreGrid grid(3, 3, 1);
  grid.scores.assign(9, 0.5);
  grid.scores[4] = 1.0;
  AnchorConfig cfg;
  cfg.ratios = {1.0};
  const auto anchors = generate_anchors(cfg, 3, 3, {0, 0}, 24);
  const auto window = cosine_window(3, 3);
  const auto props = score_grid_to_proposals(grid, anchors, window, 0.4);
  ASSERT_EQ(props.size(), 9u);
  EXPECT_DOUBLE_EQ(props[4].confidence, 1.0);
  EXPECT_DOUBLE_EQ(props[4].score, 0.6 * 1.0 + 0.4 * 1.0);
  EXPECT_DOUBLE_EQ(props[0].score, 0.6 * 0.5);
  EXPECT_THROW(score_grid_to_proposals(grid, anchors, cosine_window(2, 2), 0.4), DimensionError);
}

TEST(RegressResponse, RecoversSubCellPeakOfGaussianResponse) {
  const int n = 9;
  const double stride = 8.0;
  const double px = 4.3, py = 3.8;  // peak in cell units
  std::vector<double> values;
  for (int y = 0; y < n; ++y) {
    for (int x = 0; x < n; ++x) values.push_back(std::exp(-((x - px) * (x - px) + (y - py) * (y - py)) / 2.0));
  }
  const ResponseMap response(n, n, values);
  AnchorConfig cfg;
  const auto anchors = generate_anchors(cfg, n, n, {0.0, 0.0}, 100.0);
  const BBox target{0, 0, 30, 20};
  const auto grid = regress_response(response, ScoreCalibration(1.0, {}), anchors, 5, stride, target);
  for (int a = 0; a < 5; ++a) {
    const auto i = grid.index(4, 4, a);
    const BBox box = decode_deltas(anchors[i], grid.deltas[i]);
    EXPECT_NEAR(box.cx, (px - (n - 1) / 2.0) * stride, 1e-9);
    EXPECT_NEAR(box.cy, (py - (n - 1) / 2.0) * stride, 1e-9);
    EXPECT_NEAR(box.w, 30.0, 1e-9);
    EXPECT_NEAR(box.h, 20.0, 1e-9);
  }
  // A cell that is not a local maximum keeps its anchor center.
  const auto j = grid.index(0, 0, 2);
  EXPECT_EQ(decode_deltas(anchors[j], grid.deltas[j]).cx, anchors[j].cx);
}
