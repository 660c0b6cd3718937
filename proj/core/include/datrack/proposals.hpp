#pragma once

#include <compare>
#include <optional>
#include <span>
#include <vector>

#include "datrack/calibration.hpp"
#include "datrack/feature_map.hpp"
#include "datrack/geometry.hpp"

namespace datrack {

struct AnchorConfig {
  double base_size = 64.0;
  /// Aspect ratios as width / height.
  std::vector<double> ratios{1.0 / 3.0, 0.5, 1.0, 2.0, 3.0};
  std::vector<double> scales{1.0};
  double stride = 8.0;

  int anchors_per_cell() const noexcept { return static_cast<int>(ratios.size() * scales.size()); }
};

/// Origin of a proposal on the response grid. Ordering is the deterministic
/// tie-break used by every ranking in the library.
struct CellIndex {
  int row = 0;
  int col = 0;
  int anchor = 0;

  friend auto operator<=>(const CellIndex&, const CellIndex&) = default;
};

struct Proposal {
  BBox box;
  /// Window-mixed score used for ranking.
  double score = 0.0;
  /// Calibrated score before window mixing.
  double confidence = 0.0;
  CellIndex cell;
  /// Proposal-aligned embedding, filled on demand.
  std::optional<FeatureMap> embedding;
};

struct RegressionDelta {
  double dx = 0.0;
  double dy = 0.0;
  double dw = 0.0;
  double dh = 0.0;
};

struct ScoreGrid {
  int rows = 0;
  int cols = 0;
  int k = 0;
  std::vector<double> scores;
  std::vector<RegressionDelta> deltas;

  ScoreGrid() = default;
  ScoreGrid(int rows, int cols, int k);

  std::size_t index(int row, int col, int anchor) const noexcept {
    return (static_cast<std::size_t>(row) * cols + col) * k + anchor;
  }
};

/// rows x cols x k anchors, row-major with the anchor innermost. Cell centers
/// are spaced `stride` apart and centered on `region_center`. Anchor a of a
/// cell uses ratio index a / |scales| and scale index a % |scales|.
std::vector<BBox> generate_anchors(const AnchorConfig& cfg, int rows, int cols, Point2 region_center,
                                   double region_size);

/// Standard box parameterization; dw and dh are clamped to [-4, 4].
BBox decode_deltas(const BBox& anchor, const RegressionDelta& delta);

double iou(const BBox& a, const BBox& b);

/// Strict ranking order: higher score first, then lower cell index.
bool ranks_before(const Proposal& a, const Proposal& b) noexcept;

/// Greedy NMS. A proposal is kept iff its IoU with every already kept
/// proposal is <= iou_threshold. Output is in ranking order.
std::vector<Proposal> nms(std::vector<Proposal> proposals, double iou_threshold);

/// One proposal per (row, col, anchor): score is the window-mixed grid score,
/// confidence the unmixed one, box the decoded anchor.
std::vector<Proposal> score_grid_to_proposals(const ScoreGrid& grid, std::span<const BBox> anchors,
                                              const ResponseMap& window, double window_weight);

std::vector<Proposal> top_k(std::vector<Proposal> proposals, int k);

/// Stand-in for the learned classification and regression heads: turns a raw
/// correlation response into a ScoreGrid. Every anchor of a cell receives the
/// calibrated response of the cell; the regression delta moves the anchor by
/// the sub-cell peak offset of a (log-)parabola fit (zero where the cell is
/// not a local maximum) and resizes it to `target_size`.
ScoreGrid regress_response(const ResponseMap& response, const ScoreCalibration& calibration,
                           std::span<const BBox> anchors, int k, double stride, const BBox& target_size);

}  // namespace datrack
