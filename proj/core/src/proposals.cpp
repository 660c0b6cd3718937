#include "datrack/proposals.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "datrack/errors.hpp"

namespace datrack {

ScoreGrid::ScoreGrid(int rows_, int cols_, int k_) : rows(rows_), cols(cols_), k(k_) {
  if (rows < 1 || cols < 1 || k < 1) throw ArgumentError("score grid dimensions must be positive");
  const auto n = static_cast<std::size_t>(rows) * cols * k;
  scores.assign(n, 0.0);
  deltas.assign(n, RegressionDelta{});
}

std::vector<BBox> generate_anchors(const AnchorConfig& cfg, int rows, int cols, Point2 region_center,
                                   double region_size) {
  if (cfg.ratios.empty() || cfg.scales.empty()) throw ArgumentError("anchor ratios and scales must be non-empty");
  if (rows < 1 || cols < 1) throw ArgumentError("anchor grid must have at least one cell");
  if (!(cfg.base_size > 0.0) || !(cfg.stride > 0.0) || !(region_size > 0.0)) {
    throw ArgumentError("anchor base size, stride and region size must be positive");
  }
  std::vector<BBox> shapes;
  for (double ratio : cfg.ratios) {
    if (!(ratio > 0.0)) throw ArgumentError("anchor ratios must be positive");
    for (double scale : cfg.scales) {
      if (!(scale > 0.0)) throw ArgumentError("anchor scales must be positive");
      const double side = cfg.base_size * scale;
      const double root = std::sqrt(ratio);
      shapes.push_back({0.0, 0.0, side * root, side / root});
    }
  }

  std::vector<BBox> anchors;
  anchors.reserve(static_cast<std::size_t>(rows) * cols * shapes.size());
  for (int r = 0; r < rows; ++r) {
    const double cy = region_center.y + (r - (rows - 1) / 2.0) * cfg.stride;
    for (int c = 0; c < cols; ++c) {
      const double cx = region_center.x + (c - (cols - 1) / 2.0) * cfg.stride;
      for (const auto& s : shapes) anchors.push_back({cx, cy, s.w, s.h});
    }
  }
  return anchors;
}

BBox decode_deltas(const BBox& anchor, const RegressionDelta& d) {
  const double dw = std::clamp(d.dw, -4.0, 4.0);
  const double dh = std::clamp(d.dh, -4.0, 4.0);
  return {anchor.cx + d.dx * anchor.w, anchor.cy + d.dy * anchor.h, anchor.w * std::exp(dw),
          anchor.h * std::exp(dh)};
}

double iou(const BBox& a, const BBox& b) {
  const double iw = std::min(a.right(), b.right()) - std::max(a.left(), b.left());
  const double ih = std::min(a.bottom(), b.bottom()) - std::max(a.top(), b.top());
  if (iw <= 0.0 || ih <= 0.0) return 0.0;
  const double inter = iw * ih;
  const double uni = a.area() + b.area() - inter;
  if (!(uni > 0.0)) return 0.0;
  return std::clamp(inter / uni, 0.0, 1.0);
}

bool ranks_before(const Proposal& a, const Proposal& b) noexcept {
  if (a.score != b.score) return a.score > b.score;
  return a.cell < b.cell;
}

std::vector<Proposal> nms(std::vector<Proposal> proposals, double iou_threshold) {
  if (!(iou_threshold > 0.0 && iou_threshold <= 1.0)) {
    throw ArgumentError("NMS IoU threshold must lie in (0, 1]");
  }
  std::sort(proposals.begin(), proposals.end(), ranks_before);
  std::vector<Proposal> kept;
  for (auto& p : proposals) {
    const bool overlaps = std::any_of(kept.begin(), kept.end(),
                                      [&](const Proposal& k) { return iou(k.box, p.box) > iou_threshold; });
    if (!overlaps) kept.push_back(std::move(p));
  }
  return kept;
}

std::vector<Proposal> score_grid_to_proposals(const ScoreGrid& grid, std::span<const BBox> anchors,
                                              const ResponseMap& window, double window_weight) {
  const auto n = static_cast<std::size_t>(grid.rows) * grid.cols * grid.k;
  if (anchors.size() != n || grid.scores.size() != n || grid.deltas.size() != n) {
    throw DimensionError("score grid holds " + std::to_string(grid.scores.size()) + " scores for " +
                         std::to_string(anchors.size()) + " anchors");
  }
  if (window.width() != grid.cols || window.height() != grid.rows) {
    throw DimensionError("window shape does not match the score grid");
  }
  if (!(window_weight >= 0.0 && window_weight <= 1.0)) throw ArgumentError("window weight must lie in [0, 1]");

  std::vector<Proposal> out;
  out.reserve(n);
  for (int r = 0; r < grid.rows; ++r) {
    for (int c = 0; c < grid.cols; ++c) {
      const double w = window.at(c, r);
      for (int a = 0; a < grid.k; ++a) {
        const auto i = grid.index(r, c, a);
        Proposal p;
        p.box = decode_deltas(anchors[i], grid.deltas[i]);
        p.confidence = grid.scores[i];
        p.score = (1.0 - window_weight) * grid.scores[i] + window_weight * w;
        p.cell = {r, c, a};
        out.push_back(std::move(p));
      }
    }
  }
  return out;
}

std::vector<Proposal> top_k(std::vector<Proposal> proposals, int k) {
  if (k < 1) throw ArgumentError("top_k needs k >= 1");
  const auto keep = std::min(proposals.size(), static_cast<std::size_t>(k));
  std::partial_sort(proposals.begin(), proposals.begin() + static_cast<std::ptrdiff_t>(keep), proposals.end(),
                    ranks_before);
  proposals.resize(keep);
  return proposals;
}

namespace {

// Sub-cell offset of a 1-D peak from three samples; 0 unless `mid` is a local
// maximum. Fits a parabola to the log of positive samples (exact for Gaussian
// peaks), to the samples themselves otherwise.
double parabolic_offset(double left, double mid, double right) {
  if (mid < left || mid < right) return 0.0;
  if (left > 0.0 && right > 0.0) {
    left = std::log(left);
    right = std::log(right);
    mid = std::log(mid);
  }
  const double denom = left - 2.0 * mid + right;
  if (!(denom < 0.0)) return 0.0;
  return std::clamp(0.5 * (left - right) / denom, -0.5, 0.5);
}

}  // namespace

ScoreGrid regress_response(const ResponseMap& response, const ScoreCalibration& calibration,
                           std::span<const BBox> anchors, int k, double stride, const BBox& target_size) {
  const int rows = response.height();
  const int cols = response.width();
  ScoreGrid grid(rows, cols, k);
  if (anchors.size() != grid.scores.size()) throw DimensionError("anchor count does not match the response grid");
  if (!(target_size.w > 0.0 && target_size.h > 0.0)) throw ArgumentError("target size must be positive");

  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const double mid = response.at(c, r);
      const double ox = (c > 0 && c + 1 < cols)
                            ? parabolic_offset(response.at(c - 1, r), mid, response.at(c + 1, r))
                            : 0.0;
      const double oy = (r > 0 && r + 1 < rows)
                            ? parabolic_offset(response.at(c, r - 1), mid, response.at(c, r + 1))
                            : 0.0;
      const double score = calibration(mid);
      for (int a = 0; a < k; ++a) {
        const auto i = grid.index(r, c, a);
        const BBox& anchor = anchors[i];
        grid.scores[i] = score;
        grid.deltas[i] = {ox * stride / anchor.w, oy * stride / anchor.h, std::log(target_size.w / anchor.w),
                          std::log(target_size.h / anchor.h)};
      }
    }
  }
  return grid;
}

}  // namespace datrack
