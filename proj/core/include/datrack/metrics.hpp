#pragma once

#include <optional>
#include <vector>

#include "datrack/longterm.hpp"
#include "datrack/scenario.hpp"
#include "datrack/tracker.hpp"

namespace datrack {

struct TrajectoryEntry {
  std::optional<BBox> box;
  double score = 0.0;
  Mode mode = Mode::ShortTerm;
};

using Trajectory = std::vector<TrajectoryEntry>;

/// Runs `tracker` over the whole sequence, initialized on the first frame's
/// ground truth (which must be present). Frame 0 reports the init box.
Trajectory run_tracker(const Sequence& sequence, SequenceTracker& tracker);

/// Success-curve thresholds 0, 0.01, ..., 1.
inline constexpr int kSuccessThresholds = 101;
inline constexpr double kPrecisionRadius = 20.0;

struct EvalReport {
  /// Area under the success curve (mean over thresholds).
  double success_auc = 0.0;
  double precision_at_20 = 0.0;
  /// Fraction of frames with IoU > 0.5.
  double overlap_precision = 0.0;
  double mean_overlap = 0.0;
  /// Frames with IoU == 0 (including frames without a prediction).
  int failures = 0;
  int evaluated_frames = 0;
  std::vector<double> success_curve;
  /// Per frame; empty where ground truth is absent.
  std::vector<std::optional<double>> iou_series;
};

/// One-pass evaluation. Frames without ground truth are skipped; a missing
/// prediction counts as IoU 0 and infinite center distance. A frame counts as
/// a success at threshold t when IoU > t, or when IoU is exactly 1.
EvalReport eval_success_precision(const Trajectory& trajectory, const GroundTruth& ground_truth);

struct ResetReport {
  /// Mean IoU over every scored frame (re-initialization frames are not scored).
  double accuracy = 0.0;
  int failures = 0;
  int scored_frames = 0;
  std::vector<int> failure_frames;
  std::vector<int> reinit_frames;
  std::vector<std::optional<double>> iou_series;
};

inline constexpr int kDefaultReinitDelay = 5;

/// Reset-based protocol: a frame with ground truth and IoU 0 is a failure and
/// the tracker is re-initialized on ground truth `reinit_delay` frames later
/// (or at the next frame with ground truth after that). Frames without ground
/// truth are tracked but neither scored nor able to trigger a failure.
ResetReport eval_reset_based(const Sequence& sequence, SequenceTracker& tracker,
                             int reinit_delay = kDefaultReinitDelay);

/// The same bookkeeping applied to a fixed trajectory, for when the tracker
/// cannot be re-run: frames the protocol would skip are ignored and
/// re-initialization frames are assumed perfect.
ResetReport eval_reset_offline(const Trajectory& trajectory, const GroundTruth& ground_truth,
                               int reinit_delay = kDefaultReinitDelay);

}  // namespace datrack
