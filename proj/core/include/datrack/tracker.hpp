#pragma once

#include <memory>
#include <optional>

#include "datrack/calibration.hpp"
#include "datrack/distractor.hpp"
#include "datrack/embedding.hpp"
#include "datrack/longterm.hpp"
#include "datrack/proposals.hpp"

namespace datrack {

/// Every tunable of the tracking pipeline.
struct TrackerConfig {
  AnchorConfig anchors;
  RerankConfig rerank;
  LongTermConfig long_term;
  CalibrationConfig calibration;
  double window_weight = 0.4;
  double nms_iou = 0.5;
  int top_k = 16;
  /// Proposals kept (by window-mixed score) before suppression.
  int pre_nms_top_n = 300;
  bool enable_long_term = true;
  bool enable_distractors = true;

  void validate() const;
};

struct FrameResult {
  std::optional<BBox> box;
  /// Calibrated re-rank score of the selected proposal, in [0, 1].
  double score = 0.0;
  Mode mode = Mode::ShortTerm;
  /// Number of distractors collected in this frame.
  int distractors = 0;
  /// False when no proposal survived (a failure frame).
  bool found = false;
};

TrackerState init_tracker(const Frame& frame, const BBox& box, const EmbeddingProvider& provider,
                          const TrackerConfig& cfg);

struct TrackStep {
  FrameResult result;
  TrackerState state;
};

/// One frame of distractor-aware tracking:
///   search region -> response -> proposals (window-mixed) -> NMS ->
///   target/distractor split -> top-k -> re-rank with the learned query ->
///   mode update -> template update (short-term, confident frames only).
TrackStep track_frame(TrackerState state, const Frame& frame, const EmbeddingProvider& provider,
                      const TrackerConfig& cfg);

/// Frame-by-frame tracker interface used by the evaluation harness.
class SequenceTracker {
 public:
  virtual ~SequenceTracker() = default;
  virtual void init(const Frame& frame, const BBox& box) = 0;
  virtual FrameResult track(const Frame& frame) = 0;
};

class DistractorAwareTracker final : public SequenceTracker {
 public:
  DistractorAwareTracker(std::shared_ptr<const EmbeddingProvider> provider, TrackerConfig cfg);

  void init(const Frame& frame, const BBox& box) override;
  FrameResult track(const Frame& frame) override;

  const TrackerState& state() const noexcept { return state_; }
  const TrackerConfig& config() const noexcept { return cfg_; }

 private:
  std::shared_ptr<const EmbeddingProvider> provider_;
  TrackerConfig cfg_;
  TrackerState state_;
  bool initialized_ = false;
};

}  // namespace datrack
