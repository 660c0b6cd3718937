#pragma once

#include <optional>

#include "datrack/distractor.hpp"
#include "datrack/geometry.hpp"

namespace datrack {

enum class Mode { ShortTerm, Failure };

const char* to_string(Mode mode) noexcept;

struct LongTermConfig {
  /// Scores below this switch short-term tracking into failure handling.
  double enter_threshold = 0.8;
  /// Scores at or above this end failure handling.
  double leave_threshold = 0.95;
  int short_size = 255;
  int failure_size = 767;
  /// Region growth per failure iteration; unset means failure_size - short_size.
  std::optional<int> step;
  /// Largest search region; unset means the frame diagonal rounded up to the
  /// next stride multiple (never less than failure_size).
  std::optional<int> max_size;

  int growth_step() const noexcept { return step.value_or(failure_size - short_size); }
  void validate() const;
};

struct TrackerState {
  Mode mode = Mode::ShortTerm;
  /// Last confident target position.
  Point2 center;
  /// Current target box; its size is what the regression head decodes to.
  BBox target;
  int failure_iters = 0;
  CompositeTemplates composite;
  int frame_index = 0;
};

/// Hysteresis switch between short-term tracking and failure handling.
TrackerState update_mode(TrackerState state, double score, const LongTermConfig& cfg,
                         std::optional<Point2> detected_center = std::nullopt);

int effective_max_size(const LongTermConfig& cfg, int frame_width, int frame_height, int stride = 8);

int search_size(const TrackerState& state, const LongTermConfig& cfg, int frame_width, int frame_height,
                int stride = 8);

/// Center of the next search region: the last confident position, or the
/// frame center once a failure region is large enough to cover the frame.
Point2 failure_center(const TrackerState& state, const LongTermConfig& cfg, int frame_width, int frame_height,
                      int stride = 8);

}  // namespace datrack
