#include "datrack/longterm.hpp"

#include <algorithm>
#include <cmath>

#include "datrack/errors.hpp"

namespace datrack {

const char* to_string(Mode mode) noexcept {
  return mode == Mode::ShortTerm ? "short_term" : "failure";
}

void LongTermConfig::validate() const {
  if (!(leave_threshold >= enter_threshold)) throw ArgumentError("leave threshold must be >= enter threshold");
  if (short_size < 1) throw ArgumentError("short-term search size must be positive");
  if (!(failure_size > short_size)) throw ArgumentError("failure search size must exceed the short-term size");
  if (growth_step() < 0) throw ArgumentError("search growth step must be non-negative");
  if (max_size && *max_size < short_size) throw ArgumentError("max search size must be >= short-term size");
}

TrackerState update_mode(TrackerState state, double score, const LongTermConfig& cfg,
                         std::optional<Point2> detected_center) {
  if (state.mode == Mode::ShortTerm) {
    if (score < cfg.enter_threshold) {
      state.mode = Mode::Failure;
      state.failure_iters = 1;
    }
    return state;
  }
  if (score >= cfg.leave_threshold) {
    state.mode = Mode::ShortTerm;
    state.failure_iters = 0;
    if (detected_center) state.center = *detected_center;
  } else {
    state.failure_iters += 1;
  }
  return state;
}

int effective_max_size(const LongTermConfig& cfg, int frame_width, int frame_height, int stride) {
  if (cfg.max_size) return *cfg.max_size;
  const double diagonal = std::hypot(static_cast<double>(frame_width), static_cast<double>(frame_height));
  const int rounded = static_cast<int>(std::ceil(diagonal / stride)) * stride;
  return std::max(rounded, cfg.failure_size);
}

int search_size(const TrackerState& state, const LongTermConfig& cfg, int frame_width, int frame_height,
                int stride) {
  if (state.mode == Mode::ShortTerm) return cfg.short_size;
  const long long grown = cfg.short_size + static_cast<long long>(state.failure_iters) * cfg.growth_step();
  return static_cast<int>(std::min<long long>(grown, effective_max_size(cfg, frame_width, frame_height, stride)));
}

Point2 failure_center(const TrackerState& state, const LongTermConfig& cfg, int frame_width, int frame_height,
                      int stride) {
  if (state.mode == Mode::Failure &&
      search_size(state, cfg, frame_width, frame_height, stride) >= std::max(frame_width, frame_height)) {
    return {frame_width / 2.0, frame_height / 2.0};
  }
  return state.center;
}

}  // namespace datrack
