#include "datrack/metrics.hpp"

#include <limits>
#include <string>

#include "datrack/errors.hpp"
#include "datrack/proposals.hpp"

namespace datrack {

Trajectory run_tracker(const Sequence& sequence, SequenceTracker& tracker) {
  if (sequence.frames.empty()) return {};
  if (sequence.ground_truth.size() != sequence.frames.size()) {
    throw ArgumentError("ground truth length does not match the frame count");
  }
  if (!sequence.ground_truth.front()) throw ArgumentError("first frame has no ground truth to initialize from");
  Trajectory out;
  out.reserve(sequence.frames.size());
  tracker.init(sequence.frames.front(), *sequence.ground_truth.front());
  out.push_back({sequence.ground_truth.front(), 1.0, Mode::ShortTerm});
  for (std::size_t f = 1; f < sequence.frames.size(); ++f) {
    const FrameResult r = tracker.track(sequence.frames[f]);
    out.push_back({r.box, r.score, r.mode});
  }
  return out;
}

EvalReport eval_success_precision(const Trajectory& trajectory, const GroundTruth& ground_truth) {
  if (trajectory.size() != ground_truth.size()) {
    throw ArgumentError("trajectory has " + std::to_string(trajectory.size()) + " frames, ground truth has " +
                        std::to_string(ground_truth.size()));
  }
  EvalReport report;
  report.success_curve.assign(kSuccessThresholds, 0.0);
  report.iou_series.resize(ground_truth.size());
  double overlap_sum = 0.0;
  int within_radius = 0;
  int above_half = 0;
  for (std::size_t f = 0; f < ground_truth.size(); ++f) {
    if (!ground_truth[f]) continue;
    const auto& pred = trajectory[f].box;
    const double o = pred ? iou(*pred, *ground_truth[f]) : 0.0;
    const double dist = pred ? center_distance(*pred, *ground_truth[f]) : std::numeric_limits<double>::infinity();
    report.iou_series[f] = o;
    ++report.evaluated_frames;
    overlap_sum += o;
    if (dist <= kPrecisionRadius) ++within_radius;
    if (o > 0.5) ++above_half;
    if (o == 0.0) ++report.failures;
    for (int i = 0; i < kSuccessThresholds; ++i) {
      const double t = static_cast<double>(i) / (kSuccessThresholds - 1);
      if (o > t || o == 1.0) report.success_curve[i] += 1.0;
    }
  }
  if (report.evaluated_frames == 0) return report;
  const double n = report.evaluated_frames;
  double area = 0.0;
  for (auto& v : report.success_curve) {
    v /= n;
    area += v;
  }
  report.success_auc = area / kSuccessThresholds;
  report.precision_at_20 = within_radius / n;
  report.overlap_precision = above_half / n;
  report.mean_overlap = overlap_sum / n;
  return report;
}

namespace {

// Next frame index >= from that has ground truth, or size() if none.
std::size_t next_annotated(const GroundTruth& gt, std::size_t from) {
  while (from < gt.size() && !gt[from]) ++from;
  return from;
}

// Shared bookkeeping; `predict(f)` yields the box for frame f and
// `reinit(f)` restarts the tracker there.
template <class Predict, class Reinit>
ResetReport reset_protocol(const GroundTruth& gt, int reinit_delay, Predict predict, Reinit reinit) {
  if (reinit_delay < 1) throw ArgumentError("re-initialization delay must be at least 1 frame");
  ResetReport report;
  report.iou_series.resize(gt.size());
  double sum = 0.0;
  std::size_t f = next_annotated(gt, 0);
  if (f >= gt.size()) return report;
  reinit(f);
  ++f;
  while (f < gt.size()) {
    const std::optional<BBox> box = predict(f);
    if (!gt[f]) {
      ++f;
      continue;
    }
    const double o = box ? iou(*box, *gt[f]) : 0.0;
    report.iou_series[f] = o;
    ++report.scored_frames;
    sum += o;
    if (o > 0.0) {
      ++f;
      continue;
    }
    ++report.failures;
    report.failure_frames.push_back(static_cast<int>(f));
    const std::size_t restart = next_annotated(gt, f + static_cast<std::size_t>(reinit_delay));
    if (restart >= gt.size()) break;
    report.reinit_frames.push_back(static_cast<int>(restart));
    reinit(restart);
    f = restart + 1;
  }
  if (report.scored_frames > 0) report.accuracy = sum / report.scored_frames;
  return report;
}

}  // namespace

ResetReport eval_reset_based(const Sequence& sequence, SequenceTracker& tracker, int reinit_delay) {
  if (sequence.ground_truth.size() != sequence.frames.size()) {
    throw ArgumentError("ground truth length does not match the frame count");
  }
  const auto& gt = sequence.ground_truth;
  return reset_protocol(
      gt, reinit_delay, [&](std::size_t f) { return tracker.track(sequence.frames[f]).box; },
      [&](std::size_t f) { tracker.init(sequence.frames[f], *gt[f]); });
}

ResetReport eval_reset_offline(const Trajectory& trajectory, const GroundTruth& ground_truth, int reinit_delay) {
  if (trajectory.size() != ground_truth.size()) {
    throw ArgumentError("trajectory and ground truth lengths differ");
  }
  return reset_protocol(
      ground_truth, reinit_delay, [&](std::size_t f) { return trajectory[f].box; }, [](std::size_t) {});
}

}  // namespace datrack
