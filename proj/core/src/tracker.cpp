#include "datrack/tracker.hpp"

#include <algorithm>
#include <cmath>

#include "datrack/correlation.hpp"
#include "datrack/errors.hpp"

namespace datrack {

void TrackerConfig::validate() const {
  rerank.validate();
  long_term.validate();
  if (!(window_weight >= 0.0 && window_weight <= 1.0)) throw ArgumentError("window_weight must lie in [0, 1]");
  if (!(nms_iou > 0.0 && nms_iou <= 1.0)) throw ArgumentError("nms_iou must lie in (0, 1]");
  if (top_k < 1) throw ArgumentError("top_k must be >= 1");
  if (pre_nms_top_n < 1) throw ArgumentError("pre_nms_top_n must be >= 1");
  if (anchors.anchors_per_cell() < 1) throw ArgumentError("anchor configuration yields no anchors");
  if (!(calibration.gain > 0.0)) throw ArgumentError("calibration gain must be positive");
}

TrackerState init_tracker(const Frame& frame, const BBox& box, const EmbeddingProvider& provider,
                          const TrackerConfig& cfg) {
  cfg.validate();
  if (!box.valid()) throw ArgumentError("initial box must have positive finite size");
  TrackerState state;
  state.center = box.center();
  state.target = box;
  state.composite = update_templates({}, provider.embed_exemplar(frame, box), {}, cfg.rerank);
  state.frame_index = frame.id;
  return state;
}

namespace {

Point2 clamp_to_frame(Point2 p, const Frame& frame) {
  return {std::clamp(p.x, 0.0, static_cast<double>(frame.width)),
          std::clamp(p.y, 0.0, static_cast<double>(frame.height))};
}

TrackStep no_candidates(TrackerState state, const TrackerConfig& cfg) {
  if (cfg.enable_long_term) state = update_mode(std::move(state), 0.0, cfg.long_term);
  FrameResult result;
  result.mode = state.mode;
  return {result, std::move(state)};
}

}  // namespace

TrackStep track_frame(TrackerState state, const Frame& frame, const EmbeddingProvider& provider,
                      const TrackerConfig& cfg) {
  if (!state.composite.initialized()) throw UninitializedError("tracker state was not initialized");
  const GridGeometry& geo = provider.geometry();
  const double bias = cfg.rerank.bias;
  state.frame_index = frame.id;

  const int region = cfg.enable_long_term
                         ? search_size(state, cfg.long_term, frame.width, frame.height, geo.stride)
                         : cfg.long_term.short_size;
  const Point2 center = cfg.enable_long_term
                            ? failure_center(state, cfg.long_term, frame.width, frame.height, geo.stride)
                            : state.center;

  const FeatureMap search = provider.embed_search(frame, center, region);
  const FeatureMap target = target_average(state.composite);
  const ResponseMap raw = xcorr_blocked(target, search, bias);
  const ScoreCalibration response_calibration(correlate_aligned(target, target, bias), cfg.calibration);

  AnchorConfig anchor_cfg = cfg.anchors;
  anchor_cfg.stride = geo.stride;
  const int k = anchor_cfg.anchors_per_cell();
  const auto anchors = generate_anchors(anchor_cfg, raw.height(), raw.width(), center, region);
  const ScoreGrid grid = regress_response(raw, response_calibration, anchors, k, geo.stride, state.target);
  const ResponseMap window = cosine_window(raw.width(), raw.height());

  auto proposals = score_grid_to_proposals(grid, anchors, window, cfg.window_weight);
  // Cells without positive evidence and boxes centered off the frame are not candidates.
  std::erase_if(proposals, [&](const Proposal& p) {
    return !(raw.at(p.cell.col, p.cell.row) - bias > 0.0) || p.box.cx < 0.0 || p.box.cy < 0.0 ||
           p.box.cx > frame.width || p.box.cy > frame.height;
  });
  if (proposals.size() > static_cast<std::size_t>(cfg.pre_nms_top_n)) {
    proposals = top_k(std::move(proposals), cfg.pre_nms_top_n);
  }
  auto survivors = nms(std::move(proposals), cfg.nms_iou);
  if (survivors.empty()) return no_candidates(std::move(state), cfg);

  // Survivors are embedded like the exemplar, centered on their decoded boxes.
  for (auto& p : survivors) p.embedding = provider.embed_exemplar(frame, p.box);

  TargetSelection selection = select_target_and_distractors(survivors, cfg.rerank.distractor_threshold,
                                                            cfg.rerank.default_alpha, ThresholdOn::Confidence);
  if (!cfg.enable_distractors) selection.distractors.entries.clear();

  const auto candidates = top_k(survivors, cfg.top_k);
  const FeatureMap query = composite_query(with_pending_distractors(state.composite, selection.distractors, cfg.rerank));
  const RerankResult reranked = rerank_with_query(query, candidates, bias);
  const ScoreCalibration rerank_calibration(correlate_aligned(query, target, bias), cfg.calibration);

  // Final pick: re-rank score relative to the target's own score, mixed with
  // the same cosine window as the proposals.
  std::size_t best = 0;
  double best_value = 0.0;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const auto& cell = candidates[i].cell;
    const double value = (1.0 - cfg.window_weight) * rerank_calibration.ratio(reranked.scores[i]) +
                         cfg.window_weight * window.at(cell.col, cell.row);
    if (i == 0 || value > best_value || (value == best_value && cell < candidates[best].cell)) {
      best = i;
      best_value = value;
    }
  }
  const Proposal& chosen = candidates[best];
  const double score = rerank_calibration(reranked.scores[best]);

  DistractorSet distractors;
  if (cfg.enable_distractors) {
    for (const auto& p : survivors) {
      if (p.cell == chosen.cell || !(p.confidence > cfg.rerank.distractor_threshold)) continue;
      distractors.entries.push_back({*p.embedding, cfg.rerank.default_alpha});
    }
  }

  if (cfg.enable_long_term) state = update_mode(std::move(state), score, cfg.long_term, chosen.box.center());
  if (state.mode == Mode::ShortTerm) {
    if (score >= cfg.long_term.enter_threshold) {
      state.composite = update_templates(std::move(state.composite), *chosen.embedding, distractors, cfg.rerank);
    }
    state.center = clamp_to_frame(chosen.box.center(), frame);
  }

  FrameResult result;
  result.box = chosen.box;
  result.score = score;
  result.mode = state.mode;
  result.distractors = static_cast<int>(distractors.size());
  result.found = true;
  return {result, std::move(state)};
}

DistractorAwareTracker::DistractorAwareTracker(std::shared_ptr<const EmbeddingProvider> provider, TrackerConfig cfg)
    : provider_(std::move(provider)), cfg_(std::move(cfg)) {
  if (!provider_) throw ArgumentError("tracker needs an embedding provider");
  cfg_.validate();
}

void DistractorAwareTracker::init(const Frame& frame, const BBox& box) {
  state_ = init_tracker(frame, box, *provider_, cfg_);
  initialized_ = true;
}

FrameResult DistractorAwareTracker::track(const Frame& frame) {
  if (!initialized_) throw UninitializedError("tracker used before init()");
  auto step = track_frame(std::move(state_), frame, *provider_, cfg_);
  state_ = std::move(step.state);
  return step.result;
}

}  // namespace datrack
