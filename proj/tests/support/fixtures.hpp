#pragma once

// Small scenario builders shared by tracker, metrics and acceptance tests.

#include <cmath>
#include <string>
#include <vector>

#include "datrack/rng.hpp"
#include "datrack/sampler.hpp"
#include "datrack/scenario.hpp"
#include "datrack/tracker.hpp"

namespace fixture {

inline std::vector<double> random_unit(datrack::Rng& rng, int n) {
  std::vector<double> v(static_cast<std::size_t>(n));
  double norm = 0.0;
  for (auto& x : v) {
    x = rng.normal();
    norm += x * x;
  }
  for (auto& x : v) x /= std::sqrt(norm);
  return v;
}

/// One target gliding at constant velocity, nothing else in the scene.
inline datrack::ScenarioSpec lone_target(std::uint64_t seed, int frames = 40, double vx = 2.0, double vy = 1.0) {
  datrack::Rng rng(seed);
  datrack::ScenarioSpec spec;
  spec.frame_count = frames;
  spec.width = 640;
  spec.height = 480;
  spec.channels = 16;
  spec.seed = seed;
  spec.noise_sigma = 0.01;
  datrack::EntitySpec target;
  target.signature = random_unit(rng, spec.channels);
  target.is_target = true;
  for (int f = 0; f < frames; ++f) target.trajectory.push_back({200.0 + vx * f, 180.0 + vy * f, 40.0, 40.0});
  spec.entities.push_back(std::move(target));
  return spec;
}

/// Replays ground truth except on scripted frames, where it reports a box far
/// away from the target.
class ScriptedTracker final : public datrack::SequenceTracker {
 public:
  ScriptedTracker(const datrack::GroundTruth& gt, std::vector<int> miss_frames)
      : gt_(gt), miss_(std::move(miss_frames)) {}

  void init(const datrack::Frame& frame, const datrack::BBox&) override { inits.push_back(frame.id); }

  datrack::FrameResult track(const datrack::Frame& frame) override {
    datrack::FrameResult r;
    r.found = true;
    r.score = 1.0;
    const auto& truth = gt_[static_cast<std::size_t>(frame.id)];
    r.box = truth ? *truth : datrack::BBox{10, 10, 5, 5};
    for (int m : miss_) {
      if (m == frame.id) r.box = datrack::BBox{r.box->cx + 500.0, r.box->cy, r.box->w, r.box->h};
    }
    return r;
  }

  std::vector<int> inits;

 private:
  const datrack::GroundTruth& gt_;
  std::vector<int> miss_;
};

/// Three categories spread over videos (two instances each, a frame every
/// 10) and stills (one or two instances each).
inline datrack::Corpus small_corpus() {
  using namespace datrack;
  const char* categories[] = {"car", "dog", "person"};
  Corpus corpus;
  for (int v = 0; v < 6; ++v) {
    const std::string video = "vid" + std::to_string(v);
    for (int f = 0; f < 300; f += 10) {
      CorpusItem item;
      item.id = video + "_f" + std::to_string(f);
      item.kind = ItemKind::VideoFrame;
      item.category = categories[v % 3];
      item.video_id = video;
      item.frame_no = f;
      item.payload_path = "frames/" + item.id + ".png";
      item.boxes.push_back({{100.0 + f * 0.5, 120.0, 40.0, 30.0}, "a"});
      item.boxes.push_back({{300.0, 200.0 + f * 0.25, 25.0, 50.0}, "b"});
      corpus.items.push_back(std::move(item));
    }
  }
  for (int s = 0; s < 9; ++s) {
    CorpusItem item;
    item.id = "still" + std::to_string(s);
    item.kind = ItemKind::StillImage;
    item.category = categories[s % 3];
    item.payload_path = "images/" + item.id + ".jpg";
    item.boxes.push_back({{50.0 + s, 60.0, 20.0, 20.0}, "0"});
    if (s % 2 == 0) item.boxes.push_back({{150.0, 160.0 + s, 30.0, 10.0}, "1"});
    corpus.items.push_back(std::move(item));
  }
  return corpus;
}

}  // namespace fixture
