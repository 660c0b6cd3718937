#include <gtest/gtest.h>

#include <memory>

#include "datrack/errors.hpp"
#include "datrack/metrics.hpp"
#include "datrack/proposals.hpp"
#include "datrack/tracker.hpp"
#include "fixtures.hpp"

using namespace datrack;

namespace {

Trajectory track(const Sequence& seq, const TrackerConfig& cfg) {
  DistractorAwareTracker tracker(std::make_shared<SyntheticProvider>(16), cfg);
  return run_tracker(seq, tracker);
}

void expect_same(const Trajectory& a, const Trajectory& b) {
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t f = 0; f < a.size(); ++f) {
    EXPECT_EQ(a[f].box, b[f].box) << "frame " << f;
    EXPECT_EQ(a[f].score, b[f].score) << "frame " << f;
    EXPECT_EQ(a[f].mode, b[f].mode) << "frame " << f;
  }
}

}  // namespace

TEST(Tracker, FollowsALoneTarget) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const Sequence seq = gen_scenario(fixture::lone_target(seed));
    const Trajectory traj = track(seq, {});
    for (std::size_t f = 0; f < traj.size(); ++f) {
      ASSERT_TRUE(traj[f].box.has_value());
      EXPECT_GE(iou(*traj[f].box, *seq.ground_truth[f]), 0.5) << "seed " << seed << " frame " << f;
      EXPECT_EQ(traj[f].mode, Mode::ShortTerm);
    }
  }
}

TEST(Tracker, ZeroAlphaHatMatchesDistractorsDisabled) {
  const Sequence seq = gen_scenario(make_preset(Preset::Crossing, 4));
  TrackerConfig zero;
  zero.rerank.alpha_hat = 0.0;
  TrackerConfig off;
  off.enable_distractors = false;
  expect_same(track(seq, zero), track(seq, off));
}

TEST(Tracker, LongTermModuleIsInertWithoutFailures) {
  const Sequence seq = gen_scenario(fixture::lone_target(5));
  TrackerConfig off;
  off.enable_long_term = false;
  const auto with = track(seq, {});
  for (const auto& e : with) ASSERT_EQ(e.mode, Mode::ShortTerm);
  expect_same(with, track(seq, off));
}

TEST(Tracker, Deterministic) {
  const Sequence seq = gen_scenario(make_preset(Preset::Clutter, 6));
  expect_same(track(seq, {}), track(seq, {}));
}

TEST(Tracker, StateMachineEntersFailureWhenTargetVanishes) {
  const Sequence seq = gen_scenario(make_preset(Preset::OutOfView, 7));
  const auto traj = track(seq, {});
  bool failed_while_hidden = false;
  for (int f = 41; f <= 70; ++f) failed_while_hidden |= traj[static_cast<std::size_t>(f)].mode == Mode::Failure;
  EXPECT_TRUE(failed_while_hidden);
  EXPECT_EQ(traj.back().mode, Mode::ShortTerm);
}

TEST(Tracker, Errors) {
  const auto provider = std::make_shared<SyntheticProvider>(16);
  EXPECT_THROW(DistractorAwareTracker(nullptr, {}), ArgumentError);
  TrackerConfig bad;
  bad.nms_iou = 0.0;
  EXPECT_THROW(DistractorAwareTracker(provider, bad), ArgumentError);
  DistractorAwareTracker tracker(provider, {});
  const Sequence seq = gen_scenario(fixture::lone_target(8, 3));
  EXPECT_THROW(tracker.track(seq.frames[1]), UninitializedError);
  EXPECT_THROW(track_frame({}, seq.frames[1], *provider, {}), UninitializedError);
  EXPECT_THROW(tracker.init(seq.frames[0], {100, 100, 0, 10}), ArgumentError);
}
