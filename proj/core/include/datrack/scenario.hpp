#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "datrack/embedding.hpp"
#include "datrack/geometry.hpp"

namespace datrack {

/// Inclusive frame range.
struct VisibleInterval {
  int first = 0;
  int last = 0;
};

struct EntitySpec {
  std::vector<double> signature;
  /// One box per frame.
  std::vector<BBox> trajectory;
  /// Frames where the entity is rendered; empty means always.
  std::vector<VisibleInterval> visible;
  bool is_target = false;

  bool visible_at(int frame) const noexcept;
};

struct ScenarioSpec {
  int frame_count = 0;
  int width = 0;
  int height = 0;
  int channels = 0;
  std::vector<EntitySpec> entities;
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;

  void validate() const;
  const EntitySpec& target() const;
};

using GroundTruth = std::vector<std::optional<BBox>>;

struct Sequence {
  int width = 0;
  int height = 0;
  std::vector<Frame> frames;
  /// Absent while the target is invisible.
  GroundTruth ground_truth;
};

/// Renders the spec into synthetic-scene frames plus ground truth. Pure in the spec.
Sequence gen_scenario(const ScenarioSpec& spec);

enum class Preset { Crossing, OutOfView, Clutter };

std::optional<Preset> parse_preset(std::string_view name);
const char* to_string(Preset preset) noexcept;

struct PresetOptions {
  int frame_count = 100;
  int width = 640;
  int height = 480;
  int channels = 16;
  double noise_sigma = 0.01;
  double target_size = 40.0;
  /// Crossing preset: distractor signature = (1 + gain) * (v + perturbation * u_i)
  /// with v the target signature.
  double distractor_gain = 0.1;
  double distractor_perturbation = 1.0;
  /// Crossing preset: u_i = normalize(u + spread * w_i) with u shared by all
  /// distractors and w_i individual, both orthogonal to v.
  double distractor_spread = 0.3;
  int distractor_count = 3;
  /// Crossing preset: distractor speed range in pixels per frame.
  double crossing_speed_min = 6.0;
  double crossing_speed_max = 8.0;
  /// Out-of-view preset: invisible frames and the jump on reappearance.
  int hidden_first = 40;
  int hidden_last = 70;
  double reappear_min = 270.0;
  double reappear_max = 310.0;
};

ScenarioSpec make_preset(Preset preset, std::uint64_t seed, const PresetOptions& options = {});

}  // namespace datrack
