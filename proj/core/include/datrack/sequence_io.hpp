#pragma once

#include <filesystem>
#include <memory>

#include "datrack/embedding.hpp"
#include "datrack/scenario.hpp"

namespace datrack {

/// A sequence directory holds
///   sequence.txt     key = value: width, height, frame_count, channels,
///                    stride, exemplar_cells, exemplar_extent
///   features.dafm    one full-frame feature record per frame
///   groundtruth.csv  see write_ground_truth_csv
struct SequenceFiles {
  static constexpr const char* kMeta = "sequence.txt";
  static constexpr const char* kFeatures = "features.dafm";
  static constexpr const char* kGroundTruth = "groundtruth.csv";
};

/// Renders every frame through `renderer` on the full-frame grid and writes
/// the directory (created if missing).
void save_sequence(const std::filesystem::path& dir, const Sequence& sequence, const EmbeddingProvider& renderer);

struct LoadedSequence {
  /// Frames carry PrecomputedRef payloads.
  Sequence sequence;
  std::shared_ptr<const PrecomputedProvider> provider;
};

LoadedSequence load_sequence(const std::filesystem::path& dir);

}  // namespace datrack
