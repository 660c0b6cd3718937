#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace datrack {

struct BenchConfig {
  std::vector<int> n_values{1, 4, 16, 64};
  /// Timed repetitions per n; the median is reported.
  int repetitions = 31;
  /// Scoring passes per repetition.
  int inner_iterations = 50;
  int candidates = 16;
  int exemplar_cells = 6;
  int channels = 16;
  std::uint64_t seed = 7;

  void validate() const;
};

/// Median seconds per scoring pass over `candidates` proposals.
struct BenchRow {
  int n = 0;
  /// rerank_direct against n explicit distractors.
  double direct_seconds = 0.0;
  /// Query taken from the incrementally learned templates (which already
  /// absorbed n distractors) and one correlation per candidate.
  double factored_seconds = 0.0;
  /// rerank_factored from the explicit set: folds n distractors, then scores.
  double factored_from_set_seconds = 0.0;
};

std::vector<BenchRow> bench_rerank(const BenchConfig& cfg);

/// Header: n,direct_seconds,factored_seconds,factored_from_set_seconds.
void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows);

}  // namespace datrack
