#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "datrack/feature_map.hpp"
#include "datrack/proposals.hpp"

namespace datrack {

struct DistractorEntry {
  FeatureMap embedding;
  double alpha = 1.0;
};

/// Hard negatives collected in one frame. Entries share one shape.
struct DistractorSet {
  std::vector<DistractorEntry> entries;

  bool empty() const noexcept { return entries.empty(); }
  std::size_t size() const noexcept { return entries.size(); }
  double alpha_sum() const noexcept;
};

struct RerankConfig {
  /// Overall influence of the distractor term.
  double alpha_hat = 0.5;
  /// Weight given to each collected distractor.
  double default_alpha = 1.0;
  /// Minimum confidence for a non-target survivor to count as a distractor.
  double distractor_threshold = 0.2;
  /// Learning-rate parameter of the template weights; must lie in (0, 1).
  double eta = 0.01;
  double bias = 0.0;

  void validate() const;
};

/// Running sums behind the incrementally learned query:
///
///   query = target_num / beta_sum - distractor_num / distractor_den
///
/// target_num = sum_t beta_t z_t, distractor_num = sum_t beta_t alpha_hat sum_i alpha_i d_{i,t},
/// distractor_den = sum_t beta_t sum_i alpha_i. The distractor term is dropped
/// while distractor_den is 0.
struct CompositeTemplates {
  FeatureMap target_num;
  double beta_sum = 0.0;
  FeatureMap distractor_num;
  double distractor_den = 0.0;
  int frames_absorbed = 0;

  bool initialized() const noexcept { return frames_absorbed > 0; }
};

enum class ThresholdOn { Score, Confidence };

struct TargetSelection {
  Proposal target;
  DistractorSet distractors;
};

/// Picks the best-ranked survivor as the target; every other survivor whose
/// score (or confidence) exceeds `threshold` becomes a distractor with weight
/// `alpha`. Survivors must carry embeddings.
TargetSelection select_target_and_distractors(std::span<const Proposal> survivors, double threshold,
                                              double alpha = 1.0, ThresholdOn on = ThresholdOn::Score);

struct RerankResult {
  std::size_t best_index = 0;
  Proposal best;
  std::vector<double> scores;
};

/// Scores each candidate against the exemplar and every distractor separately:
///   s(p) = f(z, p) - alpha_hat * sum_i alpha_i f(d_i, p) / sum_i alpha_i
/// where every f carries the bias. Cost grows linearly with |D|.
RerankResult rerank_direct(const FeatureMap& exemplar, const DistractorSet& distractors,
                           std::span<const Proposal> candidates, const RerankConfig& cfg);

/// Folds the distractors into one query first, then scores each candidate with
/// a single unbiased correlation (biased as f(z, p) when D is empty). The argmax
/// matches rerank_direct; with distractors present each score equals the direct
/// one minus bias * (1 - alpha_hat).
RerankResult rerank_factored(const FeatureMap& exemplar, const DistractorSet& distractors,
                             std::span<const Proposal> candidates, const RerankConfig& cfg);

/// exemplar - alpha_hat * sum_i alpha_i d_i / sum_i alpha_i (the exemplar itself when D is empty).
FeatureMap distractor_aware_query(const FeatureMap& exemplar, const DistractorSet& distractors, double alpha_hat);

/// One correlation per candidate against a prepared query.
RerankResult rerank_with_query(const FeatureMap& query, std::span<const Proposal> candidates, double bias);

/// beta_t = sum_{i=0}^{t-1} r^i with r = eta / (1 - eta).
double beta_weight(int t, double eta);

/// Absorbs one confident frame: the target embedding and that frame's distractors.
CompositeTemplates update_templates(CompositeTemplates ct, const FeatureMap& target,
                                    const DistractorSet& distractors, const RerankConfig& cfg);

/// Adds `distractors` to the distractor sums with the weight the next update
/// would use, leaving the target sums untouched.
CompositeTemplates with_pending_distractors(CompositeTemplates ct, const DistractorSet& distractors,
                                           const RerankConfig& cfg);

FeatureMap composite_query(const CompositeTemplates& ct);

/// target_num / beta_sum.
FeatureMap target_average(const CompositeTemplates& ct);

}  // namespace datrack
