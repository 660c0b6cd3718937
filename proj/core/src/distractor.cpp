#include "datrack/distractor.hpp"

#include <cmath>
#include <string>

#include "datrack/correlation.hpp"
#include "datrack/errors.hpp"

namespace datrack {

double DistractorSet::alpha_sum() const noexcept {
  double sum = 0.0;
  for (const auto& e : entries) sum += e.alpha;
  return sum;
}

void RerankConfig::validate() const {
  if (!(alpha_hat >= 0.0)) throw ArgumentError("alpha_hat must be non-negative");
  if (!(default_alpha >= 0.0)) throw ArgumentError("distractor alpha must be non-negative");
  if (!(eta > 0.0 && eta < 1.0)) throw ArgumentError("eta must lie in (0, 1)");
  if (!std::isfinite(bias) || !std::isfinite(distractor_threshold)) {
    throw ArgumentError("bias and distractor threshold must be finite");
  }
}

namespace {

const FeatureMap& embedding_of(const Proposal& p) {
  if (!p.embedding) throw ArgumentError("proposal has no embedding");
  return *p.embedding;
}

void check_compatible(const FeatureMap& exemplar, const DistractorSet& distractors,
                      std::span<const Proposal> candidates) {
  for (const auto& d : distractors.entries) {
    if (!d.embedding.same_shape(exemplar)) throw DimensionError("distractor embedding shape differs from exemplar");
    if (!(d.alpha >= 0.0)) throw ArgumentError("distractor weights must be non-negative");
  }
  for (const auto& p : candidates) {
    if (!embedding_of(p).same_shape(exemplar)) throw DimensionError("candidate embedding shape differs from exemplar");
  }
}

std::size_t best_of(std::span<const Proposal> candidates, const std::vector<double>& scores) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    if (scores[i] > scores[best] || (scores[i] == scores[best] && candidates[i].cell < candidates[best].cell)) {
      best = i;
    }
  }
  return best;
}

RerankResult finish(std::span<const Proposal> candidates, std::vector<double> scores) {
  RerankResult out;
  out.best_index = best_of(candidates, scores);
  out.best = candidates[out.best_index];
  out.scores = std::move(scores);
  return out;
}

}  // namespace

TargetSelection select_target_and_distractors(std::span<const Proposal> survivors, double threshold,
                                              double alpha, ThresholdOn on) {
  if (survivors.empty()) throw NoCandidatesError("no proposal survived suppression");
  std::size_t target = 0;
  for (std::size_t i = 1; i < survivors.size(); ++i) {
    if (ranks_before(survivors[i], survivors[target])) target = i;
  }
  TargetSelection out;
  out.target = survivors[target];
  for (std::size_t i = 0; i < survivors.size(); ++i) {
    if (i == target) continue;
    const double value = on == ThresholdOn::Score ? survivors[i].score : survivors[i].confidence;
    if (value > threshold) out.distractors.entries.push_back({embedding_of(survivors[i]), alpha});
  }
  return out;
}

RerankResult rerank_direct(const FeatureMap& exemplar, const DistractorSet& distractors,
                           std::span<const Proposal> candidates, const RerankConfig& cfg) {
  if (candidates.empty()) throw NoCandidatesError("rerank needs at least one candidate");
  check_compatible(exemplar, distractors, candidates);
  const double alpha_sum = distractors.alpha_sum();
  std::vector<double> scores;
  scores.reserve(candidates.size());
  for (const auto& p : candidates) {
    const FeatureMap& x = *p.embedding;
    double score = correlate_aligned(exemplar, x, cfg.bias);
    if (alpha_sum > 0.0) {
      double weighted = 0.0;
      for (const auto& d : distractors.entries) weighted += d.alpha * correlate_aligned(d.embedding, x, cfg.bias);
      score -= cfg.alpha_hat * weighted / alpha_sum;
    }
    scores.push_back(score);
  }
  return finish(candidates, std::move(scores));
}

FeatureMap distractor_aware_query(const FeatureMap& exemplar, const DistractorSet& distractors, double alpha_hat) {
  const double alpha_sum = distractors.alpha_sum();
  std::vector<WeightedMap> terms{{&exemplar, 1.0}};
  if (alpha_sum > 0.0) {
    for (const auto& d : distractors.entries) terms.push_back({&d.embedding, -alpha_hat * d.alpha / alpha_sum});
  }
  return linear_combine(terms);
}

RerankResult rerank_with_query(const FeatureMap& query, std::span<const Proposal> candidates, double bias) {
  if (candidates.empty()) throw NoCandidatesError("rerank needs at least one candidate");
  std::vector<double> scores;
  scores.reserve(candidates.size());
  for (const auto& p : candidates) scores.push_back(correlate_aligned(query, embedding_of(p), bias));
  return finish(candidates, std::move(scores));
}

RerankResult rerank_factored(const FeatureMap& exemplar, const DistractorSet& distractors,
                             std::span<const Proposal> candidates, const RerankConfig& cfg) {
  if (candidates.empty()) throw NoCandidatesError("rerank needs at least one candidate");
  check_compatible(exemplar, distractors, candidates);
  if (distractors.alpha_sum() > 0.0) {
    // The folded query carries no bias term.
    return rerank_with_query(distractor_aware_query(exemplar, distractors, cfg.alpha_hat), candidates, 0.0);
  }
  return rerank_with_query(exemplar, candidates, cfg.bias);
}

double beta_weight(int t, double eta) {
  if (t < 1) throw ArgumentError("beta_weight needs t >= 1, got " + std::to_string(t));
  if (!(eta > 0.0 && eta < 1.0)) throw ArgumentError("eta must lie in (0, 1)");
  const double r = eta / (1.0 - eta);
  if (r == 1.0) return static_cast<double>(t);
  // (1 - r^t) / (1 - r), written with expm1 to stay accurate near r = 1.
  const double log_r = std::log(r);
  return std::expm1(t * log_r) / std::expm1(log_r);
}

namespace {

void ensure_shape(CompositeTemplates& ct, const FeatureMap& like) {
  if (ct.target_num.empty()) {
    ct.target_num = FeatureMap(like.width(), like.height(), like.channels());
    ct.distractor_num = FeatureMap(like.width(), like.height(), like.channels());
  } else if (!ct.target_num.same_shape(like)) {
    throw DimensionError("template update shape differs from the accumulated templates");
  }
}

void absorb_distractors(CompositeTemplates& ct, const DistractorSet& distractors, double beta,
                        const RerankConfig& cfg) {
  const double alpha_sum = distractors.alpha_sum();
  if (distractors.empty() || !(alpha_sum > 0.0)) return;
  if (cfg.alpha_hat != 0.0) {
    auto num = ct.distractor_num.data();
    for (const auto& d : distractors.entries) {
      const double coeff = beta * cfg.alpha_hat * d.alpha;
      const auto x = d.embedding.data();
      for (std::size_t i = 0; i < num.size(); ++i) num[i] += coeff * x[i];
    }
  }
  ct.distractor_den += beta * alpha_sum;
}

}  // namespace

CompositeTemplates update_templates(CompositeTemplates ct, const FeatureMap& target,
                                    const DistractorSet& distractors, const RerankConfig& cfg) {
  ensure_shape(ct, target);
  for (const auto& d : distractors.entries) {
    if (!d.embedding.same_shape(target)) throw DimensionError("distractor shape differs from the target embedding");
  }
  ct.frames_absorbed += 1;
  const double beta = beta_weight(ct.frames_absorbed, cfg.eta);
  auto num = ct.target_num.data();
  const auto z = target.data();
  for (std::size_t i = 0; i < num.size(); ++i) num[i] += beta * z[i];
  ct.beta_sum += beta;
  absorb_distractors(ct, distractors, beta, cfg);
  return ct;
}

CompositeTemplates with_pending_distractors(CompositeTemplates ct, const DistractorSet& distractors,
                                           const RerankConfig& cfg) {
  if (!ct.initialized()) throw UninitializedError("templates have not absorbed any frame");
  for (const auto& d : distractors.entries) {
    if (!d.embedding.same_shape(ct.target_num)) throw DimensionError("distractor shape differs from the templates");
  }
  absorb_distractors(ct, distractors, beta_weight(ct.frames_absorbed + 1, cfg.eta), cfg);
  return ct;
}

FeatureMap target_average(const CompositeTemplates& ct) {
  if (!ct.initialized()) throw UninitializedError("templates have not absorbed any frame");
  FeatureMap out = ct.target_num;
  for (double& v : out.data()) v /= ct.beta_sum;
  return out;
}

FeatureMap composite_query(const CompositeTemplates& ct) {
  FeatureMap out = target_average(ct);
  if (ct.distractor_den > 0.0) {
    auto o = out.data();
    const auto d = ct.distractor_num.data();
    for (std::size_t i = 0; i < o.size(); ++i) o[i] -= d[i] / ct.distractor_den;
  }
  return out;
}

}  // namespace datrack
