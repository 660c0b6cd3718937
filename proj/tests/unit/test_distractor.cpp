#include <gtest/gtest.h>

#include <cmath>

#include "datrack/distractor.hpp"
#include "datrack/errors.hpp"
#include "oracles.hpp"

using namespace datrack;

namespace {

Proposal with_embedding(FeatureMap m, int idx, double score = 0.0) {
  Proposal p;
  p.embedding = std::move(m);
  p.cell = {idx, 0, 0};
  p.score = score;
  p.confidence = score;
  return p;
}

struct Case {
  FeatureMap z;
  std::vector<FeatureMap> d;
  std::vector<double> alpha;
  std::vector<Proposal> candidates;
  RerankConfig cfg;
};

Case random_case(Rng& rng, int n_distractors) {
  Case c;
  const int w = 1 + static_cast<int>(rng.below(6));
  const int h = 1 + static_cast<int>(rng.below(6));
  const int ch = 1 + static_cast<int>(rng.below(8));
  c.z = oracle::random_map(rng, w, h, ch);
  for (int i = 0; i < n_distractors; ++i) {
    c.d.push_back(oracle::random_map(rng, w, h, ch));
    c.alpha.push_back(rng.uniform(0.1, 2.0));
  }
  const int n_cand = 1 + static_cast<int>(rng.below(12));
  for (int i = 0; i < n_cand; ++i) c.candidates.push_back(with_embedding(oracle::random_map(rng, w, h, ch), i));
  c.cfg.alpha_hat = rng.uniform(0.0, 2.0);
  c.cfg.bias = rng.uniform(-1.0, 1.0);
  return c;
}

DistractorSet to_set(const Case& c) {
  DistractorSet set;
  for (std::size_t i = 0; i < c.d.size(); ++i) set.entries.push_back({c.d[i], c.alpha[i]});
  return set;
}

}  // namespace

TEST(Rerank, DirectMatchesPerTermOracle) {
  Rng rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    const Case c = random_case(rng, static_cast<int>(rng.below(9)));
    const auto r = rerank_direct(c.z, to_set(c), c.candidates, c.cfg);
    ASSERT_EQ(r.scores.size(), c.candidates.size());
    for (std::size_t i = 0; i < c.candidates.size(); ++i) {
      const double expected =
          oracle::rerank_score(c.z, c.d, c.alpha, c.cfg.alpha_hat, *c.candidates[i].embedding, c.cfg.bias);
      EXPECT_LE(oracle::rel_diff(r.scores[i], expected), 1e-9) << "trial " << trial;
    }
  }
}

TEST(Rerank, FactoredEqualsDirectUpToBiasOffset) {
  Rng rng(32);
  for (int trial = 0; trial < 200; ++trial) {
    const int nd = static_cast<int>(rng.below(9));
    const Case c = random_case(rng, nd);
    const auto set = to_set(c);
    const auto direct = rerank_direct(c.z, set, c.candidates, c.cfg);
    const auto factored = rerank_factored(c.z, set, c.candidates, c.cfg);
    const double offset = nd > 0 ? c.cfg.bias * (1.0 - c.cfg.alpha_hat) : 0.0;
    for (std::size_t i = 0; i < c.candidates.size(); ++i) {
      EXPECT_LE(oracle::rel_diff(factored.scores[i], direct.scores[i] - offset), 1e-9) << "trial " << trial;
    }
    // The offset is shared by all candidates, so the ranking agrees unless two
    // scores are numerically tied.
    const double gap = std::abs(direct.scores[direct.best_index] - direct.scores[factored.best_index]);
    EXPECT_TRUE(direct.best_index == factored.best_index || gap <= 1e-9);
  }
}

TEST(Rerank, EmptyDistractorsAndZeroAlphaHatReduceToExemplar) {
  Rng rng(33);
  for (int trial = 0; trial < 50; ++trial) {
    Case c = random_case(rng, 0);
    for (const auto& p : c.candidates) {
      const double plain = oracle::dot(c.z, *p.embedding) + c.cfg.bias;
      const auto d = rerank_direct(c.z, {}, std::span(&p, 1), c.cfg);
      const auto f = rerank_factored(c.z, {}, std::span(&p, 1), c.cfg);
      EXPECT_LE(oracle::rel_diff(d.scores[0], plain), 1e-12);
      EXPECT_LE(oracle::rel_diff(f.scores[0], plain), 1e-12);
    }
    Case with_d = random_case(rng, 3);
    with_d.cfg.alpha_hat = 0.0;
    const auto r = rerank_direct(with_d.z, to_set(with_d), with_d.candidates, with_d.cfg);
    for (std::size_t i = 0; i < with_d.candidates.size(); ++i) {
      EXPECT_LE(oracle::rel_diff(r.scores[i], oracle::dot(with_d.z, *with_d.candidates[i].embedding) + with_d.cfg.bias),
                1e-12);
    }
  }
}

TEST(Rerank, Errors) {
  Rng rng(34);
  const Case c = random_case(rng, 2);
  RerankConfig cfg;
  EXPECT_THROW(rerank_direct(c.z, to_set(c), {}, cfg), NoCandidatesError);
  EXPECT_THROW(rerank_factored(c.z, to_set(c), {}, cfg), NoCandidatesError);
  DistractorSet bad;
  bad.entries.push_back({FeatureMap(c.z.width() + 1, c.z.height(), c.z.channels()), 1.0});
  EXPECT_THROW(rerank_direct(c.z, bad, c.candidates, cfg), DimensionError);
  Proposal bare;
  EXPECT_THROW(rerank_direct(c.z, {}, std::span(&bare, 1), cfg), ArgumentError);
}

TEST(Beta, ClosedFormMatchesLoop) {
  for (double eta : {0.001, 0.01, 0.1, 0.3, 0.49, 0.5, 0.51, 0.7}) {
    for (int t = 1; t <= 60; ++t) {
      EXPECT_LE(oracle::rel_diff(beta_weight(t, eta), oracle::beta_loop(t, eta)), 1e-10) << eta << " " << t;
    }
  }
  EXPECT_DOUBLE_EQ(beta_weight(1, 0.01), 1.0);
  EXPECT_DOUBLE_EQ(beta_weight(7, 0.5), 7.0);
  EXPECT_THROW(beta_weight(0, 0.01), ArgumentError);
  EXPECT_THROW(beta_weight(1, 0.0), ArgumentError);
  EXPECT_THROW(beta_weight(1, 1.0), ArgumentError);
}

TEST(CompositeTemplates, IncrementalMatchesBatch) {
  Rng rng(35);
  for (int trial = 0; trial < 40; ++trial) {
    const int w = 1 + static_cast<int>(rng.below(5));
    const int ch = 1 + static_cast<int>(rng.below(4));
    RerankConfig cfg;
    cfg.alpha_hat = rng.uniform(0.0, 1.5);
    cfg.eta = rng.uniform(0.001, 0.6);
    const int frames = 1 + static_cast<int>(rng.below(30));
    std::vector<oracle::Frame> batch;
    CompositeTemplates ct;
    for (int t = 0; t < frames; ++t) {
      oracle::Frame f{oracle::random_map(rng, w, w, ch), {}, {}};
      const int nd = static_cast<int>(rng.below(4));
      DistractorSet set;
      for (int i = 0; i < nd; ++i) {
        f.distractors.push_back(oracle::random_map(rng, w, w, ch));
        f.alpha.push_back(rng.uniform(0.1, 2.0));
        set.entries.push_back({f.distractors.back(), f.alpha.back()});
      }
      ct = update_templates(std::move(ct), f.target, set, cfg);
      batch.push_back(std::move(f));
    }
    const FeatureMap q = composite_query(ct);
    const auto expected = oracle::batch_query(batch, cfg.alpha_hat, cfg.eta);
    ASSERT_EQ(q.size(), expected.size());
    for (std::size_t k = 0; k < q.size(); ++k) EXPECT_LE(oracle::rel_diff(q.data()[k], expected[k]), 1e-9);
    EXPECT_EQ(ct.frames_absorbed, frames);
  }
}

TEST(CompositeTemplates, SingleFrameQueryIsDistractorAwareQuery) {
  Rng rng(36);
  const Case c = random_case(rng, 4);
  const auto set = to_set(c);
  const auto ct = update_templates({}, c.z, set, c.cfg);
  const auto q = composite_query(ct);
  const auto expected = distractor_aware_query(c.z, set, c.cfg.alpha_hat);
  for (std::size_t k = 0; k < q.size(); ++k) EXPECT_LE(oracle::rel_diff(q.data()[k], expected.data()[k]), 1e-12);
  EXPECT_EQ(target_average(ct), c.z);
}

TEST(CompositeTemplates, PendingDistractorsUseNextWeight) {
  Rng rng(37);
  const Case c = random_case(rng, 2);
  RerankConfig cfg = c.cfg;
  cfg.eta = 0.2;
  auto ct = update_templates({}, c.z, {}, cfg);
  const auto pending = with_pending_distractors(ct, to_set(c), cfg);
  EXPECT_EQ(pending.frames_absorbed, 1);
  EXPECT_EQ(pending.target_num, ct.target_num);
  EXPECT_NEAR(pending.distractor_den, beta_weight(2, cfg.eta) * (c.alpha[0] + c.alpha[1]), 1e-12);
  EXPECT_THROW(with_pending_distractors({}, to_set(c), cfg), UninitializedError);
  EXPECT_THROW(composite_query({}), UninitializedError);
  EXPECT_THROW(update_templates(ct, FeatureMap(9, 9, 1), {}, cfg), DimensionError);
}

TEST(Selection, TargetIsBestAndDistractorsPassThreshold) {
  Rng rng(38);
  std::vector<Proposal> s;
  const double scores[] = {0.3, 0.9, 0.1, 0.25, 0.2};
  for (int i = 0; i < 5; ++i) s.push_back(with_embedding(oracle::random_map(rng, 2, 2, 1), i, scores[i]));
  const auto sel = select_target_and_distractors(s, 0.2, 0.7);
  EXPECT_EQ(sel.target.cell.row, 1);
  ASSERT_EQ(sel.distractors.size(), 2u);  // 0.3 and 0.25; 0.2 is not above the threshold
  EXPECT_EQ(sel.distractors.entries[0].embedding, *s[0].embedding);
  EXPECT_EQ(sel.distractors.entries[1].alpha, 0.7);
  EXPECT_THROW(select_target_and_distractors({}, 0.2), NoCandidatesError);
  s[3].embedding.reset();
  EXPECT_THROW(select_target_and_distractors(s, 0.2), ArgumentError);
}

TEST(RerankConfig, Validation) {
  RerankConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.eta = 1.0;
  EXPECT_THROW(cfg.validate(), ArgumentError);
  cfg = {};
  cfg.alpha_hat = -0.1;
  EXPECT_THROW(cfg.validate(), ArgumentError);
}
