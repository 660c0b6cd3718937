#include <benchmark/benchmark.h>

#include <vector>

#include "datrack/correlation.hpp"
#include "datrack/distractor.hpp"
#include "datrack/proposals.hpp"
#include "datrack/rng.hpp"

using namespace datrack;

namespace {

FeatureMap random_map(Rng& rng, int w, int h, int c) {
  std::vector<double> data(static_cast<std::size_t>(w) * h * c);
  for (auto& v : data) v = rng.uniform(-1.0, 1.0);
  return FeatureMap(w, h, c, std::move(data));
}

// Search grids for the 255 and 767 pixel regions.
void BM_Xcorr(benchmark::State& state) {
  Rng rng(1);
  const int cells = static_cast<int>(state.range(0));
  const FeatureMap t = random_map(rng, 6, 6, 16);
  const FeatureMap s = random_map(rng, cells, cells, 16);
  for (auto _ : state) benchmark::DoNotOptimize(xcorr(t, s, 0.0));
}
BENCHMARK(BM_Xcorr)->Arg(22)->Arg(86);

void BM_XcorrBlocked(benchmark::State& state) {
  Rng rng(1);
  const int cells = static_cast<int>(state.range(0));
  const FeatureMap t = random_map(rng, 6, 6, 16);
  const FeatureMap s = random_map(rng, cells, cells, 16);
  for (auto _ : state) benchmark::DoNotOptimize(xcorr_blocked(t, s, 0.0));
}
BENCHMARK(BM_XcorrBlocked)->Arg(22)->Arg(86);

struct RerankInputs {
  FeatureMap exemplar;
  DistractorSet distractors;
  std::vector<Proposal> candidates;
};

RerankInputs rerank_inputs(int n) {
  Rng rng(2);
  RerankInputs in;
  in.exemplar = random_map(rng, 6, 6, 16);
  for (int i = 0; i < n; ++i) in.distractors.entries.push_back({random_map(rng, 6, 6, 16), 1.0});
  for (int i = 0; i < 16; ++i) {
    Proposal p;
    p.embedding = random_map(rng, 6, 6, 16);
    p.cell = {i, 0, 0};
    in.candidates.push_back(std::move(p));
  }
  return in;
}

void BM_RerankDirect(benchmark::State& state) {
  const auto in = rerank_inputs(static_cast<int>(state.range(0)));
  const RerankConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(rerank_direct(in.exemplar, in.distractors, in.candidates, cfg));
}
BENCHMARK(BM_RerankDirect)->Arg(1)->Arg(4)->Arg(16)->Arg(64);

void BM_RerankFactored(benchmark::State& state) {
  const auto in = rerank_inputs(static_cast<int>(state.range(0)));
  const RerankConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(rerank_factored(in.exemplar, in.distractors, in.candidates, cfg));
}
BENCHMARK(BM_RerankFactored)->Arg(1)->Arg(4)->Arg(16)->Arg(64);

void BM_RerankLearnedQuery(benchmark::State& state) {
  const auto in = rerank_inputs(static_cast<int>(state.range(0)));
  const RerankConfig cfg;
  const auto ct = update_templates({}, in.exemplar, in.distractors, cfg);
  for (auto _ : state) benchmark::DoNotOptimize(rerank_with_query(composite_query(ct), in.candidates, cfg.bias));
}
BENCHMARK(BM_RerankLearnedQuery)->Arg(1)->Arg(4)->Arg(16)->Arg(64);

void BM_Nms(benchmark::State& state) {
  Rng rng(3);
  std::vector<Proposal> p(static_cast<std::size_t>(state.range(0)));
  for (std::size_t i = 0; i < p.size(); ++i) {
    p[i].box = {rng.uniform(0, 255), rng.uniform(0, 255), rng.uniform(10, 80), rng.uniform(10, 80)};
    p[i].score = rng.uniform();
    p[i].cell = {static_cast<int>(i), 0, 0};
  }
  for (auto _ : state) benchmark::DoNotOptimize(nms(p, 0.5));
}
BENCHMARK(BM_Nms)->Arg(300)->Arg(1445);

}  // namespace
BENCHMARK_MAIN();
