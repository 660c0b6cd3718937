#include "datrack/bench.hpp"

#include <algorithm>
#include <chrono>
#include <ostream>

#include "datrack/distractor.hpp"
#include "datrack/errors.hpp"
#include "datrack/rng.hpp"
#include "datrack/text.hpp"

namespace datrack {

void BenchConfig::validate() const {
  if (n_values.empty()) throw ArgumentError("bench needs at least one n value");
  for (int n : n_values) {
    if (n < 0) throw ArgumentError("bench n values must be non-negative");
  }
  if (repetitions < 1 || inner_iterations < 1 || candidates < 1 || exemplar_cells < 1 || channels < 1) {
    throw ArgumentError("bench sizes must be positive");
  }
}

namespace {

FeatureMap random_map(Rng& rng, int cells, int channels) {
  std::vector<double> data(static_cast<std::size_t>(cells) * cells * channels);
  for (auto& v : data) v = rng.normal();
  return FeatureMap(cells, cells, channels, std::move(data));
}

// Median seconds per call of `pass`, measured over repetitions x inner iterations.
template <class Pass>
double median_seconds(const BenchConfig& cfg, Pass pass) {
  using clock = std::chrono::steady_clock;
  pass();  // warm-up
  std::vector<double> samples;
  samples.reserve(static_cast<std::size_t>(cfg.repetitions));
  for (int r = 0; r < cfg.repetitions; ++r) {
    const auto start = clock::now();
    for (int i = 0; i < cfg.inner_iterations; ++i) pass();
    const std::chrono::duration<double> elapsed = clock::now() - start;
    samples.push_back(elapsed.count() / cfg.inner_iterations);
  }
  std::nth_element(samples.begin(), samples.begin() + samples.size() / 2, samples.end());
  return samples[samples.size() / 2];
}

}  // namespace

std::vector<BenchRow> bench_rerank(const BenchConfig& cfg) {
  cfg.validate();
  Rng rng(cfg.seed);
  RerankConfig rerank;
  const FeatureMap exemplar = random_map(rng, cfg.exemplar_cells, cfg.channels);
  std::vector<Proposal> candidates(static_cast<std::size_t>(cfg.candidates));
  for (auto& c : candidates) c.embedding = random_map(rng, cfg.exemplar_cells, cfg.channels);

  volatile double sink = 0.0;
  std::vector<BenchRow> rows;
  for (int n : cfg.n_values) {
    DistractorSet set;
    for (int i = 0; i < n; ++i) set.entries.push_back({random_map(rng, cfg.exemplar_cells, cfg.channels), 1.0});
    const CompositeTemplates templates = update_templates({}, exemplar, set, rerank);

    BenchRow row;
    row.n = n;
    row.direct_seconds = median_seconds(cfg, [&] { sink = sink + rerank_direct(exemplar, set, candidates, rerank).best.score; });
    row.factored_seconds = median_seconds(cfg, [&] {
      sink = sink + rerank_with_query(composite_query(templates), candidates, rerank.bias).best.score;
    });
    row.factored_from_set_seconds =
        median_seconds(cfg, [&] { sink = sink + rerank_factored(exemplar, set, candidates, rerank).best.score; });
    rows.push_back(row);
  }
  return rows;
}

void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows) {
  out << "n,direct_seconds,factored_seconds,factored_from_set_seconds\n";
  for (const auto& r : rows) {
    out << r.n << ',' << format_double(r.direct_seconds) << ',' << format_double(r.factored_seconds) << ','
        << format_double(r.factored_from_set_seconds) << '\n';
  }
}

}  // namespace datrack
