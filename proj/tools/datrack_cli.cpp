#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "datrack/bench.hpp"
#include "datrack/config.hpp"
#include "datrack/csv_io.hpp"
#include "datrack/errors.hpp"
#include "datrack/metrics.hpp"
#include "datrack/sampler.hpp"
#include "datrack/scenario.hpp"
#include "datrack/sequence_io.hpp"
#include "datrack/text.hpp"

namespace {

using namespace datrack;

TrackerConfig config_or_default(const std::string& path) { return path.empty() ? TrackerConfig{} : load_config(path); }

Trajectory read_trajectory(const std::string& path) {
  std::istringstream in(read_file(path));
  return read_trajectory_csv(in);
}

GroundTruth read_ground_truth(const std::string& path) {
  std::istringstream in(read_file(path));
  return read_ground_truth_csv(in);
}

struct TrackArgs {
  std::string seq, config, out;
};

int run_track(const TrackArgs& a) {
  const LoadedSequence loaded = load_sequence(a.seq);
  DistractorAwareTracker tracker(loaded.provider, config_or_default(a.config));
  const Trajectory traj = run_tracker(loaded.sequence, tracker);
  std::ostringstream out;
  write_trajectory_csv(out, traj);
  write_file(a.out, out.str());
  std::cerr << "tracked " << traj.size() << " frames -> " << a.out << '\n';
  return 0;
}

struct SynthArgs {
  std::string preset, out;
  std::uint64_t seed = 0;
  PresetOptions options;
};

int run_synth(const SynthArgs& a) {
  const auto preset = parse_preset(a.preset);
  if (!preset) throw ArgumentError("unknown preset '" + a.preset + "'");
  const Sequence seq = gen_scenario(make_preset(*preset, a.seed, a.options));
  SyntheticProvider renderer(a.options.channels);
  save_sequence(a.out, seq, renderer);
  std::cerr << "wrote " << seq.frames.size() << " frames (" << to_string(*preset) << ") -> " << a.out << '\n';
  return 0;
}

struct EvalArgs {
  std::string traj, gt, seq, config, series;
  bool reset_based = false;
  int reinit_delay = kDefaultReinitDelay;
};

int run_eval(const EvalArgs& a) {
  std::vector<std::optional<double>> series;
  if (a.reset_based) {
    ResetReport report;
    if (!a.seq.empty()) {
      LoadedSequence loaded = load_sequence(a.seq);
      if (!a.gt.empty()) loaded.sequence.ground_truth = read_ground_truth(a.gt);
      DistractorAwareTracker tracker(loaded.provider, config_or_default(a.config));
      report = eval_reset_based(loaded.sequence, tracker, a.reinit_delay);
    } else {
      if (a.traj.empty() || a.gt.empty()) throw ArgumentError("reset-based evaluation needs --seq or --traj and --gt");
      report = eval_reset_offline(read_trajectory(a.traj), read_ground_truth(a.gt), a.reinit_delay);
    }
    write_report_csv(std::cout, report);
    series = report.iou_series;
  } else {
    if (a.traj.empty() || a.gt.empty()) throw ArgumentError("evaluation needs --traj and --gt");
    const EvalReport report = eval_success_precision(read_trajectory(a.traj), read_ground_truth(a.gt));
    write_report_csv(std::cout, report);
    series = report.iou_series;
  }
  if (!a.series.empty()) {
    std::ostringstream out;
    write_iou_series_csv(out, series);
    write_file(a.series, out.str());
  }
  return 0;
}

struct SampleArgs {
  std::string corpus, out, mix = "2:1:1";
  std::uint64_t seed = 0;
  int count = 0;
};

int run_sample_pairs(const SampleArgs& a) {
  SamplerConfig cfg;
  const auto parts = split(a.mix, ':');
  if (parts.size() != 3) throw ArgumentError("--mix expects positive:same:different, e.g. 2:1:1");
  int* weights[] = {&cfg.positive_weight, &cfg.negative_same_weight, &cfg.negative_different_weight};
  for (int i = 0; i < 3; ++i) {
    const auto w = parse_int(parts[i]);
    if (!w) throw ArgumentError("bad --mix weight '" + std::string(parts[i]) + "'");
    *weights[i] = static_cast<int>(*w);
  }
  const Corpus corpus = load_corpus(a.corpus);
  const auto pairs = sample_pairs(corpus, a.seed, a.count, cfg);
  const std::size_t n = emit_manifest(pairs, a.out);
  std::cerr << "wrote " << n << " pairs -> " << a.out << '\n';
  return 0;
}

struct BenchArgs {
  std::vector<int> n{1, 4, 16, 64};
  int repetitions = 31;
  int inner = 50;
  std::string out;
};

int run_bench(const BenchArgs& a) {
  BenchConfig cfg;
  cfg.n_values = a.n;
  cfg.repetitions = a.repetitions;
  cfg.inner_iterations = a.inner;
  const auto rows = bench_rerank(cfg);
  std::ostringstream csv;
  write_bench_csv(csv, rows);
  if (a.out.empty()) {
    std::cout << csv.str();
  } else {
    write_file(a.out, csv.str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distractor-aware Siamese tracking toolkit"};
  app.require_subcommand(1);

  TrackArgs track;
  auto* track_cmd = app.add_subcommand("track", "Track a sequence directory and write a trajectory CSV");
  track_cmd->add_option("--seq", track.seq, "Sequence directory (see synth)")->required();
  track_cmd->add_option("--config", track.config, "key = value tracker configuration");
  track_cmd->add_option("--out", track.out, "Trajectory CSV to write")->required();

  SynthArgs synth;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic sequence directory");
  synth_cmd->add_option("--preset", synth.preset, "crossing, outview or clutter")
      ->required()
      ->check(CLI::IsMember({"crossing", "outview", "clutter"}));
  synth_cmd->add_option("--seed", synth.seed, "Scenario seed")->required();
  synth_cmd->add_option("--out", synth.out, "Output directory")->required();
  synth_cmd->add_option("--frames", synth.options.frame_count, "Frame count")->capture_default_str();
  synth_cmd->add_option("--noise", synth.options.noise_sigma, "Feature noise sigma")->capture_default_str();

  EvalArgs eval;
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a trajectory against ground truth (metric,value CSV on stdout)");
  eval_cmd->add_option("--traj", eval.traj, "Trajectory CSV");
  eval_cmd->add_option("--gt", eval.gt, "Ground-truth CSV");
  eval_cmd->add_flag("--reset-based", eval.reset_based, "Reset-based accuracy and failure count");
  eval_cmd->add_option("--seq", eval.seq, "With --reset-based: re-run the tracker on this sequence directory");
  eval_cmd->add_option("--config", eval.config, "Tracker configuration for --seq");
  eval_cmd->add_option("--reinit-delay", eval.reinit_delay, "Frames skipped after a failure")->capture_default_str();
  eval_cmd->add_option("--series", eval.series, "Write the per-frame IoU series CSV here");

  SampleArgs sample;
  auto* sample_cmd = app.add_subcommand("sample-pairs", "Sample training pairs from a corpus manifest");
  sample_cmd->add_option("--corpus", sample.corpus, "Corpus manifest")->required();
  sample_cmd->add_option("--seed", sample.seed, "Sampling seed")->required();
  sample_cmd->add_option("--count", sample.count, "Number of pairs")->required()->check(CLI::NonNegativeNumber);
  sample_cmd->add_option("--out", sample.out, "Pair manifest to write")->required();
  sample_cmd->add_option("--mix", sample.mix, "positive:same:different draw weights")->capture_default_str();

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Time direct and factored re-ranking");
  bench_cmd->add_option("--n", bench.n, "Distractor counts")->delimiter(',')->capture_default_str();
  bench_cmd->add_option("--reps", bench.repetitions, "Timed repetitions per n")->capture_default_str();
  bench_cmd->add_option("--inner", bench.inner, "Scoring passes per repetition")->capture_default_str();
  bench_cmd->add_option("--out", bench.out, "CSV file (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*track_cmd) return run_track(track);
    if (*synth_cmd) return run_synth(synth);
    if (*eval_cmd) return run_eval(eval);
    if (*sample_cmd) return run_sample_pairs(sample);
    if (*bench_cmd) return run_bench(bench);
  } catch (const datrack::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
