#include "datrack/sequence_io.hpp"

#include <map>
#include <sstream>

#include "datrack/csv_io.hpp"
#include "datrack/errors.hpp"
#include "datrack/feature_records.hpp"
#include "datrack/text.hpp"

namespace datrack {

void save_sequence(const std::filesystem::path& dir, const Sequence& sequence, const EmbeddingProvider& renderer) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  const GridGeometry& geo = renderer.geometry();

  std::ostringstream meta;
  meta << "width = " << sequence.width << "\nheight = " << sequence.height
       << "\nframe_count = " << sequence.frames.size() << "\nchannels = " << renderer.channels()
       << "\nstride = " << geo.stride << "\nexemplar_cells = " << geo.exemplar_cells
       << "\nexemplar_extent = " << geo.exemplar_extent << '\n';
  write_file(dir / SequenceFiles::kMeta, meta.str());

  std::vector<FeatureRecord> records;
  records.reserve(sequence.frames.size());
  const FullFrameGrid grid = full_frame_grid(geo, sequence.width, sequence.height);
  for (const auto& frame : sequence.frames) {
    records.push_back({static_cast<std::uint32_t>(frame.id), renderer.embed_grid(frame, grid.origin, grid.cols, grid.rows)});
  }
  write_feature_records(dir / SequenceFiles::kFeatures, records);

  std::ostringstream gt;
  write_ground_truth_csv(gt, sequence.ground_truth);
  write_file(dir / SequenceFiles::kGroundTruth, gt.str());
}

LoadedSequence load_sequence(const std::filesystem::path& dir) {
  std::map<std::string, long long, std::less<>> meta;
  {
    std::istringstream in(read_file(dir / SequenceFiles::kMeta));
    std::string line;
    std::uint64_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      const auto view = trim(line);
      if (view.empty() || view.front() == '#') continue;
      const auto eq = view.find('=');
      const auto value = eq == std::string_view::npos ? std::nullopt : parse_int(view.substr(eq + 1));
      if (!value) throw FormatError("bad line in " + (dir / SequenceFiles::kMeta).string(), line_no);
      meta[std::string(trim(view.substr(0, eq)))] = *value;
    }
  }
  auto need = [&](const char* key) -> int {
    const auto it = meta.find(key);
    if (it == meta.end()) throw FormatError(std::string("sequence metadata lacks '") + key + "'", 0);
    return static_cast<int>(it->second);
  };
  GridGeometry geo;
  geo.stride = need("stride");
  geo.exemplar_cells = need("exemplar_cells");
  geo.exemplar_extent = need("exemplar_extent");
  const int width = need("width");
  const int height = need("height");
  const int frame_count = need("frame_count");

  std::istringstream gt_in(read_file(dir / SequenceFiles::kGroundTruth));
  GroundTruth gt = read_ground_truth_csv(gt_in);
  if (static_cast<int>(gt.size()) != frame_count) {
    throw FormatError("ground truth has " + std::to_string(gt.size()) + " frames, metadata says " +
                          std::to_string(frame_count),
                      0);
  }
  auto records = read_feature_records(dir / SequenceFiles::kFeatures);

  LoadedSequence out;
  out.sequence.width = width;
  out.sequence.height = height;
  out.sequence.ground_truth = std::move(gt);
  for (int f = 0; f < frame_count; ++f) {
    out.sequence.frames.push_back(Frame{f, width, height, PrecomputedRef{static_cast<std::uint32_t>(f)}});
  }
  auto provider = std::make_shared<PrecomputedProvider>(std::move(records), geo);
  for (int f = 0; f < frame_count; ++f) (void)provider->record(static_cast<std::uint32_t>(f));
  out.provider = std::move(provider);
  return out;
}

}  // namespace datrack
