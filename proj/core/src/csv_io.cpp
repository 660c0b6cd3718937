#include "datrack/csv_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "datrack/errors.hpp"
#include "datrack/text.hpp"

namespace datrack {

namespace {

constexpr const char* kTrajectoryHeader = "frame,present,cx,cy,w,h,score,mode";
constexpr const char* kGroundTruthHeader = "frame,present,cx,cy,w,h";

void write_box_fields(std::ostream& out, const std::optional<BBox>& box) {
  if (box) {
    out << "1," << format_double(box->cx) << ',' << format_double(box->cy) << ',' << format_double(box->w) << ','
        << format_double(box->h);
  } else {
    out << "0,,,,";
  }
}

// Reads rows after checking the header; calls row(fields, line_no) for each.
template <class Row>
void read_rows(std::istream& in, const char* header, std::size_t field_count, Row row) {
  std::string line;
  std::uint64_t line_no = 0;
  bool saw_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    if (!saw_header) {
      if (trim(line) != header) throw FormatError(std::string("expected header '") + header + "'", line_no);
      saw_header = true;
      continue;
    }
    const auto fields = split(line, ',');
    if (fields.size() != field_count) {
      throw FormatError("expected " + std::to_string(field_count) + " fields", line_no);
    }
    row(fields, line_no);
  }
  if (!saw_header) throw FormatError("missing CSV header", 0);
}

std::optional<BBox> parse_box_fields(const std::vector<std::string_view>& f, std::uint64_t line_no) {
  if (f[1] == "0") return std::nullopt;
  if (f[1] != "1") throw FormatError("present must be 0 or 1", line_no);
  BBox b;
  double* out[] = {&b.cx, &b.cy, &b.w, &b.h};
  for (int i = 0; i < 4; ++i) {
    const auto v = parse_double(f[2 + i]);
    if (!v) throw FormatError("bad box value '" + std::string(f[2 + i]) + "'", line_no);
    *out[i] = *v;
  }
  return b;
}

void check_frame(std::string_view field, std::size_t expected, std::uint64_t line_no) {
  const auto n = parse_int(field);
  if (!n || *n != static_cast<long long>(expected)) {
    throw FormatError("frames must be numbered consecutively from 0", line_no);
  }
}

}  // namespace

void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory) {
  out << kTrajectoryHeader << '\n';
  for (std::size_t f = 0; f < trajectory.size(); ++f) {
    out << f << ',';
    write_box_fields(out, trajectory[f].box);
    out << ',' << format_double(trajectory[f].score) << ',' << to_string(trajectory[f].mode) << '\n';
  }
}

Trajectory read_trajectory_csv(std::istream& in) {
  Trajectory out;
  read_rows(in, kTrajectoryHeader, 8, [&](const auto& f, std::uint64_t line_no) {
    check_frame(f[0], out.size(), line_no);
    TrajectoryEntry e;
    e.box = parse_box_fields(f, line_no);
    const auto score = parse_double(f[6]);
    if (!score) throw FormatError("bad score", line_no);
    e.score = *score;
    if (f[7] == to_string(Mode::ShortTerm)) {
      e.mode = Mode::ShortTerm;
    } else if (f[7] == to_string(Mode::Failure)) {
      e.mode = Mode::Failure;
    } else {
      throw FormatError("unknown mode '" + std::string(f[7]) + "'", line_no);
    }
    out.push_back(e);
  });
  return out;
}

void write_ground_truth_csv(std::ostream& out, const GroundTruth& ground_truth) {
  out << kGroundTruthHeader << '\n';
  for (std::size_t f = 0; f < ground_truth.size(); ++f) {
    out << f << ',';
    write_box_fields(out, ground_truth[f]);
    out << '\n';
  }
}

GroundTruth read_ground_truth_csv(std::istream& in) {
  GroundTruth out;
  read_rows(in, kGroundTruthHeader, 6, [&](const auto& f, std::uint64_t line_no) {
    check_frame(f[0], out.size(), line_no);
    out.push_back(parse_box_fields(f, line_no));
  });
  return out;
}

void write_iou_series_csv(std::ostream& out, const std::vector<std::optional<double>>& series) {
  out << "frame,iou\n";
  for (std::size_t f = 0; f < series.size(); ++f) {
    out << f << ',';
    if (series[f]) out << format_double(*series[f]);
    out << '\n';
  }
}

void write_report_csv(std::ostream& out, const EvalReport& r) {
  out << "metric,value\n";
  out << "success_auc," << format_double(r.success_auc) << '\n';
  out << "precision_at_20," << format_double(r.precision_at_20) << '\n';
  out << "overlap_precision," << format_double(r.overlap_precision) << '\n';
  out << "mean_overlap," << format_double(r.mean_overlap) << '\n';
  out << "failures," << r.failures << '\n';
  out << "evaluated_frames," << r.evaluated_frames << '\n';
}

void write_report_csv(std::ostream& out, const ResetReport& r) {
  out << "metric,value\n";
  out << "accuracy," << format_double(r.accuracy) << '\n';
  out << "failures," << r.failures << '\n';
  out << "scored_frames," << r.scored_frames << '\n';
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << contents;
  out.flush();
  if (!out) throw IoError("write failed for " + path.string());
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace datrack
