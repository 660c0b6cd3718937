#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include "datrack/metrics.hpp"
#include "datrack/scenario.hpp"

namespace datrack {

/// Header: frame,present,cx,cy,w,h,score,mode. Absent boxes have present=0
/// and empty box fields.
void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory);
Trajectory read_trajectory_csv(std::istream& in);

/// Header: frame,present,cx,cy,w,h.
void write_ground_truth_csv(std::ostream& out, const GroundTruth& ground_truth);
GroundTruth read_ground_truth_csv(std::istream& in);

/// Header: frame,iou. Frames without ground truth leave iou empty.
void write_iou_series_csv(std::ostream& out, const std::vector<std::optional<double>>& series);

/// Header: metric,value.
void write_report_csv(std::ostream& out, const EvalReport& report);
void write_report_csv(std::ostream& out, const ResetReport& report);

void write_file(const std::filesystem::path& path, const std::string& contents);
std::string read_file(const std::filesystem::path& path);

}  // namespace datrack
