#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "datrack/tracker.hpp"

namespace datrack {

/// Flat `key = value` text, one pair per line; '#' starts a comment. Keys not
/// present keep their defaults; unknown keys are rejected.
///
/// Keys: alpha_hat, alpha, distractor_threshold, eta, bias, enter_threshold,
/// leave_threshold, short_size, failure_size, step, max_size, window_weight,
/// nms_iou, top_k, pre_nms_top_n, anchor_base, anchor_ratios, anchor_scales,
/// calibration_gain, calibration_midpoint, long_term, distractors.
/// `step` and `max_size` accept `auto`; lists are comma separated; switches
/// accept true/false/1/0.
TrackerConfig parse_config(std::istream& in);
TrackerConfig load_config(const std::filesystem::path& path);

/// Every key with its current value; parse_config(format_config(c)) == c.
std::string format_config(const TrackerConfig& cfg);

}  // namespace datrack
