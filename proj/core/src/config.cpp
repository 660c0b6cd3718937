#include "datrack/config.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <sstream>

#include "datrack/errors.hpp"
#include "datrack/text.hpp"

namespace datrack {

namespace {

struct Field {
  std::function<void(TrackerConfig&, std::string_view)> set;
  std::function<std::string(const TrackerConfig&)> get;
};

double to_double(std::string_view v) {
  const auto d = parse_double(v);
  if (!d) throw ArgumentError("expected a number, got '" + std::string(v) + "'");
  return *d;
}

int to_int(std::string_view v) {
  const auto n = parse_int(v);
  if (!n) throw ArgumentError("expected an integer, got '" + std::string(v) + "'");
  return static_cast<int>(*n);
}

bool to_bool(std::string_view v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ArgumentError("expected true or false, got '" + std::string(v) + "'");
}

std::vector<double> to_list(std::string_view v) {
  std::vector<double> out;
  for (auto part : split(v, ',')) out.push_back(to_double(part));
  return out;
}

std::string from_list(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += format_double(v[i]);
  }
  return out;
}

std::optional<int> to_optional_int(std::string_view v) {
  if (v == "auto") return std::nullopt;
  return to_int(v);
}

std::string from_optional_int(const std::optional<int>& v) { return v ? std::to_string(*v) : "auto"; }

#define DATRACK_DOUBLE(key, member)                                                         \
  {                                                                                         \
    key, {                                                                                  \
      [](TrackerConfig& c, std::string_view v) { c.member = to_double(v); },                \
          [](const TrackerConfig& c) { return format_double(c.member); }                    \
    }                                                                                       \
  }
#define DATRACK_INT(key, member)                                                            \
  {                                                                                         \
    key, {                                                                                  \
      [](TrackerConfig& c, std::string_view v) { c.member = to_int(v); },                   \
          [](const TrackerConfig& c) { return std::to_string(c.member); }                   \
    }                                                                                       \
  }

// Ordered as format_config writes them.
const std::vector<std::pair<std::string, Field>>& fields() {
  static const std::vector<std::pair<std::string, Field>> table = {
      DATRACK_DOUBLE("alpha_hat", rerank.alpha_hat),
      DATRACK_DOUBLE("alpha", rerank.default_alpha),
      DATRACK_DOUBLE("distractor_threshold", rerank.distractor_threshold),
      DATRACK_DOUBLE("eta", rerank.eta),
      DATRACK_DOUBLE("bias", rerank.bias),
      DATRACK_DOUBLE("enter_threshold", long_term.enter_threshold),
      DATRACK_DOUBLE("leave_threshold", long_term.leave_threshold),
      DATRACK_INT("short_size", long_term.short_size),
      DATRACK_INT("failure_size", long_term.failure_size),
      {"step",
       {[](TrackerConfig& c, std::string_view v) { c.long_term.step = to_optional_int(v); },
        [](const TrackerConfig& c) { return from_optional_int(c.long_term.step); }}},
      {"max_size",
       {[](TrackerConfig& c, std::string_view v) { c.long_term.max_size = to_optional_int(v); },
        [](const TrackerConfig& c) { return from_optional_int(c.long_term.max_size); }}},
      DATRACK_DOUBLE("window_weight", window_weight),
      DATRACK_DOUBLE("nms_iou", nms_iou),
      DATRACK_INT("top_k", top_k),
      DATRACK_INT("pre_nms_top_n", pre_nms_top_n),
      DATRACK_DOUBLE("anchor_base", anchors.base_size),
      {"anchor_ratios",
       {[](TrackerConfig& c, std::string_view v) { c.anchors.ratios = to_list(v); },
        [](const TrackerConfig& c) { return from_list(c.anchors.ratios); }}},
      {"anchor_scales",
       {[](TrackerConfig& c, std::string_view v) { c.anchors.scales = to_list(v); },
        [](const TrackerConfig& c) { return from_list(c.anchors.scales); }}},
      DATRACK_DOUBLE("calibration_gain", calibration.gain),
      DATRACK_DOUBLE("calibration_midpoint", calibration.midpoint),
      {"long_term",
       {[](TrackerConfig& c, std::string_view v) { c.enable_long_term = to_bool(v); },
        [](const TrackerConfig& c) { return std::string(c.enable_long_term ? "true" : "false"); }}},
      {"distractors",
       {[](TrackerConfig& c, std::string_view v) { c.enable_distractors = to_bool(v); },
        [](const TrackerConfig& c) { return std::string(c.enable_distractors ? "true" : "false"); }}},
  };
  return table;
}

#undef DATRACK_DOUBLE
#undef DATRACK_INT

}  // namespace

TrackerConfig parse_config(std::istream& in) {
  TrackerConfig cfg;
  std::string line;
  std::uint64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = line;
    if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) throw FormatError("expected key = value", line_no);
    const auto key = trim(view.substr(0, eq));
    const auto value = trim(view.substr(eq + 1));
    const auto& table = fields();
    const auto it = std::find_if(table.begin(), table.end(), [&](const auto& f) { return f.first == key; });
    if (it == table.end()) throw FormatError("unknown config key '" + std::string(key) + "'", line_no);
    try {
      it->second.set(cfg, value);
    } catch (const ArgumentError& e) {
      throw FormatError(std::string(key) + ": " + e.what(), line_no);
    }
  }
  cfg.validate();
  return cfg;
}

TrackerConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  return parse_config(in);
}

std::string format_config(const TrackerConfig& cfg) {
  std::string out;
  for (const auto& [key, field] : fields()) out += key + " = " + field.get(cfg) + "\n";
  return out;
}

}  // namespace datrack
