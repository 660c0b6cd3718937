#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace datrack {

/// Shortest text that parses back to exactly `value`.
std::string format_double(double value);
/// Whole-string parse; nullopt on trailing garbage or overflow.
std::optional<double> parse_double(std::string_view text);
std::optional<long long> parse_int(std::string_view text);

std::vector<std::string_view> split(std::string_view text, char sep);
std::string_view trim(std::string_view text);

}  // namespace datrack
