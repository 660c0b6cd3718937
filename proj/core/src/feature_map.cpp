#include "datrack/feature_map.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "datrack/errors.hpp"

namespace datrack {

namespace {

void check_dims(int width, int height, int channels) {
  if (width < 1 || height < 1 || channels < 1) {
    throw DimensionError("feature map dimensions must be positive, got " + std::to_string(width) +
                         "x" + std::to_string(height) + "x" + std::to_string(channels));
  }
}

}  // namespace

FeatureMap::FeatureMap(int width, int height, int channels)
    : width_(width), height_(height), channels_(channels) {
  check_dims(width, height, channels);
  data_.assign(static_cast<std::size_t>(width) * height * channels, 0.0);
}

FeatureMap::FeatureMap(int width, int height, int channels, std::vector<double> data)
    : width_(width), height_(height), channels_(channels), data_(std::move(data)) {
  check_dims(width, height, channels);
  if (data_.size() != static_cast<std::size_t>(width) * height * channels) {
    throw DimensionError("feature map data length " + std::to_string(data_.size()) +
                         " does not match " + std::to_string(width) + "x" +
                         std::to_string(height) + "x" + std::to_string(channels));
  }
  if (!all_finite()) throw ArgumentError("feature map contains non-finite values");
}

bool FeatureMap::all_finite() const noexcept {
  for (double v : data_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

ResponseMap::ResponseMap(int width, int height, double fill) : width_(width), height_(height) {
  if (width < 1 || height < 1) throw DimensionError("response map dimensions must be positive");
  values_.assign(static_cast<std::size_t>(width) * height, fill);
}

ResponseMap::ResponseMap(int width, int height, std::vector<double> values)
    : width_(width), height_(height), values_(std::move(values)) {
  if (width < 1 || height < 1) throw DimensionError("response map dimensions must be positive");
  if (values_.size() != static_cast<std::size_t>(width) * height) {
    throw DimensionError("response map value count does not match its dimensions");
  }
}

}  // namespace datrack
