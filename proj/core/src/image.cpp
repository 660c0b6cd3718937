#include "datrack/image.hpp"

#include <cmath>

#include "datrack/errors.hpp"

namespace datrack {

Image::Image(int width, int height, int channels, float fill)
    : width_(width), height_(height), channels_(channels) {
  if (width < 1 || height < 1 || (channels != 1 && channels != 3)) {
    throw DimensionError("image must be non-empty with 1 or 3 channels");
  }
  data_.assign(static_cast<std::size_t>(width) * height * channels, fill);
}

Image::Image(int width, int height, int channels, std::vector<float> data)
    : width_(width), height_(height), channels_(channels), data_(std::move(data)) {
  if (width < 1 || height < 1 || (channels != 1 && channels != 3)) {
    throw DimensionError("image must be non-empty with 1 or 3 channels");
  }
  if (data_.size() != static_cast<std::size_t>(width) * height * channels) {
    throw DimensionError("image data length does not match its dimensions");
  }
}

float Image::sample(double x, double y, int c, float fill) const {
  const double fx = std::floor(x);
  const double fy = std::floor(y);
  const int x0 = static_cast<int>(fx);
  const int y0 = static_cast<int>(fy);
  const double ax = x - fx;
  const double ay = y - fy;
  auto px = [&](int xi, int yi) -> double {
    if (xi < 0 || yi < 0 || xi >= width_ || yi >= height_) return fill;
    return at(xi, yi, c);
  };
  const double top = (1.0 - ax) * px(x0, y0) + ax * px(x0 + 1, y0);
  const double bottom = (1.0 - ax) * px(x0, y0 + 1) + ax * px(x0 + 1, y0 + 1);
  return static_cast<float>((1.0 - ay) * top + ay * bottom);
}

double Image::mean() const {
  if (data_.empty()) return 0.0;
  double sum = 0.0;
  for (float v : data_) sum += v;
  return sum / static_cast<double>(data_.size());
}

}  // namespace datrack
