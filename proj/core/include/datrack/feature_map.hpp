#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace datrack {

/// Dense width x height x channels block of real values, row-major with the
/// channel index innermost: element (x, y, c) lives at ((y * width) + x) * channels + c.
class FeatureMap {
 public:
  FeatureMap() = default;
  FeatureMap(int width, int height, int channels);
  FeatureMap(int width, int height, int channels, std::vector<double> data);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  int channels() const noexcept { return channels_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  double& at(int x, int y, int c) { return data_[offset(x, y, c)]; }
  double at(int x, int y, int c) const { return data_[offset(x, y, c)]; }

  std::span<double> cell(int x, int y) {
    return {data_.data() + offset(x, y, 0), static_cast<std::size_t>(channels_)};
  }
  std::span<const double> cell(int x, int y) const {
    return {data_.data() + offset(x, y, 0), static_cast<std::size_t>(channels_)};
  }

  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }

  bool same_shape(const FeatureMap& other) const noexcept {
    return width_ == other.width_ && height_ == other.height_ && channels_ == other.channels_;
  }
  bool all_finite() const noexcept;

  friend bool operator==(const FeatureMap&, const FeatureMap&) = default;

 private:
  std::size_t offset(int x, int y, int c) const noexcept {
    return (static_cast<std::size_t>(y) * width_ + x) * channels_ + c;
  }

  int width_ = 0;
  int height_ = 0;
  int channels_ = 0;
  std::vector<double> data_;
};

/// Single-channel score surface produced by correlation or windowing.
class ResponseMap {
 public:
  ResponseMap() = default;
  ResponseMap(int width, int height, double fill = 0.0);
  ResponseMap(int width, int height, std::vector<double> values);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return values_.size(); }

  double& at(int x, int y) { return values_[static_cast<std::size_t>(y) * width_ + x]; }
  double at(int x, int y) const { return values_[static_cast<std::size_t>(y) * width_ + x]; }

  std::span<double> values() noexcept { return values_; }
  std::span<const double> values() const noexcept { return values_; }

  bool same_shape(const ResponseMap& other) const noexcept {
    return width_ == other.width_ && height_ == other.height_;
  }

  friend bool operator==(const ResponseMap&, const ResponseMap&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<double> values_;
};

}  // namespace datrack
