#pragma once

#include <cstddef>
#include <vector>

namespace datrack {

/// Interleaved float image; 1 channel (grayscale) or 3 channels (RGB).
class Image {
 public:
  Image() = default;
  Image(int width, int height, int channels, float fill = 0.0f);
  Image(int width, int height, int channels, std::vector<float> data);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  int channels() const noexcept { return channels_; }
  bool empty() const noexcept { return data_.empty(); }

  float& at(int x, int y, int c = 0) { return data_[index(x, y, c)]; }
  float at(int x, int y, int c = 0) const { return data_[index(x, y, c)]; }

  const std::vector<float>& data() const noexcept { return data_; }
  std::vector<float>& data() noexcept { return data_; }

  bool contains(double x, double y) const noexcept {
    return x >= 0.0 && y >= 0.0 && x < width_ && y < height_;
  }

  /// Bilinear sample at pixel coordinates (pixel centers at integers); samples
  /// outside the image return `fill`.
  float sample(double x, double y, int c, float fill) const;

  double mean() const;

  friend bool operator==(const Image&, const Image&) = default;

 private:
  std::size_t index(int x, int y, int c) const noexcept {
    return (static_cast<std::size_t>(y) * width_ + x) * channels_ + c;
  }

  int width_ = 0;
  int height_ = 0;
  int channels_ = 0;
  std::vector<float> data_;
};

}  // namespace datrack
