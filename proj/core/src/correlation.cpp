#include "datrack/correlation.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "datrack/errors.hpp"

namespace datrack {

namespace {

void check_xcorr_shapes(const FeatureMap& templ, const FeatureMap& search) {
  if (templ.empty() || search.empty()) throw DimensionError("xcorr on an empty feature map");
  if (templ.channels() != search.channels()) {
    throw DimensionError("xcorr channel mismatch: template has " +
                         std::to_string(templ.channels()) + ", search has " +
                         std::to_string(search.channels()));
  }
  if (templ.width() > search.width() || templ.height() > search.height()) {
    throw DimensionError("xcorr template larger than search map");
  }
}

std::vector<double> hann(int n) {
  std::vector<double> w(static_cast<std::size_t>(n), 1.0);
  if (n == 1) return w;
  for (int i = 0; i < n; ++i) {
    // Evaluate on the nearer half so the window is exactly symmetric.
    const int j = std::min(i, n - 1 - i);
    w[i] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * j / (n - 1)));
  }
  return w;
}

}  // namespace

ResponseMap xcorr(const FeatureMap& templ, const FeatureMap& search, double bias) {
  check_xcorr_shapes(templ, search);
  const int out_w = search.width() - templ.width() + 1;
  const int out_h = search.height() - templ.height() + 1;
  const std::size_t row_len = static_cast<std::size_t>(templ.width()) * templ.channels();
  const std::size_t search_stride = static_cast<std::size_t>(search.width()) * search.channels();
  const double* t = templ.data().data();
  const double* s = search.data().data();

  ResponseMap out(out_w, out_h);
  for (int oy = 0; oy < out_h; ++oy) {
    for (int ox = 0; ox < out_w; ++ox) {
      long double acc = 0.0L;
      for (int ty = 0; ty < templ.height(); ++ty) {
        const double* trow = t + ty * row_len;
        const double* srow = s + (oy + ty) * search_stride + static_cast<std::size_t>(ox) * search.channels();
        for (std::size_t i = 0; i < row_len; ++i) {
          acc += static_cast<long double>(trow[i]) * srow[i];
        }
      }
      out.at(ox, oy) = static_cast<double>(acc + bias);
    }
  }
  return out;
}

ResponseMap xcorr_blocked(const FeatureMap& templ, const FeatureMap& search, double bias) {
  check_xcorr_shapes(templ, search);
  constexpr int kBlock = 4;
  const int out_w = search.width() - templ.width() + 1;
  const int out_h = search.height() - templ.height() + 1;
  const int channels = search.channels();
  const std::size_t row_len = static_cast<std::size_t>(templ.width()) * channels;
  const std::size_t search_stride = static_cast<std::size_t>(search.width()) * channels;
  const double* t = templ.data().data();
  const double* s = search.data().data();

  ResponseMap out(out_w, out_h);
  for (int oy = 0; oy < out_h; ++oy) {
    int ox = 0;
    for (; ox + kBlock <= out_w; ox += kBlock) {
      long double acc[kBlock] = {0.0L, 0.0L, 0.0L, 0.0L};
      for (int ty = 0; ty < templ.height(); ++ty) {
        const double* trow = t + ty * row_len;
        const double* s0 = s + (oy + ty) * search_stride + static_cast<std::size_t>(ox) * channels;
        for (std::size_t i = 0; i < row_len; ++i) {
          const long double tv = trow[i];
          acc[0] += tv * s0[i];
          acc[1] += tv * s0[i + channels];
          acc[2] += tv * s0[i + 2 * channels];
          acc[3] += tv * s0[i + 3 * channels];
        }
      }
      for (int b = 0; b < kBlock; ++b) out.at(ox + b, oy) = static_cast<double>(acc[b] + bias);
    }
    for (; ox < out_w; ++ox) {
      long double acc = 0.0L;
      for (int ty = 0; ty < templ.height(); ++ty) {
        const double* trow = t + ty * row_len;
        const double* srow = s + (oy + ty) * search_stride + static_cast<std::size_t>(ox) * channels;
        for (std::size_t i = 0; i < row_len; ++i) acc += static_cast<long double>(trow[i]) * srow[i];
      }
      out.at(ox, oy) = static_cast<double>(acc + bias);
    }
  }
  return out;
}

double correlate_aligned(const FeatureMap& a, const FeatureMap& b, double bias) {
  if (!a.same_shape(b)) throw DimensionError("correlate_aligned requires identical shapes");
  const auto x = a.data();
  const auto y = b.data();
  long double acc = 0.0L;
  for (std::size_t i = 0; i < x.size(); ++i) acc += static_cast<long double>(x[i]) * y[i];
  return static_cast<double>(acc + bias);
}

ResponseMap cosine_window(int width, int height) {
  if (width < 1 || height < 1) {
    throw DimensionError("cosine window dimensions must be positive");
  }
  const auto wx = hann(width);
  const auto wy = hann(height);
  ResponseMap out(width, height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) out.at(x, y) = wy[y] * wx[x];
  }
  return out;
}

ResponseMap apply_window(const ResponseMap& response, const ResponseMap& window, double weight) {
  if (!response.same_shape(window)) throw DimensionError("window and response shapes differ");
  if (!(weight >= 0.0 && weight <= 1.0)) throw ArgumentError("window weight must lie in [0, 1]");
  ResponseMap out(response.width(), response.height());
  const auto r = response.values();
  const auto w = window.values();
  auto o = out.values();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = (1.0 - weight) * r[i] + weight * w[i];
  return out;
}

FeatureMap linear_combine(std::span<const WeightedMap> terms) {
  if (terms.empty()) throw ArgumentError("linear_combine needs at least one map");
  const FeatureMap& first = *terms.front().map;
  for (const auto& term : terms) {
    if (!term.map->same_shape(first)) throw DimensionError("linear_combine shape mismatch");
  }
  FeatureMap out(first.width(), first.height(), first.channels());
  auto o = out.data();
  for (const auto& term : terms) {
    const auto m = term.map->data();
    const double w = term.weight;
    for (std::size_t i = 0; i < o.size(); ++i) o[i] += w * m[i];
  }
  return out;
}

FeatureMap linear_combine(std::initializer_list<WeightedMap> terms) {
  return linear_combine(std::span<const WeightedMap>(terms.begin(), terms.size()));
}

}  // namespace datrack
