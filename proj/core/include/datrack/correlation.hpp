#pragma once

#include <initializer_list>
#include <span>

#include "datrack/feature_map.hpp"

namespace datrack {

struct CorrConfig {
  double bias = 0.0;
  /// Mixing weight of the cosine window, in [0, 1].
  double window_weight = 0.4;
};

/// Valid-mode cross correlation of `templ` over `search` plus a constant bias.
///
/// out(x, y) = sum_{u,v,c} templ(u, v, c) * search(x + u, y + v, c) + bias, with
/// output size (W - w + 1) x (H - h + 1). Each cell is accumulated in long
/// double and rounded once when stored.
ResponseMap xcorr(const FeatureMap& templ, const FeatureMap& search, double bias);

/// Same contract and bit-identical results as xcorr(); computes four output
/// columns per template pass so each template row is loaded once per block.
ResponseMap xcorr_blocked(const FeatureMap& templ, const FeatureMap& search, double bias);

/// Dot product of two maps of identical shape plus bias (the 1x1 case of xcorr).
double correlate_aligned(const FeatureMap& a, const FeatureMap& b, double bias);

/// Outer product of two 1-D Hann windows. Values lie in [0, 1], the window is
/// exactly flip-symmetric, borders are 0 and the center of an odd window is 1.
ResponseMap cosine_window(int width, int height);

/// (1 - weight) * response + weight * window, elementwise.
ResponseMap apply_window(const ResponseMap& response, const ResponseMap& window, double weight);

struct WeightedMap {
  const FeatureMap* map;
  double weight;
};

/// Elementwise weighted sum of maps sharing one shape.
FeatureMap linear_combine(std::span<const WeightedMap> terms);
FeatureMap linear_combine(std::initializer_list<WeightedMap> terms);

}  // namespace datrack
