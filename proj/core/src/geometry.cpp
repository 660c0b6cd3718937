#include "datrack/geometry.hpp"

#include <cmath>

namespace datrack {

bool BBox::valid() const noexcept {
  return std::isfinite(cx) && std::isfinite(cy) && std::isfinite(w) && std::isfinite(h) &&
         w > 0.0 && h > 0.0;
}

double center_distance(const BBox& a, const BBox& b) noexcept {
  return std::hypot(a.cx - b.cx, a.cy - b.cy);
}

}  // namespace datrack
