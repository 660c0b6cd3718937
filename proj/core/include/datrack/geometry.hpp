#pragma once

namespace datrack {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

/// Axis-aligned box given by its center and size, in pixels unless noted.
struct BBox {
  double cx = 0.0;
  double cy = 0.0;
  double w = 0.0;
  double h = 0.0;

  double left() const noexcept { return cx - 0.5 * w; }
  double right() const noexcept { return cx + 0.5 * w; }
  double top() const noexcept { return cy - 0.5 * h; }
  double bottom() const noexcept { return cy + 0.5 * h; }
  double area() const noexcept { return w * h; }
  Point2 center() const noexcept { return {cx, cy}; }
  bool valid() const noexcept;

  friend bool operator==(const BBox&, const BBox&) = default;
};

double center_distance(const BBox& a, const BBox& b) noexcept;

}  // namespace datrack
