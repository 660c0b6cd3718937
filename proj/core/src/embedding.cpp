#include "datrack/embedding.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "datrack/errors.hpp"
#include "datrack/feature_records.hpp"
#include "datrack/rng.hpp"

namespace datrack {

int GridGeometry::response_cells(int region_size) const {
  if (region_size <= exemplar_extent) return 1;
  const int half = (region_size - exemplar_extent) / (2 * stride);
  return 2 * half + 1;
}

BBox GridGeometry::exemplar_crop_box(Point2 pixel, Point2 origin) const {
  const Point2 c = to_cell(pixel, origin);
  const double shift = exemplar_cells / 2.0 - static_cast<double>(exemplar_cells / 2);
  return {c.x + shift, c.y + shift, static_cast<double>(exemplar_cells),
          static_cast<double>(exemplar_cells)};
}

EmbeddingProvider::EmbeddingProvider(GridGeometry geometry, int channels)
    : geometry_(geometry), channels_(channels) {
  if (geometry.stride < 1 || geometry.exemplar_cells < 1 || geometry.exemplar_extent < 1) {
    throw ArgumentError("grid geometry values must be positive");
  }
  if (channels < 1) throw ArgumentError("provider channel count must be positive");
}

FeatureMap EmbeddingProvider::embed_exemplar(const Frame& frame, const BBox& box) const {
  if (!box.valid()) throw ArgumentError("exemplar box must have positive finite size");
  if (box.right() <= 0.0 || box.bottom() <= 0.0 || box.left() >= frame.width ||
      box.top() >= frame.height) {
    throw OutOfExtentError("exemplar box lies outside the frame");
  }
  const int n = geometry_.exemplar_cells;
  FeatureMap map = sample_grid(frame, geometry_.grid_origin(box.center(), n), n, n);
  finalize(map);
  return map;
}

FeatureMap EmbeddingProvider::embed_search(const Frame& frame, Point2 center, int region_size) const {
  if (region_size <= 0) throw ArgumentError("search region size must be positive");
  const int n = geometry_.search_cells(region_size);
  FeatureMap map = sample_grid(frame, geometry_.grid_origin(center, n), n, n);
  finalize(map);
  return map;
}

FeatureMap EmbeddingProvider::embed_grid(const Frame& frame, Point2 origin, int cols, int rows) const {
  if (cols < 1 || rows < 1) throw ArgumentError("grid must have at least one cell");
  return sample_grid(frame, origin, cols, rows);
}

// ---------------------------------------------------------------------------

SyntheticProvider::SyntheticProvider(int channels, GridGeometry geometry, double footprint_sigma)
    : EmbeddingProvider(geometry, channels), footprint_sigma_(footprint_sigma) {
  if (!(footprint_sigma >= 0.0)) throw ArgumentError("footprint sigma must be non-negative");
}

FeatureMap SyntheticProvider::sample_grid(const Frame& frame, Point2 origin, int cols, int rows) const {
  const auto* scene = std::get_if<SyntheticScene>(&frame.payload);
  if (scene == nullptr) throw ArgumentError("synthetic provider needs a synthetic scene payload");

  const int c = channels();
  const double stride = geometry().stride;
  FeatureMap map(cols, rows, c);

  auto in_frame = [&](int u, int v) {
    const double px = origin.x + u * stride;
    const double py = origin.y + v * stride;
    return px >= 0.0 && py >= 0.0 && px < frame.width && py < frame.height;
  };
  auto stamp = [&](int u, int v, double weight, const std::vector<double>& sig) {
    if (u < 0 || v < 0 || u >= cols || v >= rows || weight == 0.0 || !in_frame(u, v)) return;
    auto cell = map.cell(u, v);
    for (int k = 0; k < c; ++k) cell[k] += weight * sig[k];
  };

  for (const auto& entity : scene->entities) {
    if (static_cast<int>(entity.signature.size()) != c) {
      throw DimensionError("entity signature length " + std::to_string(entity.signature.size()) +
                           " does not match provider channels " + std::to_string(c));
    }
    const Point2 pos = geometry().to_cell(entity.box.center(), origin);
    if (footprint_sigma_ > 0.0) {
      const int radius = static_cast<int>(std::ceil(3.0 * footprint_sigma_));
      const int u0 = static_cast<int>(std::floor(pos.x));
      const int v0 = static_cast<int>(std::floor(pos.y));
      if (u0 + radius + 1 < 0 || v0 + radius + 1 < 0 || u0 - radius >= cols || v0 - radius >= rows) continue;
      const double inv = 1.0 / (2.0 * footprint_sigma_ * footprint_sigma_);
      for (int v = v0 - radius; v <= v0 + radius + 1; ++v) {
        for (int u = u0 - radius; u <= u0 + radius + 1; ++u) {
          const double dx = u - pos.x;
          const double dy = v - pos.y;
          stamp(u, v, std::exp(-(dx * dx + dy * dy) * inv), entity.signature);
        }
      }
    } else {
      const double fx = std::floor(pos.x);
      const double fy = std::floor(pos.y);
      const int u0 = static_cast<int>(fx);
      const int v0 = static_cast<int>(fy);
      const double ax = pos.x - fx;
      const double ay = pos.y - fy;
      stamp(u0, v0, (1.0 - ax) * (1.0 - ay), entity.signature);
      stamp(u0 + 1, v0, ax * (1.0 - ay), entity.signature);
      stamp(u0, v0 + 1, (1.0 - ax) * ay, entity.signature);
      stamp(u0 + 1, v0 + 1, ax * ay, entity.signature);
    }
  }

  if (scene->noise_sigma > 0.0) {
    Rng rng(derive_seed({scene->noise_seed, static_cast<std::uint64_t>(frame.id),
                         std::bit_cast<std::uint64_t>(origin.x), std::bit_cast<std::uint64_t>(origin.y),
                         static_cast<std::uint64_t>(cols), static_cast<std::uint64_t>(rows)}));
    for (int v = 0; v < rows; ++v) {
      for (int u = 0; u < cols; ++u) {
        if (!in_frame(u, v)) continue;
        for (double& x : map.cell(u, v)) x += scene->noise_sigma * rng.normal();
      }
    }
  }
  return map;
}

// ---------------------------------------------------------------------------

PatchProvider::PatchProvider(GridGeometry geometry) : EmbeddingProvider(geometry, 1) {}

FeatureMap PatchProvider::sample_grid(const Frame& frame, Point2 origin, int cols, int rows) const {
  const auto* image = std::get_if<Image>(&frame.payload);
  if (image == nullptr) throw ArgumentError("patch provider needs an image payload");

  const float fill = static_cast<float>(image->mean());
  const int stride = geometry().stride;
  const double first = -(stride - 1) / 2.0;
  auto intensity = [&](double x, double y) -> double {
    if (image->channels() == 1) return image->sample(x, y, 0, fill);
    return (image->sample(x, y, 0, fill) + image->sample(x, y, 1, fill) + image->sample(x, y, 2, fill)) / 3.0;
  };

  FeatureMap map(cols, rows, 1);
  for (int v = 0; v < rows; ++v) {
    for (int u = 0; u < cols; ++u) {
      const double px = origin.x + static_cast<double>(u) * stride;
      const double py = origin.y + static_cast<double>(v) * stride;
      double sum = 0.0;
      for (int j = 0; j < stride; ++j) {
        for (int i = 0; i < stride; ++i) sum += intensity(px + first + i, py + first + j);
      }
      map.at(u, v, 0) = sum / (static_cast<double>(stride) * stride);
    }
  }
  return map;
}

void PatchProvider::finalize(FeatureMap& map) const {
  auto data = map.data();
  double mean = 0.0;
  for (double v : data) mean += v;
  mean /= static_cast<double>(data.size());
  double norm = 0.0;
  for (double& v : data) {
    v -= mean;
    norm += v * v;
  }
  norm = std::sqrt(norm);
  if (norm > 1e-12) {
    for (double& v : data) v /= norm;
  } else {
    for (double& v : data) v = 0.0;
  }
}

// ---------------------------------------------------------------------------

PrecomputedProvider::PrecomputedProvider(std::vector<FeatureRecord> records, GridGeometry geometry)
    : EmbeddingProvider(geometry, records.empty() ? 1 : records.front().map.channels()) {
  if (records.empty()) throw ArgumentError("precomputed provider needs at least one record");
  for (auto& r : records) {
    if (r.map.channels() != channels()) throw DimensionError("feature records disagree on channel count");
    if (!records_.emplace(r.frame_id, std::move(r.map)).second) {
      throw ArgumentError("duplicate feature record for frame " + std::to_string(r.frame_id));
    }
  }
}

const FeatureMap& PrecomputedProvider::record(std::uint32_t frame_id) const {
  const auto it = records_.find(frame_id);
  if (it == records_.end()) throw ArgumentError("no feature record for frame " + std::to_string(frame_id));
  return it->second;
}

FeatureMap PrecomputedProvider::sample_grid(const Frame& frame, Point2 origin, int cols, int rows) const {
  const auto* ref = std::get_if<PrecomputedRef>(&frame.payload);
  if (ref == nullptr) throw ArgumentError("precomputed provider needs a record reference payload");
  const FeatureMap& source = record(ref->frame_id);
  const double stride = geometry().stride;

  FeatureMap map(cols, rows, channels());
  for (int v = 0; v < rows; ++v) {
    for (int u = 0; u < cols; ++u) {
      const double x = (origin.x + u * stride) / stride - 0.5;
      const double y = (origin.y + v * stride) / stride - 0.5;
      sample_bilinear(source, x, y, map.cell(u, v));
    }
  }
  return map;
}

FullFrameGrid full_frame_grid(const GridGeometry& geometry, int frame_width, int frame_height) {
  const double half = geometry.stride / 2.0;
  return {{half, half}, (frame_width + geometry.stride - 1) / geometry.stride,
          (frame_height + geometry.stride - 1) / geometry.stride};
}

// ---------------------------------------------------------------------------

void sample_bilinear(const FeatureMap& map, double x, double y, std::span<double> out) {
  const double fx = std::floor(x);
  const double fy = std::floor(y);
  const int x0 = static_cast<int>(fx);
  const int y0 = static_cast<int>(fy);
  const double ax = x - fx;
  const double ay = y - fy;
  const int c = map.channels();
  for (int k = 0; k < c; ++k) out[k] = 0.0;

  auto add = [&](int xi, int yi, double w) {
    if (w == 0.0 || xi < 0 || yi < 0 || xi >= map.width() || yi >= map.height()) return;
    const auto cell = map.cell(xi, yi);
    for (int k = 0; k < c; ++k) out[k] += w * cell[k];
  };
  if (ax == 0.0 && ay == 0.0) {
    if (x0 >= 0 && y0 >= 0 && x0 < map.width() && y0 < map.height()) {
      const auto cell = map.cell(x0, y0);
      for (int k = 0; k < c; ++k) out[k] = cell[k];
    }
    return;
  }
  add(x0, y0, (1.0 - ax) * (1.0 - ay));
  add(x0 + 1, y0, ax * (1.0 - ay));
  add(x0, y0 + 1, (1.0 - ax) * ay);
  add(x0 + 1, y0 + 1, ax * ay);
}

FeatureMap crop_and_resize(const FeatureMap& map, const BBox& box, int out_w, int out_h) {
  if (!(box.w > 0.0) || !(box.h > 0.0)) throw ArgumentError("crop box has zero area");
  if (out_w < 1 || out_h < 1) throw ArgumentError("crop output size must be positive");
  if (box.right() <= 0.0 || box.bottom() <= 0.0 || box.left() >= map.width() ||
      box.top() >= map.height()) {
    throw OutOfExtentError("crop box does not overlap the feature map");
  }
  FeatureMap out(out_w, out_h, map.channels());
  const double sx = box.w / out_w;
  const double sy = box.h / out_h;
  const double x0 = box.left();
  const double y0 = box.top();
  for (int j = 0; j < out_h; ++j) {
    const double y = y0 + (j + 0.5) * sy - 0.5;
    for (int i = 0; i < out_w; ++i) {
      const double x = x0 + (i + 0.5) * sx - 0.5;
      sample_bilinear(map, x, y, out.cell(i, j));
    }
  }
  return out;
}

}  // namespace datrack
