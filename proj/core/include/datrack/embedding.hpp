#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <variant>
#include <vector>

#include "datrack/feature_map.hpp"
#include "datrack/geometry.hpp"
#include "datrack/image.hpp"

namespace datrack {

/// One object visible in a synthetic frame: a fixed signature vector stamped
/// at the object's center.
struct SceneEntity {
  std::vector<double> signature;
  BBox box;
};

struct SyntheticScene {
  std::vector<SceneEntity> entities;
  double noise_sigma = 0.0;
  std::uint64_t noise_seed = 0;
};

/// Refers to a record of a loaded DAFM feature file by its frame id.
struct PrecomputedRef {
  std::uint32_t frame_id = 0;
};

using FramePayload = std::variant<SyntheticScene, Image, PrecomputedRef>;

struct Frame {
  int id = 0;
  int width = 0;
  int height = 0;
  FramePayload payload;
};

/// Grid arithmetic shared by every provider.
///
/// A grid of N cells placed at `origin` has cell u at pixel origin + u * stride.
/// Grids are centered so that cell N/2 (integer division) sits on the requested
/// center; for the 6-cell exemplar that is cell 3.
struct GridGeometry {
  int stride = 8;
  int exemplar_cells = 6;
  /// Pixel extent the exemplar grid stands for; a region of this size yields a
  /// 1x1 response.
  int exemplar_extent = 127;

  /// Side of the (odd) response grid for a square search region.
  int response_cells(int region_size) const;
  int search_cells(int region_size) const { return response_cells(region_size) + exemplar_cells - 1; }

  Point2 grid_origin(Point2 center, int cells) const {
    const double half = static_cast<double>(cells / 2) * stride;
    return {center.x - half, center.y - half};
  }

  /// Continuous cell index of a pixel position in a grid placed at `origin`.
  Point2 to_cell(Point2 pixel, Point2 origin) const {
    return {(pixel.x - origin.x) / stride, (pixel.y - origin.y) / stride};
  }

  /// Box (in cell units) that crop_and_resize uses to extract an
  /// exemplar-sized embedding centered on `pixel`.
  BBox exemplar_crop_box(Point2 pixel, Point2 origin) const;
};

/// Pluggable embedding function. Implementations produce maps on a regular
/// grid; the base class turns exemplar boxes and search regions into grids.
class EmbeddingProvider {
 public:
  EmbeddingProvider(GridGeometry geometry, int channels);
  virtual ~EmbeddingProvider() = default;

  EmbeddingProvider(const EmbeddingProvider&) = delete;
  EmbeddingProvider& operator=(const EmbeddingProvider&) = delete;

  /// exemplar_cells x exemplar_cells map centered on the box.
  FeatureMap embed_exemplar(const Frame& frame, const BBox& box) const;

  /// Square search region of `region_size` pixels centered on `center`.
  FeatureMap embed_search(const Frame& frame, Point2 center, int region_size) const;

  /// Raw grid sampling: cell (u, v) at pixel origin + (u, v) * stride.
  FeatureMap embed_grid(const Frame& frame, Point2 origin, int cols, int rows) const;

  const GridGeometry& geometry() const noexcept { return geometry_; }
  int channels() const noexcept { return channels_; }
  int exemplar_size() const noexcept { return geometry_.exemplar_cells; }

 protected:
  virtual FeatureMap sample_grid(const Frame& frame, Point2 origin, int cols, int rows) const = 0;
  /// Post-processing applied to exemplar and search maps (not to embed_grid).
  virtual void finalize(FeatureMap& /*map*/) const {}

 private:
  GridGeometry geometry_;
  int channels_;
};

/// Stamps every entity's signature with a Gaussian footprint of
/// `footprint_sigma` cells (sigma 0 degenerates to bilinear splatting), then
/// adds i.i.d. Gaussian noise seeded from the frame and the sampled grid.
/// Cells outside the frame hold 0.
class SyntheticProvider final : public EmbeddingProvider {
 public:
  SyntheticProvider(int channels, GridGeometry geometry = {}, double footprint_sigma = 0.6);

  double footprint_sigma() const noexcept { return footprint_sigma_; }

 protected:
  FeatureMap sample_grid(const Frame& frame, Point2 origin, int cols, int rows) const override;

 private:
  double footprint_sigma_;
};

/// Single-channel provider over grayscale images: each cell is the mean
/// intensity of its stride x stride block, and every map is normalized to
/// zero mean and unit L2 norm. Out-of-frame pixels take the image mean.
class PatchProvider final : public EmbeddingProvider {
 public:
  explicit PatchProvider(GridGeometry geometry = {});

 protected:
  FeatureMap sample_grid(const Frame& frame, Point2 origin, int cols, int rows) const override;
  void finalize(FeatureMap& map) const override;
};

struct FeatureRecord;

/// Serves maps resampled from full-frame feature records (one per frame id).
/// Record cell (u, v) sits at pixel (u + 0.5, v + 0.5) * stride; samples off
/// the record are 0.
class PrecomputedProvider final : public EmbeddingProvider {
 public:
  PrecomputedProvider(std::vector<FeatureRecord> records, GridGeometry geometry = {});

  const FeatureMap& record(std::uint32_t frame_id) const;

 protected:
  FeatureMap sample_grid(const Frame& frame, Point2 origin, int cols, int rows) const override;

 private:
  std::map<std::uint32_t, FeatureMap> records_;
};

/// Pixel origin and cell counts of the full-frame grid used by feature records.
struct FullFrameGrid {
  Point2 origin;
  int cols;
  int rows;
};
FullFrameGrid full_frame_grid(const GridGeometry& geometry, int frame_width, int frame_height);

/// Bilinear sample of all channels at continuous cell index (x, y); cells
/// outside the map contribute 0.
void sample_bilinear(const FeatureMap& map, double x, double y, std::span<double> out);

/// Bilinear resample of `box` (in cell units, cell u spanning [u, u + 1)) to
/// out_w x out_h cells, channels preserved.
FeatureMap crop_and_resize(const FeatureMap& map, const BBox& box, int out_w, int out_h);

}  // namespace datrack
