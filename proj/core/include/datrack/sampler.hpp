#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "datrack/geometry.hpp"
#include "datrack/image.hpp"

namespace datrack {

enum class ItemKind { VideoFrame, StillImage };

struct Annotation {
  BBox box;
  std::string instance_id;
};

struct CorpusItem {
  std::string id;
  ItemKind kind = ItemKind::StillImage;
  std::string category;
  /// Set for video frames only.
  std::string video_id;
  int frame_no = 0;
  std::vector<Annotation> boxes;
  std::string payload_path;
};

struct Corpus {
  std::vector<CorpusItem> items;

  const CorpusItem* find(std::string_view id) const noexcept;
};

/// Parses the tab-separated corpus manifest, one annotated box per line:
/// item_id, kind (video_frame | still_image), category, video_id, frame_no,
/// instance_id, "cx,cy,w,h", payload_path. Lines of one item are merged;
/// blank lines and lines starting with '#' are skipped.
Corpus parse_corpus(std::istream& in);
Corpus load_corpus(const std::filesystem::path& path);
void write_corpus(std::ostream& out, const Corpus& corpus);

enum class PairLabel { Positive, NegativeSameCategory, NegativeDifferentCategory };

const char* to_string(PairLabel label) noexcept;
std::optional<PairLabel> parse_pair_label(std::string_view text);

/// An annotated box of a corpus item, as it appears in the corpus.
struct BoxRef {
  std::string item_id;
  BBox box;

  friend bool operator==(const BoxRef&, const BoxRef&) = default;
};

struct AugmentOp {
  std::string op;
  double value = 0.0;

  friend bool operator==(const AugmentOp&, const AugmentOp&) = default;
};

struct PairRecord {
  PairLabel label = PairLabel::Positive;
  BoxRef exemplar;
  /// The search side before augmentation; augmentation_log says how to alter it.
  BoxRef search;
  std::vector<AugmentOp> augmentation_log;

  friend bool operator==(const PairRecord&, const PairRecord&) = default;
};

struct MotionBlurConfig {
  std::vector<int> lengths{3, 5, 7, 9};
  /// Angles are drawn uniformly from [0, max_angle).
  double max_angle = 3.14159265358979323846;
  double probability = 0.2;
};

struct AugmentConfig {
  double max_translation = 12.0;
  double resize_low = 0.85;
  double resize_high = 1.15;
  double grayscale_prob = 0.25;
  MotionBlurConfig motion_blur;

  void validate() const;
};

struct AugmentParams {
  double tx = 0.0;
  double ty = 0.0;
  double scale = 1.0;
  bool grayscale = false;
  /// 0 when no blur is applied.
  int blur_length = 0;
  double blur_angle = 0.0;

  /// Ops in application order; grayscale and blur appear only when applied.
  std::vector<AugmentOp> log() const;
  static AugmentParams from_log(std::span<const AugmentOp> log);
};

AugmentParams draw_augmentation(const AugmentConfig& cfg, std::uint64_t seed);

struct AugmentedBox {
  BBox box;
  AugmentParams params;
};

/// Draws parameters and applies the geometric part to `box`: the center moves
/// by (tx, ty) and the size scales about it.
AugmentedBox augment(const BBox& box, const AugmentConfig& cfg, std::uint64_t seed);
BBox apply_augmentation(const BBox& box, const AugmentParams& params);

/// Pixel-level counterpart: resample about `pivot` (scale, then shift),
/// optional luminance grayscale, optional linear motion blur. Samples outside
/// the source take the image mean.
Image apply_augmentation(const Image& image, const AugmentParams& params, Point2 pivot);

/// Box kernel of `length` taps along `angle` (radians), taps spaced one pixel
/// apart and centered on each output pixel.
Image motion_blur(const Image& image, int length, double angle);

PairRecord sample_positive_pair(const Corpus& corpus, std::uint64_t seed, const AugmentConfig& cfg = {});

enum class NegativeMode { SameCategory, DifferentCategory };

PairRecord sample_negative_pair(const Corpus& corpus, NegativeMode mode, std::uint64_t seed,
                                const AugmentConfig& cfg = {});

inline constexpr int kMaxPositiveFrameGap = 100;

struct SamplerConfig {
  /// Relative draw weights of positive : negative same category : negative different category.
  int positive_weight = 2;
  int negative_same_weight = 1;
  int negative_different_weight = 1;
  AugmentConfig augment;

  void validate() const;
};

/// `count` pairs; record i depends only on (corpus, seed, i). Labels whose
/// preconditions the corpus cannot meet are left out of the mix.
std::vector<PairRecord> sample_pairs(const Corpus& corpus, std::uint64_t seed, int count,
                                     const SamplerConfig& cfg = {});

/// Checks the label against instance identity and category; identity is
/// (video_id, instance_id) for video frames and (item_id, instance_id) for stills.
bool validate_pair(const Corpus& corpus, const PairRecord& record, std::string* why = nullptr);

std::string format_pair(const PairRecord& record);
PairRecord parse_pair(std::string_view line);

void write_manifest(std::ostream& out, std::span<const PairRecord> records);
std::vector<PairRecord> read_manifest(std::istream& in);
/// Returns the number of records written.
std::size_t emit_manifest(std::span<const PairRecord> records, const std::filesystem::path& path);
std::vector<PairRecord> load_manifest(const std::filesystem::path& path);

}  // namespace datrack
