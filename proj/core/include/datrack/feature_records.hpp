#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "datrack/feature_map.hpp"

namespace datrack {

/// One full-frame feature map in a DAFM file.
struct FeatureRecord {
  std::uint32_t frame_id = 0;
  FeatureMap map;

  friend bool operator==(const FeatureRecord&, const FeatureRecord&) = default;
};

inline constexpr std::uint16_t kFeatureFileVersion = 1;

/// DAFM layout, little-endian throughout:
///   "DAFM" | version u16 | records...
///   record = frame_id u32 | width u16 | height u16 | channels u16 | f32 data
/// with data row-major and channel-innermost. Values are narrowed to f32.
void write_feature_records(const std::filesystem::path& path, std::span<const FeatureRecord> records);
std::vector<FeatureRecord> read_feature_records(const std::filesystem::path& path);

std::vector<std::uint8_t> encode_feature_records(std::span<const FeatureRecord> records);
std::vector<FeatureRecord> decode_feature_records(std::span<const std::uint8_t> bytes);

}  // namespace datrack
