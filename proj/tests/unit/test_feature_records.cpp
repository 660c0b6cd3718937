#include <gtest/gtest.h>

#include <filesystem>

#include "datrack/errors.hpp"
#include "datrack/feature_records.hpp"
#include "datrack/rng.hpp"

using namespace datrack;

namespace {

FeatureRecord float_record(Rng& rng, std::uint32_t id, int w, int h, int c) {
  std::vector<double> data(static_cast<std::size_t>(w) * h * c);
  // Values exactly representable in f32 survive the round trip bit for bit.
  for (auto& v : data) v = static_cast<float>(rng.uniform(-10, 10));
  return {id, FeatureMap(w, h, c, std::move(data))};
}

}  // namespace

TEST(FeatureRecords, RoundTripInMemoryAndOnDisk) {
  Rng rng(51);
  std::vector<FeatureRecord> recs{float_record(rng, 0, 3, 2, 4), float_record(rng, 17, 1, 1, 1),
                                  float_record(rng, 4000000000u, 5, 7, 2)};
  const auto bytes = encode_feature_records(recs);
  EXPECT_EQ(bytes.size(), 6u + 3 * 10u + 4u * (24 + 1 + 70));
  EXPECT_EQ(decode_feature_records(bytes), recs);

  const auto path = std::filesystem::temp_directory_path() / "datrack_records_test.dafm";
  write_feature_records(path, recs);
  EXPECT_EQ(read_feature_records(path), recs);
  std::filesystem::remove(path);
  EXPECT_TRUE(decode_feature_records(encode_feature_records({})).empty());
}

TEST(FeatureRecords, LayoutIsLittleEndian) {
  const std::vector<FeatureRecord> recs{{0x01020304u, FeatureMap(1, 1, 1, {1.0})}};
  const auto b = encode_feature_records(recs);
  const std::vector<std::uint8_t> expected{'D', 'A', 'F', 'M', 1, 0, 4, 3, 2, 1, 1, 0, 1, 0, 1, 0, 0, 0, 0x80, 0x3f};
  EXPECT_EQ(b, expected);
}

TEST(FeatureRecords, DecodeErrorsCarryOffsets) {
  Rng rng(52);
  const auto good = encode_feature_records(std::vector<FeatureRecord>{float_record(rng, 1, 2, 2, 2)});

  auto bad_magic = good;
  bad_magic[2] = 'X';
  try {
    decode_feature_records(bad_magic);
    FAIL();
  } catch (const FormatError& e) {
    EXPECT_EQ(e.offset(), 2u);
  }

  auto bad_version = good;
  bad_version[4] = 9;
  EXPECT_THROW(decode_feature_records(bad_version), FormatError);

  const std::vector<std::uint8_t> truncated(good.begin(), good.end() - 3);
  try {
    decode_feature_records(truncated);
    FAIL();
  } catch (const FormatError& e) {
    EXPECT_EQ(e.offset(), good.size() - 4);
  }

  auto nan = good;
  nan[16] = 0x00;
  nan[17] = 0x00;
  nan[18] = 0xc0;
  nan[19] = 0x7f;
  EXPECT_THROW(decode_feature_records(nan), FormatError);

  auto zero = good;
  zero[10] = 0;
  EXPECT_THROW(decode_feature_records(zero), FormatError);
}

TEST(FeatureRecords, IoErrors) {
  EXPECT_THROW(read_feature_records("/nonexistent/dir/file.dafm"), IoError);
  EXPECT_THROW(write_feature_records("/nonexistent/dir/file.dafm", {}), IoError);
  EXPECT_THROW(encode_feature_records(std::vector<FeatureRecord>{{0, FeatureMap()}}), ArgumentError);
}
