#include "datrack/feature_records.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>

#include "datrack/errors.hpp"

namespace datrack {

namespace {

constexpr std::array<std::uint8_t, 4> kMagic = {'D', 'A', 'F', 'M'};

template <typename T>
void put_le(std::vector<std::uint8_t>& out, T value) {
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    out.push_back(static_cast<std::uint8_t>(value >> (8 * i)));
  }
}

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  bool at_end() const noexcept { return pos_ == bytes_.size(); }
  std::size_t pos() const noexcept { return pos_; }

  template <typename T>
  T get_le(const char* what) {
    if (bytes_.size() - pos_ < sizeof(T)) {
      throw FormatError(std::string("truncated feature file while reading ") + what, pos_);
    }
    T value = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) {
      value |= static_cast<T>(static_cast<T>(bytes_[pos_ + i]) << (8 * i));
    }
    pos_ += sizeof(T);
    return value;
  }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::uint8_t> encode_feature_records(std::span<const FeatureRecord> records) {
  std::vector<std::uint8_t> out(kMagic.begin(), kMagic.end());
  put_le<std::uint16_t>(out, kFeatureFileVersion);
  constexpr int kMaxDim = std::numeric_limits<std::uint16_t>::max();
  for (const auto& rec : records) {
    const auto& m = rec.map;
    if (m.empty()) throw ArgumentError("cannot encode an empty feature map");
    if (m.width() > kMaxDim || m.height() > kMaxDim || m.channels() > kMaxDim) {
      throw ArgumentError("feature map dimension exceeds the u16 range of the file format");
    }
    put_le<std::uint32_t>(out, rec.frame_id);
    put_le<std::uint16_t>(out, static_cast<std::uint16_t>(m.width()));
    put_le<std::uint16_t>(out, static_cast<std::uint16_t>(m.height()));
    put_le<std::uint16_t>(out, static_cast<std::uint16_t>(m.channels()));
    for (double v : m.data()) put_le<std::uint32_t>(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
  }
  return out;
}

std::vector<FeatureRecord> decode_feature_records(std::span<const std::uint8_t> bytes) {
  Reader in(bytes);
  for (std::size_t i = 0; i < kMagic.size(); ++i) {
    if (in.get_le<std::uint8_t>("magic") != kMagic[i]) throw FormatError("bad magic, expected DAFM", i);
  }
  const auto version_pos = in.pos();
  const auto version = in.get_le<std::uint16_t>("version");
  if (version != kFeatureFileVersion) {
    throw FormatError("unsupported feature file version " + std::to_string(version), version_pos);
  }
  std::vector<FeatureRecord> records;
  while (!in.at_end()) {
    const auto record_pos = in.pos();
    FeatureRecord rec;
    rec.frame_id = in.get_le<std::uint32_t>("frame id");
    const int w = in.get_le<std::uint16_t>("width");
    const int h = in.get_le<std::uint16_t>("height");
    const int c = in.get_le<std::uint16_t>("channels");
    if (w == 0 || h == 0 || c == 0) throw FormatError("zero-sized feature record", record_pos);
    std::vector<double> data(static_cast<std::size_t>(w) * h * c);
    for (auto& v : data) {
      const float f = std::bit_cast<float>(in.get_le<std::uint32_t>("data"));
      if (!std::isfinite(f)) throw FormatError("non-finite value in feature record", in.pos() - 4);
      v = f;
    }
    rec.map = FeatureMap(w, h, c, std::move(data));
    records.push_back(std::move(rec));
  }
  return records;
}

void write_feature_records(const std::filesystem::path& path, std::span<const FeatureRecord> records) {
  const auto bytes = encode_feature_records(records);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("failed writing " + path.string());
}

std::vector<FeatureRecord> read_feature_records(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string() + " for reading");
  const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_feature_records(bytes);
}

}  // namespace datrack
