#include "datrack/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "datrack/errors.hpp"
#include "datrack/rng.hpp"
#include "datrack/text.hpp"

namespace datrack {

const CorpusItem* Corpus::find(std::string_view id) const noexcept {
  for (const auto& item : items) {
    if (item.id == id) return &item;
  }
  return nullptr;
}

namespace {

const char* kind_name(ItemKind kind) { return kind == ItemKind::VideoFrame ? "video_frame" : "still_image"; }

std::string format_box(const BBox& b) {
  return format_double(b.cx) + "," + format_double(b.cy) + "," + format_double(b.w) + "," + format_double(b.h);
}

std::optional<BBox> parse_box(std::string_view text) {
  const auto parts = split(text, ',');
  if (parts.size() != 4) return std::nullopt;
  BBox b;
  double* fields[] = {&b.cx, &b.cy, &b.w, &b.h};
  for (int i = 0; i < 4; ++i) {
    const auto v = parse_double(parts[i]);
    if (!v || !std::isfinite(*v)) return std::nullopt;
    *fields[i] = *v;
  }
  return b;
}

}  // namespace

Corpus parse_corpus(std::istream& in) {
  Corpus corpus;
  std::map<std::string, std::size_t, std::less<>> index;
  std::string line;
  std::uint64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty() || line.front() == '#') continue;
    const auto f = split(line, '\t');
    if (f.size() != 8) throw FormatError("corpus line needs 8 tab-separated fields", line_no);
    ItemKind kind;
    if (f[1] == "video_frame") {
      kind = ItemKind::VideoFrame;
    } else if (f[1] == "still_image") {
      kind = ItemKind::StillImage;
    } else {
      throw FormatError("unknown item kind '" + std::string(f[1]) + "'", line_no);
    }
    if (f[0].empty()) throw FormatError("empty item id", line_no);
    if (f[2].empty()) throw FormatError("empty category", line_no);
    if (f[5].empty()) throw FormatError("empty instance id", line_no);
    const auto box = parse_box(f[6]);
    if (!box || !box->valid()) throw FormatError("bad box '" + std::string(f[6]) + "'", line_no);
    int frame_no = 0;
    std::string video_id;
    if (kind == ItemKind::VideoFrame) {
      const auto n = parse_int(f[4]);
      if (f[3].empty() || f[3] == "-" || !n) throw FormatError("video frames need video_id and frame_no", line_no);
      video_id = std::string(f[3]);
      frame_no = static_cast<int>(*n);
    }
    auto it = index.find(f[0]);
    if (it == index.end()) {
      CorpusItem item;
      item.id = std::string(f[0]);
      item.kind = kind;
      item.category = std::string(f[2]);
      item.video_id = video_id;
      item.frame_no = frame_no;
      item.payload_path = std::string(f[7]);
      it = index.emplace(item.id, corpus.items.size()).first;
      corpus.items.push_back(std::move(item));
    }
    CorpusItem& item = corpus.items[it->second];
    if (item.kind != kind || item.category != f[2] || item.video_id != video_id || item.frame_no != frame_no) {
      throw FormatError("item '" + item.id + "' has inconsistent fields across lines", line_no);
    }
    item.boxes.push_back({*box, std::string(f[5])});
  }
  return corpus;
}

Corpus load_corpus(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open corpus manifest " + path.string());
  return parse_corpus(in);
}

void write_corpus(std::ostream& out, const Corpus& corpus) {
  for (const auto& item : corpus.items) {
    const bool video = item.kind == ItemKind::VideoFrame;
    for (const auto& a : item.boxes) {
      out << item.id << '\t' << kind_name(item.kind) << '\t' << item.category << '\t'
          << (video ? item.video_id : "-") << '\t' << (video ? std::to_string(item.frame_no) : "-") << '\t'
          << a.instance_id << '\t' << format_box(a.box) << '\t' << item.payload_path << '\n';
    }
  }
}

const char* to_string(PairLabel label) noexcept {
  switch (label) {
    case PairLabel::Positive: return "positive";
    case PairLabel::NegativeSameCategory: return "negative_same_category";
    case PairLabel::NegativeDifferentCategory: return "negative_different_category";
  }
  return "unknown";
}

std::optional<PairLabel> parse_pair_label(std::string_view text) {
  if (text == "positive") return PairLabel::Positive;
  if (text == "negative_same_category") return PairLabel::NegativeSameCategory;
  if (text == "negative_different_category") return PairLabel::NegativeDifferentCategory;
  return std::nullopt;
}

void AugmentConfig::validate() const {
  if (!(max_translation >= 0.0)) throw ArgumentError("max_translation must be non-negative");
  if (!(resize_low > 0.0 && resize_low <= resize_high)) throw ArgumentError("resize range must satisfy 0 < low <= high");
  if (!(grayscale_prob >= 0.0 && grayscale_prob <= 1.0)) throw ArgumentError("grayscale_prob must lie in [0, 1]");
  if (!(motion_blur.probability >= 0.0 && motion_blur.probability <= 1.0)) {
    throw ArgumentError("motion blur probability must lie in [0, 1]");
  }
  if (motion_blur.probability > 0.0 && motion_blur.lengths.empty()) {
    throw ArgumentError("motion blur needs at least one kernel length");
  }
  for (int len : motion_blur.lengths) {
    if (len < 1) throw ArgumentError("motion blur kernel lengths must be positive");
  }
  if (!(motion_blur.max_angle >= 0.0)) throw ArgumentError("motion blur angle range must be non-negative");
}

std::vector<AugmentOp> AugmentParams::log() const {
  std::vector<AugmentOp> ops{{"tx", tx}, {"ty", ty}, {"scale", scale}};
  if (grayscale) ops.push_back({"grayscale", 1.0});
  if (blur_length > 0) {
    ops.push_back({"blur_length", static_cast<double>(blur_length)});
    ops.push_back({"blur_angle", blur_angle});
  }
  return ops;
}

AugmentParams AugmentParams::from_log(std::span<const AugmentOp> log) {
  AugmentParams p;
  for (const auto& op : log) {
    if (op.op == "tx") {
      p.tx = op.value;
    } else if (op.op == "ty") {
      p.ty = op.value;
    } else if (op.op == "scale") {
      p.scale = op.value;
    } else if (op.op == "grayscale") {
      p.grayscale = op.value != 0.0;
    } else if (op.op == "blur_length") {
      p.blur_length = static_cast<int>(op.value);
    } else if (op.op == "blur_angle") {
      p.blur_angle = op.value;
    } else {
      throw ArgumentError("unknown augmentation op '" + op.op + "'");
    }
  }
  return p;
}

AugmentParams draw_augmentation(const AugmentConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  Rng rng(seed);
  AugmentParams p;
  p.tx = rng.uniform(-cfg.max_translation, cfg.max_translation);
  p.ty = rng.uniform(-cfg.max_translation, cfg.max_translation);
  p.scale = rng.uniform(cfg.resize_low, cfg.resize_high);
  p.grayscale = rng.bernoulli(cfg.grayscale_prob);
  // Drawn unconditionally so the other parameters do not depend on the blur probability.
  const bool blur = rng.bernoulli(cfg.motion_blur.probability);
  const std::size_t pick = cfg.motion_blur.lengths.empty() ? 0 : rng.below(cfg.motion_blur.lengths.size());
  const double angle = rng.uniform() * cfg.motion_blur.max_angle;
  if (blur) {
    p.blur_length = cfg.motion_blur.lengths[pick];
    p.blur_angle = angle;
  }
  return p;
}

BBox apply_augmentation(const BBox& box, const AugmentParams& params) {
  return {box.cx + params.tx, box.cy + params.ty, box.w * params.scale, box.h * params.scale};
}

AugmentedBox augment(const BBox& box, const AugmentConfig& cfg, std::uint64_t seed) {
  const AugmentParams p = draw_augmentation(cfg, seed);
  return {apply_augmentation(box, p), p};
}

Image motion_blur(const Image& image, int length, double angle) {
  if (length < 1) throw ArgumentError("motion blur length must be positive");
  if (image.empty() || length == 1) return image;
  const float fill = static_cast<float>(image.mean());
  const double dx = std::cos(angle);
  const double dy = std::sin(angle);
  const double half = (length - 1) / 2.0;
  Image out(image.width(), image.height(), image.channels());
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      for (int c = 0; c < image.channels(); ++c) {
        double acc = 0.0;
        for (int k = 0; k < length; ++k) {
          const double t = k - half;
          acc += image.sample(x + t * dx, y + t * dy, c, fill);
        }
        out.at(x, y, c) = static_cast<float>(acc / length);
      }
    }
  }
  return out;
}

Image apply_augmentation(const Image& image, const AugmentParams& params, Point2 pivot) {
  if (image.empty()) throw ArgumentError("cannot augment an empty image");
  if (!(params.scale > 0.0)) throw ArgumentError("augmentation scale must be positive");
  const float fill = static_cast<float>(image.mean());
  Image out(image.width(), image.height(), image.channels());
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      const double sx = pivot.x + (x - pivot.x - params.tx) / params.scale;
      const double sy = pivot.y + (y - pivot.y - params.ty) / params.scale;
      for (int c = 0; c < image.channels(); ++c) out.at(x, y, c) = image.sample(sx, sy, c, fill);
    }
  }
  if (params.grayscale && out.channels() == 3) {
    for (int y = 0; y < out.height(); ++y) {
      for (int x = 0; x < out.width(); ++x) {
        const float l = 0.299f * out.at(x, y, 0) + 0.587f * out.at(x, y, 1) + 0.114f * out.at(x, y, 2);
        for (int c = 0; c < 3; ++c) out.at(x, y, c) = l;
      }
    }
  }
  if (params.blur_length > 0) out = motion_blur(out, params.blur_length, params.blur_angle);
  return out;
}

namespace {

struct Occurrence {
  std::size_t item;
  std::size_t box;
};

struct Instance {
  std::string category;
  std::vector<Occurrence> occurrences;
};

std::string instance_key(const CorpusItem& item, const Annotation& a) {
  if (item.kind == ItemKind::VideoFrame) return "v\x1f" + item.video_id + "\x1f" + a.instance_id;
  return "s\x1f" + item.id + "\x1f" + a.instance_id;
}

struct CorpusIndex {
  std::vector<Instance> instances;
  /// Category name -> instance indices, in first-appearance order.
  std::vector<std::pair<std::string, std::vector<std::size_t>>> categories;

  explicit CorpusIndex(const Corpus& corpus) {
    std::map<std::string, std::size_t> by_key;
    std::map<std::string, std::size_t> by_category;
    for (std::size_t i = 0; i < corpus.items.size(); ++i) {
      const auto& item = corpus.items[i];
      for (std::size_t b = 0; b < item.boxes.size(); ++b) {
        const std::string key = instance_key(item, item.boxes[b]);
        auto [it, fresh] = by_key.emplace(key, instances.size());
        if (fresh) {
          instances.push_back({item.category, {}});
          auto [cit, new_cat] = by_category.emplace(item.category, categories.size());
          if (new_cat) categories.push_back({item.category, {}});
          categories[cit->second].second.push_back(it->second);
        }
        instances[it->second].occurrences.push_back({i, b});
      }
    }
  }
};

BoxRef ref_of(const Corpus& corpus, Occurrence o) {
  const auto& item = corpus.items[o.item];
  return {item.id, item.boxes[o.box].box};
}

template <class T>
const T& pick(Rng& rng, const std::vector<T>& v) {
  return v[rng.below(v.size())];
}

PairRecord finish(PairLabel label, BoxRef exemplar, BoxRef search, const AugmentConfig& cfg, std::uint64_t seed) {
  PairRecord r;
  r.label = label;
  r.exemplar = std::move(exemplar);
  r.search = std::move(search);
  r.augmentation_log = draw_augmentation(cfg, derive_seed({seed, 0x617567ULL})).log();
  return r;
}

PairRecord positive(const Corpus& corpus, const CorpusIndex& index, std::uint64_t seed, const AugmentConfig& cfg) {
  if (index.instances.empty()) throw ArgumentError("positive pairs need a corpus with at least one annotation");
  Rng rng(seed);
  const Instance& inst = pick(rng, index.instances);
  const Occurrence a = pick(rng, inst.occurrences);
  Occurrence b = a;
  const auto& item_a = corpus.items[a.item];
  if (item_a.kind == ItemKind::VideoFrame) {
    std::vector<Occurrence> near;
    for (const auto& o : inst.occurrences) {
      if (o.item == a.item && o.box == a.box) continue;
      if (std::abs(corpus.items[o.item].frame_no - item_a.frame_no) < kMaxPositiveFrameGap) near.push_back(o);
    }
    if (!near.empty()) b = pick(rng, near);
  }
  return finish(PairLabel::Positive, ref_of(corpus, a), ref_of(corpus, b), cfg, seed);
}

bool has_same_category_pool(const CorpusIndex& index) {
  return std::any_of(index.categories.begin(), index.categories.end(),
                     [](const auto& c) { return c.second.size() >= 2; });
}

PairRecord negative(const Corpus& corpus, const CorpusIndex& index, NegativeMode mode, std::uint64_t seed,
                    const AugmentConfig& cfg) {
  Rng rng(seed);
  if (mode == NegativeMode::SameCategory) {
    std::vector<std::size_t> eligible;
    for (std::size_t c = 0; c < index.categories.size(); ++c) {
      if (index.categories[c].second.size() >= 2) eligible.push_back(c);
    }
    if (eligible.empty()) {
      throw ArgumentError("same_category negative pairs need a category with at least two instances");
    }
    const auto& members = index.categories[pick(rng, eligible)].second;
    const std::size_t i = rng.below(members.size());
    std::size_t j = rng.below(members.size() - 1);
    if (j >= i) ++j;
    const Occurrence a = pick(rng, index.instances[members[i]].occurrences);
    const Occurrence b = pick(rng, index.instances[members[j]].occurrences);
    return finish(PairLabel::NegativeSameCategory, ref_of(corpus, a), ref_of(corpus, b), cfg, seed);
  }
  if (index.categories.size() < 2) {
    throw ArgumentError("different_category negative pairs need at least two categories");
  }
  const std::size_t i = rng.below(index.categories.size());
  std::size_t j = rng.below(index.categories.size() - 1);
  if (j >= i) ++j;
  const Instance& ia = index.instances[pick(rng, index.categories[i].second)];
  const Instance& ib = index.instances[pick(rng, index.categories[j].second)];
  const Occurrence a = pick(rng, ia.occurrences);
  const Occurrence b = pick(rng, ib.occurrences);
  return finish(PairLabel::NegativeDifferentCategory, ref_of(corpus, a), ref_of(corpus, b), cfg, seed);
}

}  // namespace

PairRecord sample_positive_pair(const Corpus& corpus, std::uint64_t seed, const AugmentConfig& cfg) {
  return positive(corpus, CorpusIndex(corpus), seed, cfg);
}

PairRecord sample_negative_pair(const Corpus& corpus, NegativeMode mode, std::uint64_t seed,
                                const AugmentConfig& cfg) {
  return negative(corpus, CorpusIndex(corpus), mode, seed, cfg);
}

void SamplerConfig::validate() const {
  if (positive_weight < 0 || negative_same_weight < 0 || negative_different_weight < 0) {
    throw ArgumentError("pair mix weights must be non-negative");
  }
  if (positive_weight + negative_same_weight + negative_different_weight == 0) {
    throw ArgumentError("pair mix weights must not all be zero");
  }
  augment.validate();
}

std::vector<PairRecord> sample_pairs(const Corpus& corpus, std::uint64_t seed, int count, const SamplerConfig& cfg) {
  cfg.validate();
  if (count < 0) throw ArgumentError("pair count must be non-negative");
  const CorpusIndex index(corpus);
  if (index.instances.empty()) throw ArgumentError("cannot sample pairs from an empty corpus");
  // Deterministic cycle through the mix so proportions hold exactly per cycle.
  std::vector<PairLabel> cycle;
  cycle.insert(cycle.end(), static_cast<std::size_t>(cfg.positive_weight), PairLabel::Positive);
  if (has_same_category_pool(index)) {
    cycle.insert(cycle.end(), static_cast<std::size_t>(cfg.negative_same_weight), PairLabel::NegativeSameCategory);
  }
  if (index.categories.size() >= 2) {
    cycle.insert(cycle.end(), static_cast<std::size_t>(cfg.negative_different_weight),
                 PairLabel::NegativeDifferentCategory);
  }
  if (cycle.empty()) throw ArgumentError("corpus supports none of the requested pair labels");

  std::vector<PairRecord> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const std::uint64_t s = derive_seed({seed, static_cast<std::uint64_t>(i)});
    switch (cycle[static_cast<std::size_t>(i) % cycle.size()]) {
      case PairLabel::Positive: out.push_back(positive(corpus, index, s, cfg.augment)); break;
      case PairLabel::NegativeSameCategory:
        out.push_back(negative(corpus, index, NegativeMode::SameCategory, s, cfg.augment));
        break;
      case PairLabel::NegativeDifferentCategory:
        out.push_back(negative(corpus, index, NegativeMode::DifferentCategory, s, cfg.augment));
        break;
    }
  }
  return out;
}

bool validate_pair(const Corpus& corpus, const PairRecord& record, std::string* why) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  struct Resolved {
    const CorpusItem* item;
    const Annotation* ann;
  };
  auto resolve = [&](const BoxRef& ref) -> std::optional<Resolved> {
    const CorpusItem* item = corpus.find(ref.item_id);
    if (!item) return std::nullopt;
    for (const auto& a : item->boxes) {
      if (a.box == ref.box) return Resolved{item, &a};
    }
    return std::nullopt;
  };
  const auto ex = resolve(record.exemplar);
  if (!ex) return fail("exemplar reference not found in corpus: " + record.exemplar.item_id);
  const auto se = resolve(record.search);
  if (!se) return fail("search reference not found in corpus: " + record.search.item_id);
  const bool same_instance = instance_key(*ex->item, *ex->ann) == instance_key(*se->item, *se->ann);
  const bool same_category = ex->item->category == se->item->category;
  switch (record.label) {
    case PairLabel::Positive:
      if (!same_instance) return fail("positive pair spans two instances");
      if (ex->item->kind == ItemKind::VideoFrame &&
          std::abs(ex->item->frame_no - se->item->frame_no) >= kMaxPositiveFrameGap) {
        return fail("positive video pair exceeds the frame interval");
      }
      break;
    case PairLabel::NegativeSameCategory:
      if (!same_category) return fail("same-category negative spans two categories");
      if (same_instance) return fail("same-category negative reuses one instance");
      break;
    case PairLabel::NegativeDifferentCategory:
      if (same_category) return fail("different-category negative shares a category");
      break;
  }
  try {
    (void)AugmentParams::from_log(record.augmentation_log);
  } catch (const ArgumentError& e) {
    return fail(e.what());
  }
  return true;
}

std::string format_pair(const PairRecord& r) {
  std::string out = to_string(r.label);
  out += '\t';
  out += r.exemplar.item_id + ":" + format_box(r.exemplar.box);
  out += '\t';
  out += r.search.item_id + ":" + format_box(r.search.box);
  out += '\t';
  for (std::size_t i = 0; i < r.augmentation_log.size(); ++i) {
    if (i) out += ';';
    out += r.augmentation_log[i].op + "=" + format_double(r.augmentation_log[i].value);
  }
  return out;
}

namespace {

BoxRef parse_ref(std::string_view text) {
  const auto colon = text.rfind(':');
  if (colon == std::string_view::npos || colon == 0) throw ArgumentError("box reference needs item:box");
  const auto box = parse_box(text.substr(colon + 1));
  if (!box) throw ArgumentError("bad box in reference '" + std::string(text) + "'");
  return {std::string(text.substr(0, colon)), *box};
}

}  // namespace

PairRecord parse_pair(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  const auto f = split(line, '\t');
  if (f.size() != 4) throw ArgumentError("pair line needs 4 tab-separated fields");
  PairRecord r;
  const auto label = parse_pair_label(f[0]);
  if (!label) throw ArgumentError("unknown pair label '" + std::string(f[0]) + "'");
  r.label = *label;
  r.exemplar = parse_ref(f[1]);
  r.search = parse_ref(f[2]);
  if (!f[3].empty()) {
    for (auto op : split(f[3], ';')) {
      const auto eq = op.find('=');
      if (eq == std::string_view::npos) throw ArgumentError("augmentation op needs op=value");
      const auto v = parse_double(op.substr(eq + 1));
      if (!v) throw ArgumentError("bad augmentation value in '" + std::string(op) + "'");
      r.augmentation_log.push_back({std::string(op.substr(0, eq)), *v});
    }
  }
  return r;
}

void write_manifest(std::ostream& out, std::span<const PairRecord> records) {
  for (const auto& r : records) out << format_pair(r) << '\n';
}

std::vector<PairRecord> read_manifest(std::istream& in) {
  std::vector<PairRecord> out;
  std::string line;
  std::uint64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      out.push_back(parse_pair(line));
    } catch (const ArgumentError& e) {
      throw FormatError(e.what(), line_no);
    }
  }
  return out;
}

std::size_t emit_manifest(std::span<const PairRecord> records, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  write_manifest(out, records);
  out.flush();
  if (!out) throw IoError("write failed for " + path.string());
  return records.size();
}

std::vector<PairRecord> load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open pair manifest " + path.string());
  return read_manifest(in);
}

}  // namespace datrack
