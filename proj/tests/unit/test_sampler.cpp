#include <gtest/gtest.h>

#include <filesystem>
#include <map>
#include <sstream>

#include "datrack/errors.hpp"
#include "datrack/sampler.hpp"
#include "fixtures.hpp"

using namespace datrack;

TEST(Corpus, WriteThenParseRoundTrips) {
  const Corpus corpus = fixture::small_corpus();
  std::stringstream text;
  write_corpus(text, corpus);
  const Corpus back = parse_corpus(text);
  ASSERT_EQ(back.items.size(), corpus.items.size());
  for (std::size_t i = 0; i < back.items.size(); ++i) {
    const auto& a = corpus.items[i];
    const auto& b = back.items[i];
    EXPECT_EQ(a.id, b.id);
    EXPECT_EQ(a.kind, b.kind);
    EXPECT_EQ(a.category, b.category);
    EXPECT_EQ(a.video_id, b.video_id);
    EXPECT_EQ(a.frame_no, b.frame_no);
    EXPECT_EQ(a.payload_path, b.payload_path);
    ASSERT_EQ(a.boxes.size(), b.boxes.size());
    for (std::size_t k = 0; k < a.boxes.size(); ++k) {
      EXPECT_EQ(a.boxes[k].box, b.boxes[k].box);
      EXPECT_EQ(a.boxes[k].instance_id, b.boxes[k].instance_id);
    }
  }
  EXPECT_NE(back.find("still3"), nullptr);
  EXPECT_EQ(back.find("nope"), nullptr);
}

TEST(Corpus, ParseErrorsReportTheLine) {
  auto line_of = [](const std::string& text) -> std::uint64_t {
    std::istringstream in(text);
    try {
      parse_corpus(in);
    } catch (const FormatError& e) {
      return e.offset();
    }
    return 0;
  };
  const std::string ok = "# comment\nimg1\tstill_image\tdog\t-\t-\t0\t10,10,5,5\tp.jpg\n\n";
  std::istringstream in(ok);
  EXPECT_EQ(parse_corpus(in).items.size(), 1u);
  EXPECT_EQ(line_of(ok + "img2\tstill_image\tdog\t-\t-\t0\t10,10,5\tp.jpg\n"), 4u);
  EXPECT_EQ(line_of(ok + "img2\tmovie\tdog\t-\t-\t0\t10,10,5,5\tp.jpg\n"), 4u);
  EXPECT_EQ(line_of(ok + "img2\tstill_image\tdog\n"), 4u);
  EXPECT_EQ(line_of(ok + "f1\tvideo_frame\tdog\t-\t3\t0\t10,10,5,5\tp.jpg\n"), 4u);
  EXPECT_EQ(line_of(ok + "img1\tstill_image\tcat\t-\t-\t1\t10,10,5,5\tp.jpg\n"), 4u);
  EXPECT_THROW(load_corpus("/nonexistent/corpus.tsv"), IoError);
}

TEST(Augmentation, DrawnParametersStayInRange) {
  const AugmentConfig cfg;
  for (std::uint64_t seed = 0; seed < 2000; ++seed) {
    const auto p = draw_augmentation(cfg, seed);
    EXPECT_GE(p.tx, -12.0);
    EXPECT_LE(p.tx, 12.0);
    EXPECT_GE(p.ty, -12.0);
    EXPECT_LE(p.ty, 12.0);
    EXPECT_GE(p.scale, 0.85);
    EXPECT_LE(p.scale, 1.15);
    if (p.blur_length > 0) {
      EXPECT_TRUE(p.blur_length == 3 || p.blur_length == 5 || p.blur_length == 7 || p.blur_length == 9);
      EXPECT_GE(p.blur_angle, 0.0);
      EXPECT_LT(p.blur_angle, 3.14159265358979323846);
    }
    const auto back = AugmentParams::from_log(p.log());
    EXPECT_EQ(back.tx, p.tx);
    EXPECT_EQ(back.scale, p.scale);
    EXPECT_EQ(back.grayscale, p.grayscale);
    EXPECT_EQ(back.blur_length, p.blur_length);
    EXPECT_EQ(back.blur_angle, p.blur_angle);
  }
  const std::vector<AugmentOp> bad{{"rotate", 1.0}};
  EXPECT_THROW(AugmentParams::from_log(bad), ArgumentError);
  AugmentConfig invalid;
  invalid.resize_low = 1.2;
  EXPECT_THROW(draw_augmentation(invalid, 0), ArgumentError);
}

TEST(Augmentation, GeometryOfTheBox) {
  AugmentParams p;
  p.tx = 3;
  p.ty = -2;
  p.scale = 1.1;
  EXPECT_EQ(apply_augmentation(BBox{10, 20, 30, 40}, p), (BBox{13, 18, 33, 44}));
  const auto a = augment({10, 20, 30, 40}, {}, 5);
  EXPECT_EQ(a.box, apply_augmentation(BBox{10, 20, 30, 40}, a.params));
}

TEST(Augmentation, ImageOps) {
  Rng rng(61);
  Image img(16, 12, 3);
  for (auto& v : img.data()) v = static_cast<float>(rng.uniform());
  EXPECT_EQ(apply_augmentation(img, AugmentParams{}, {8, 6}), img);

  AugmentParams shift;
  shift.tx = 2;
  const Image moved = apply_augmentation(img, shift, {8, 6});
  EXPECT_EQ(moved.at(5, 4, 1), img.at(3, 4, 1));

  AugmentParams gray;
  gray.grayscale = true;
  const Image g = apply_augmentation(img, gray, {8, 6});
  EXPECT_EQ(g.at(7, 7, 0), g.at(7, 7, 2));
  EXPECT_NEAR(g.at(7, 7, 0), 0.299 * img.at(7, 7, 0) + 0.587 * img.at(7, 7, 1) + 0.114 * img.at(7, 7, 2), 1e-6);

  EXPECT_EQ(motion_blur(img, 1, 0.3), img);
  const Image flat(10, 10, 1, 0.25f);
  const Image blurred = motion_blur(flat, 7, 1.0);
  for (float v : blurred.data()) EXPECT_NEAR(v, 0.25f, 1e-6);
  // Horizontal 3-tap blur is the mean of the row neighbors away from borders.
  const Image h = motion_blur(img, 3, 0.0);
  EXPECT_NEAR(h.at(5, 5, 0), (img.at(4, 5, 0) + img.at(5, 5, 0) + img.at(6, 5, 0)) / 3.0, 1e-6);
  EXPECT_THROW(motion_blur(img, 0, 0.0), ArgumentError);
}

TEST(Pairs, MixIsExactAndEveryPairValidates) {
  const Corpus corpus = fixture::small_corpus();
  const auto pairs = sample_pairs(corpus, 9, 400);
  std::map<PairLabel, int> counts;
  for (const auto& r : pairs) {
    ++counts[r.label];
    std::string why;
    EXPECT_TRUE(validate_pair(corpus, r, &why)) << why << "\n" << format_pair(r);
  }
  EXPECT_EQ(counts[PairLabel::Positive], 200);
  EXPECT_EQ(counts[PairLabel::NegativeSameCategory], 100);
  EXPECT_EQ(counts[PairLabel::NegativeDifferentCategory], 100);
}

TEST(Pairs, RecordDependsOnlyOnSeedAndIndex) {
  const Corpus corpus = fixture::small_corpus();
  const auto a = sample_pairs(corpus, 3, 50);
  const auto b = sample_pairs(corpus, 3, 20);
  for (std::size_t i = 0; i < b.size(); ++i) EXPECT_EQ(a[i], b[i]);
  const auto c = sample_pairs(corpus, 4, 50);
  int same = 0;
  for (std::size_t i = 0; i < a.size(); ++i) same += a[i] == c[i];
  EXPECT_LT(same, 5);
}

TEST(Pairs, PositiveVideoPairsStayWithinTheFrameGap) {
  const Corpus corpus = fixture::small_corpus();
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const auto r = sample_positive_pair(corpus, seed);
    const auto* a = corpus.find(r.exemplar.item_id);
    const auto* b = corpus.find(r.search.item_id);
    ASSERT_NE(a, nullptr);
    ASSERT_NE(b, nullptr);
    if (a->kind == ItemKind::VideoFrame) {
      EXPECT_EQ(a->video_id, b->video_id);
      EXPECT_LT(std::abs(a->frame_no - b->frame_no), kMaxPositiveFrameGap);
    } else {
      EXPECT_EQ(r.exemplar, r.search);
    }
  }
}

TEST(Pairs, ValidatorRejectsMislabeledPairs) {
  const Corpus corpus = fixture::small_corpus();
  auto r = sample_negative_pair(corpus, NegativeMode::DifferentCategory, 1);
  ASSERT_TRUE(validate_pair(corpus, r));
  r.label = PairLabel::Positive;
  std::string why;
  EXPECT_FALSE(validate_pair(corpus, r, &why));
  EXPECT_FALSE(why.empty());
  r.label = PairLabel::NegativeSameCategory;
  EXPECT_FALSE(validate_pair(corpus, r));

  auto p = sample_positive_pair(corpus, 2);
  p.label = PairLabel::NegativeSameCategory;
  EXPECT_FALSE(validate_pair(corpus, p));
  p.label = PairLabel::Positive;
  p.search.box.cx += 0.5;
  EXPECT_FALSE(validate_pair(corpus, p));

  // Same instance id in two different stills is two instances.
  Corpus stills;
  stills.items.push_back({"s1", ItemKind::StillImage, "dog", "", 0, {{{5, 5, 2, 2}, "0"}}, "a"});
  stills.items.push_back({"s2", ItemKind::StillImage, "dog", "", 0, {{{5, 5, 2, 2}, "0"}}, "b"});
  const PairRecord cross{PairLabel::Positive, {"s1", {5, 5, 2, 2}}, {"s2", {5, 5, 2, 2}}, {}};
  EXPECT_FALSE(validate_pair(stills, cross));
  const PairRecord neg{PairLabel::NegativeSameCategory, {"s1", {5, 5, 2, 2}}, {"s2", {5, 5, 2, 2}}, {}};
  EXPECT_TRUE(validate_pair(stills, neg));
  EXPECT_THROW(sample_negative_pair(stills, NegativeMode::DifferentCategory, 0), ArgumentError);
}

TEST(Pairs, SamplerErrors) {
  EXPECT_THROW(sample_pairs({}, 0, 5), ArgumentError);
  SamplerConfig cfg;
  cfg.positive_weight = cfg.negative_same_weight = cfg.negative_different_weight = 0;
  EXPECT_THROW(sample_pairs(fixture::small_corpus(), 0, 5, cfg), ArgumentError);
  EXPECT_THROW(sample_pairs(fixture::small_corpus(), 0, -1), ArgumentError);
  Corpus single;
  single.items.push_back({"s1", ItemKind::StillImage, "dog", "", 0, {{{5, 5, 2, 2}, "0"}}, "a"});
  const auto only_positive = sample_pairs(single, 0, 6);
  for (const auto& r : only_positive) EXPECT_EQ(r.label, PairLabel::Positive);
  EXPECT_THROW(sample_negative_pair(single, NegativeMode::SameCategory, 0), ArgumentError);
}

TEST(Manifest, RoundTripsExactly) {
  const Corpus corpus = fixture::small_corpus();
  const auto pairs = sample_pairs(corpus, 11, 200);
  std::stringstream text;
  write_manifest(text, pairs);
  EXPECT_EQ(read_manifest(text), pairs);

  const auto path = std::filesystem::temp_directory_path() / "datrack_manifest_test.tsv";
  EXPECT_EQ(emit_manifest(pairs, path), 200u);
  EXPECT_EQ(load_manifest(path), pairs);
  std::filesystem::remove(path);

  const PairRecord odd{PairLabel::Positive, {"a:b", {1, 2, 3, 4}}, {"c", {0.1, 0.2, 0.3, 0.4}}, {}};
  EXPECT_EQ(parse_pair(format_pair(odd)), odd);
  std::istringstream bad("positive\tx:1,2,3,4\n");
  EXPECT_THROW(read_manifest(bad), FormatError);
  EXPECT_THROW(parse_pair("maybe\ta:1,2,3,4\tb:1,2,3,4\t"), ArgumentError);
}
