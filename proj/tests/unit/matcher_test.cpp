#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "fontocr/errors.hpp"
#include "fontocr/matcher.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

namespace fontocr {
namespace {

TEST(Corr2, HandEvaluatedExample) {
  const BinaryImage a(2, 2, {1, 0, 0, 1});
  const BinaryImage b(2, 2, {1, 1, 0, 0});
  ASSERT_TRUE(oracle::corr2(a, b));
  EXPECT_DOUBLE_EQ(*oracle::corr2(a, b), 0.0);
  ASSERT_TRUE(corr2(a, b));
  EXPECT_DOUBLE_EQ(*corr2(a, b), 0.0);
}

TEST(Corr2, SelfAndComplement) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 50; ++i) {
    const auto g = testing::random_binary(rng, 26, 46, 0.1 + 0.8 * (i / 50.0));
    EXPECT_EQ(corr2(g, g), 1.0);
    EXPECT_EQ(corr2(g, g.complement()), -1.0);
  }
}

TEST(Corr2, ConstantInputIsUndefined) {
  std::mt19937_64 rng(1);
  const auto g = testing::random_binary(rng, 26, 46);
  EXPECT_FALSE(corr2(BinaryImage(26, 46), g));
  EXPECT_FALSE(corr2(g, BinaryImage(26, 46, true)));
}

TEST(Corr2, ShapeMismatchThrows) {
  EXPECT_THROW(corr2(BinaryImage(26, 46), BinaryImage(25, 46)), ArgumentError);
}

TEST(Corr2, AgreesWithDoubleLoopOracle) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> density(0.02, 0.98);
  for (int i = 0; i < 300; ++i) {
    const auto a = testing::random_binary(rng, 26, 46, density(rng));
    const auto b = testing::random_binary(rng, 26, 46, density(rng));
    const auto fast = corr2(a, b);
    const auto slow = oracle::corr2(a, b);
    ASSERT_EQ(fast.has_value(), slow.has_value());
    EXPECT_NEAR(*fast, *slow, 1e-12);
    EXPECT_GE(*fast, -1.0 - 1e-12);
    EXPECT_LE(*fast, 1.0 + 1e-12);
    EXPECT_NEAR(*corr2(b, a), *fast, 1e-12);
    EXPECT_NEAR(*corr2(a.complement(), b.complement()), *fast, 1e-12);
  }
}

TEST(Corr2, LargeImagesStayAccurate) {
  std::mt19937_64 rng(8);
  const auto a = testing::random_binary(rng, 700, 600, 0.3);
  const auto b = testing::random_binary(rng, 700, 600, 0.6);
  EXPECT_NEAR(*corr2(a, b), *oracle::corr2(a, b), 1e-12);
  EXPECT_EQ(corr2(a, a), 1.0);
}

TEST(Classify, TemplateMatchesItself) {
  const auto& set = testing::default_templates();
  const auto c = classify_glyph(set.glyph(Font::Arial, 'A').bits(), set, 0.4);
  ASSERT_FALSE(c.rejected());
  EXPECT_EQ(*c.label, 'A');
  EXPECT_EQ(*c.font, Font::Arial);
  EXPECT_EQ(*c.score, 1.0);
}

TEST(Classify, EveryTemplateSelfCorrelatesToOne) {
  const auto& set = testing::default_templates();
  for (std::size_t i = 0; i < set.size(); ++i) {
    const auto c = classify_glyph(set.glyphs()[i].bits(), set);
    EXPECT_EQ(c.template_index, i);
    EXPECT_EQ(c.score, 1.0);
  }
}

TEST(Classify, BlankCropIsRejected) {
  const auto c = classify_glyph(BinaryImage(26, 46), testing::default_templates());
  EXPECT_TRUE(c.rejected());
  EXPECT_FALSE(c.score);
  EXPECT_FALSE(c.font);
}

TEST(Classify, WeakBestScoreIsRejected) {
  const auto& set = testing::default_templates();
  std::mt19937_64 rng(3);
  int checked = 0;
  for (int i = 0; i < 50; ++i) {
    const auto noise = testing::random_binary(rng, 26, 46, 0.5);
    const auto c = classify_glyph(noise, set, 0.4);
    ASSERT_TRUE(c.score);
    if (*c.score < 0.4) {
      EXPECT_TRUE(c.rejected());
      ++checked;
    }
  }
  EXPECT_GT(checked, 0);
}

TEST(Classify, ThresholdIsStrict) {
  const auto& set = testing::default_templates();
  auto crop = set.glyph(Font::TimesNewRoman, 'R').bits();
  for (int c = 0; c < kTemplateCols; c += 3) crop.set(c % kTemplateRows, c, !crop.at(c % kTemplateRows, c));
  const auto best = *classify_glyph(crop, set, -1.0).score;
  ASSERT_LT(best, 1.0);
  EXPECT_FALSE(classify_glyph(crop, set, best).rejected());
  EXPECT_TRUE(classify_glyph(crop, set, std::nextafter(best, 2.0)).rejected());
}

TEST(Classify, ThresholdOutOfRangeThrows) {
  EXPECT_THROW(classify_glyph(BinaryImage(26, 46), testing::default_templates(), 1.5), ArgumentError);
}

TEST(Classify, TiesGoToLowestIndex) {
  std::vector<MatchScore> scores{{0, 0.3}, {1, 0.9}, {2, std::nullopt}, {3, 0.9}};
  EXPECT_EQ(best_match(scores), 1u);
  std::reverse(scores.begin(), scores.end());
  EXPECT_EQ(best_match(scores), 1u);
  EXPECT_FALSE(best_match({{0, std::nullopt}}));
}

TEST(Classify, ChunkingDoesNotChangeResult) {
  const auto& set = testing::default_templates();
  std::mt19937_64 rng(12);
  for (int i = 0; i < 20; ++i) {
    auto crop = set.glyphs()[rng() % set.size()].bits();
    for (int k = 0; k < 80; ++k) {
      const int r = static_cast<int>(rng() % 46);
      const int c = static_cast<int>(rng() % 26);
      crop.set(r, c, !crop.at(r, c));
    }
    const auto serial = classify_glyph(crop, set);
    for (std::size_t chunks : {2u, 3u, 7u, 108u, 500u}) {
      const auto parallel = classify_glyph(crop, set, 0.4, chunks);
      EXPECT_EQ(parallel.template_index, serial.template_index);
      EXPECT_EQ(parallel.score, serial.score);
      EXPECT_EQ(parallel.label, serial.label);
    }
    const auto scores = score_templates(crop, set);
    EXPECT_EQ(best_match(scores), serial.template_index);
  }
}

}  // namespace
}  // namespace fontocr
