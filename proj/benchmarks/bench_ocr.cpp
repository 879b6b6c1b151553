#include <benchmark/benchmark.h>

#include <random>

#include "fontocr/evalharness.hpp"
#include "fontocr/matcher.hpp"
#include "fontocr/recognizer.hpp"
#include "fontocr/templatestore.hpp"

namespace {

using namespace fontocr;

const TemplateSet& templates() {
  static const TemplateSet set = build_template_set(FONTOCR_GLYPH_DIR, std::filesystem::path(FONTOCR_GLYPH_DIR) / "manifest.tsv");
  return set;
}

BinaryImage random_crop(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution ink(0.4);
  BinaryImage img(kTemplateCols, kTemplateRows);
  for (int r = 0; r < kTemplateRows; ++r) {
    for (int c = 0; c < kTemplateCols; ++c) img.set(r, c, ink(rng));
  }
  return img;
}

void BM_Corr2Packed(benchmark::State& state) {
  const auto a = PackedBits::pack(random_crop(1));
  const auto b = PackedBits::pack(random_crop(2));
  for (auto _ : state) benchmark::DoNotOptimize(corr2(a, b));
}
BENCHMARK(BM_Corr2Packed);

void BM_ClassifyGlyph(benchmark::State& state) {
  const auto& set = templates();
  const auto crop = set.glyph(Font::TimesNewRoman, 'Q').bits();
  const int chunks = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(classify_glyph(crop, set, kDefaultRejectThreshold, chunks));
}
BENCHMARK(BM_ClassifyGlyph)->Arg(1)->Arg(4);

void BM_RecognizePage(benchmark::State& state) {
  const auto& set = templates();
  const auto corpus = render_corpus({Font::Arial, 1.0, 500, 1}, set);
  const auto page = add_noise(corpus.pages[0], NoiseSpec{});
  for (auto _ : state) benchmark::DoNotOptimize(recognize_document(page, set));
  state.SetItemsProcessed(state.iterations() * 500);
}
BENCHMARK(BM_RecognizePage)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
