// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "fontocr/evalharness.hpp"
#include "fontocr/matcher.hpp"
#include "fontocr/rasterio.hpp"
#include "fontocr/recognizer.hpp"
#include "fontocr/segmentation.hpp"
#include "fontocr/templatestore.hpp"

namespace fs = std::filesystem;
using namespace fontocr;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

std::string fmt(double v, int digits = 2) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

int run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "fontocr");
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(args, out, err);
  if (code != 0) std::cerr << err.str();
  return code;
}

Verdict self_recognition() {
  Verdict v;
  const auto start = std::chrono::steady_clock::now();
  const auto& set = testing::default_templates();
  RecognitionOptions clean;
  clean.prefilter = false;
  int glyphs = 0;
  for (Font f : kAllFonts) {
    const auto corpus = render_corpus({f, 1.0, 520, 17}, set);
    for (std::size_t p = 0; p < corpus.pages.size(); ++p) {
      const auto result = recognize_document(corpus.pages[p], set, {}, clean);
      if (result.lines != corpus.page_lines[p]) v.fail(std::string(font_id(f)) + " text differs");
      if (result.font != f) v.fail(std::string(font_id(f)) + " font vote wrong");
      for (const auto& g : result.glyphs) {
        if (!g.match.score || std::abs(*g.match.score - 1.0) > 1e-12) v.fail("score below 1.0");
      }
      glyphs += static_cast<int>(result.glyphs.size());
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (secs >= 10.0) v.fail("took " + fmt(secs) + " s");
  if (v.pass) v.detail = std::to_string(glyphs) + " glyphs over 3 fonts exact, scores 1.0, " + fmt(secs) + " s";
  return v;
}

Verdict correlation_oracle() {
  Verdict v;
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> density(0.02, 0.98);
  double worst = 0.0;
  int defined = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto a = testing::random_binary(rng, kTemplateCols, kTemplateRows, density(rng));
    const auto b = testing::random_binary(rng, kTemplateCols, kTemplateRows, density(rng));
    const auto got = corr2(a, b);
    const auto want = oracle::corr2(a, b);
    if (got.has_value() != want.has_value()) {
      v.fail("definedness differs on pair " + std::to_string(i));
      continue;
    }
    if (!got) continue;
    ++defined;
    worst = std::max(worst, std::abs(*got - *want));
    const auto ba = corr2(b, a);
    if (!ba || std::abs(*ba - *got) > 1e-12) v.fail("asymmetric on pair " + std::to_string(i));
    const auto comp = corr2(a.complement(), b.complement());
    if (!comp || std::abs(*comp - *got) > 1e-12) v.fail("complement changes pair " + std::to_string(i));
  }
  if (worst > 1e-12) v.fail("max deviation " + std::to_string(worst));
  if (v.pass) v.detail = std::to_string(defined) + " pairs, max |diff| " + fmt(worst, 17);
  return v;
}

Verdict rejection() {
  Verdict v;
  const auto& set = testing::default_templates();
  for (bool ink : {false, true}) {
    const auto c = classify_glyph(BinaryImage(kTemplateCols, kTemplateRows, ink), set);
    if (!c.rejected() || c.score) v.fail("constant crop not rejected");
  }
  std::mt19937_64 rng(5);
  int low = 0;
  for (int i = 0; i < 50; ++i) {
    const auto crop = testing::random_binary(rng, kTemplateCols, kTemplateRows, 0.5);
    const auto c = classify_glyph(crop, set);
    if (!c.score) continue;
    if (*c.score < 0.4) {
      ++low;
      if (!c.rejected() || c.label) v.fail("sub-threshold crop accepted");
    } else if (c.rejected()) {
      v.fail("crop at or above threshold rejected");
    }
  }
  if (low == 0) v.fail("no sub-threshold random crop found");

  auto shape = [&](char ch) { return testing::glyph_shape(set, Font::Arial, ch); };
  const BinaryImage block(30, kTemplateRows, true);
  const BinaryImage slab(20, 30, true);
  const auto page = testing::paste_shapes({shape('H'), block, shape('E'), shape('L'), slab, shape('O')}, 6);
  const auto result = recognize_document(testing::to_page(page), set);
  int rejected = 0;
  for (const auto& g : result.glyphs) rejected += g.match.rejected() ? 1 : 0;
  const auto report = format_report(result);
  const auto dots = std::count(report.begin(), report.end(), '.');
  if (report != "The font is Arial and the text is:\nH.EL.O\n") v.fail("report was " + report);
  if (rejected != 2 || dots != rejected) v.fail("rejected " + std::to_string(rejected) + ", dots " + std::to_string(dots));
  if (v.pass) v.detail = "constant and " + std::to_string(low) + " sub-0.4 crops rejected, 2 regions -> 2 '.'";
  return v;
}

Verdict noise_ordering() {
  Verdict v;
  const auto& set = testing::default_templates();
  const auto start = std::chrono::steady_clock::now();
  constexpr int kSeeds = 10;
  std::vector<double> mean_unf(9, 0.0);
  std::vector<double> mean_fil(9, 0.0);
  std::vector<EvalRow> rows;
  for (int s = 1; s <= kSeeds; ++s) {
    GridSpec grid;
    grid.corpus_seed = static_cast<std::uint64_t>(s) * 100;
    grid.noise.seed = static_cast<std::uint64_t>(s) * 100;
    rows = run_grid(grid, set);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].success_filtered < rows[i].success_unfiltered) {
        v.fail("seed " + std::to_string(s) + " " + std::string(font_id(rows[i].font)) + " size " +
               std::to_string(rows[i].size) + ": filtered below unfiltered");
      }
      mean_unf[i] += rows[i].success_unfiltered / kSeeds;
      mean_fil[i] += rows[i].success_filtered / kSeeds;
    }
  }
  std::string table;
  for (std::size_t f = 0; f < 3; ++f) {
    for (std::size_t s = 0; s < 3; ++s) {
      const std::size_t i = f * 3 + s;
      table += " " + fmt(mean_fil[i]);
      if (s > 0 && (mean_fil[i] < mean_fil[i - 1] || mean_unf[i] < mean_unf[i - 1])) {
        v.fail(std::string(font_id(rows[i].font)) + " mean decreases at size " + std::to_string(rows[i].size));
      }
    }
    if (mean_fil[f * 3 + 2] < 95.0) {
      v.fail(std::string(font_id(rows[f * 3].font)) + " filtered at full size is " + fmt(mean_fil[f * 3 + 2]));
    }
    table += f < 2 ? " |" : "";
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (v.pass) v.detail = "mean filtered S% by font/size:" + table + " (" + fmt(secs, 1) + " s)";
  return v;
}

Verdict area_boundary() {
  Verdict v;
  BinaryImage page(60, 30);
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 6; ++c) page.set(5 + r, 5 + c, true);
  }
  for (int r = 0; r < 5; ++r) {
    for (int c = 0; c < 5; ++c) page.set(5 + r, 30 + c, true);
  }
  const auto areas = oracle::component_areas(page);
  if (areas[5 * 60 + 5] != 24 || areas[5 * 60 + 30] != 25) v.fail("fixture areas unexpected");
  const auto kept = remove_small_components(page, SegmentationParams{}.min_component_area);
  if (kept.at(5, 5) || kept.ink_count() != 25 || !kept.at(9, 34)) v.fail("wrong blobs kept");
  if (v.pass) v.detail = "area 24 removed, area 25 kept";
  return v;
}

Verdict determinism() {
  Verdict v;
  const auto dir = testing::scratch_dir("acceptance");
  const auto set_path = dir / "glyphs.set";
  if (run_cli({"build-templates", "--glyph-dir", testing::glyph_dir().string(), "--manifest",
               (testing::glyph_dir() / "manifest.tsv").string(), "--out", set_path.string()}) != 0) {
    v.fail("build-templates failed");
    return v;
  }
  const auto a = dir / "a.csv";
  const auto b = dir / "b.csv";
  for (const auto& [path, threads] : {std::pair{a, "0"}, std::pair{b, "1"}}) {
    if (run_cli({"evaluate", "--templates", set_path.string(), "--count", "300", "--corpus-seed", "7", "--seed", "7",
                 "--threads", threads, "--out", path.string()}) != 0) {
      v.fail("evaluate failed");
    }
  }
  if (slurp(a).empty() || slurp(a) != slurp(b)) v.fail("CSV differs between runs");

  const auto page = dir / "page.pgm";
  const auto noisy = dir / "noisy.pgm";
  if (run_cli({"render", "--templates", set_path.string(), "--out", page.string(), "--font", "ComicSansMS",
               "--count", "200", "--seed", "3"}) != 0 ||
      run_cli({"noise", "--image", page.string(), "--out", noisy.string(), "--seed", "9"}) != 0) {
    v.fail("render or noise failed");
    return v;
  }
  std::vector<std::string> reports;
  for (int i = 0; i < 2; ++i) {
    const auto txt = dir / ("r" + std::to_string(i) + ".txt");
    const auto json = dir / ("r" + std::to_string(i) + ".json");
    if (run_cli({"recognize", "--image", noisy.string(), "--templates", set_path.string(), "--out", txt.string(),
                 "--json", json.string()}) != 0) {
      v.fail("recognize failed");
    }
    reports.push_back(slurp(txt) + slurp(json));
  }
  if (reports[0].empty() || reports[0] != reports[1]) v.fail("reports differ between runs");
  if (v.pass) v.detail = "CSV and text/JSON reports byte-identical across runs";
  return v;
}

Verdict template_integrity() {
  Verdict v;
  const auto& set = testing::default_templates();
  if (set.size() != 108) v.fail("set has " + std::to_string(set.size()) + " glyphs");
  const auto path = testing::scratch_dir("acceptance_set") / "glyphs.set";
  save_template_set(set, path);
  const auto loaded = load_template_set(path);
  if (!(loaded == set)) v.fail("round trip not bit-exact");
  for (const auto& g : loaded.glyphs()) {
    const auto c = corr2(g.bits(), g.bits());
    if (!c || *c != 1.0) v.fail(std::string(font_id(g.font())) + "/" + g.label() + " self-correlation not 1.0");
  }
  if (v.pass) v.detail = "108 glyphs round-trip bit-exact, all self-correlate to 1.0";
  return v;
}

Verdict segmentation_properties() {
  Verdict v;
  std::mt19937_64 rng(8);
  int boxes = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto page = remove_small_components(testing::random_page(rng), 25);
    const auto layout = segment_page(page, {});
    for (int r = 0; r < page.height(); ++r) {
      for (int c = 0; c < page.width(); ++c) {
        if (!page.at(r, c)) continue;
        int owners = 0;
        for (const auto& line : layout.lines) {
          for (const auto& box : line.boxes) owners += box.contains(r, c) ? 1 : 0;
        }
        if (owners != 1) v.fail("page " + std::to_string(trial) + ": ink pixel owned by " + std::to_string(owners));
      }
    }
    const int dy = static_cast<int>(rng() % 17);
    const int dx = static_cast<int>(rng() % 23);
    const auto shifted = segment_page(testing::embed(page, dy, dx, 20, 30), {});
    bool same = shifted.lines.size() == layout.lines.size();
    for (std::size_t li = 0; same && li < layout.lines.size(); ++li) {
      const auto& want = layout.lines[li];
      const auto& got = shifted.lines[li];
      same = got.boxes.size() == want.boxes.size() && got.space_before == want.space_before;
      for (std::size_t b = 0; same && b < want.boxes.size(); ++b) {
        const auto& w = want.boxes[b];
        same = got.boxes[b] == BoundingBox{w.top + dy, w.left + dx, w.bottom + dy, w.right + dx};
      }
    }
    if (!same) v.fail("page " + std::to_string(trial) + " not translation equivariant");
    boxes += static_cast<int>(layout.glyph_count());
  }
  if (v.pass) v.detail = "100 pages, " + std::to_string(boxes) + " boxes, partition and shift checks hold";
  return v;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"self-recognition exactness", self_recognition},
      {"correlation oracle", correlation_oracle},
      {"rejection behavior", rejection},
      {"noise-robustness ordering", noise_ordering},
      {"24/25-pixel boundary", area_boundary},
      {"determinism", determinism},
      {"template-set integrity", template_integrity},
      {"segmentation properties", segmentation_properties},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v.fail(std::string("exception: ") + e.what());
    }
    failures += v.pass ? 0 : 1;
    std::cout << (v.pass ? "[PASS]" : "[FAIL]") << " criterion " << i + 1 << ": " << criteria[i].first << " - "
              << v.detail << std::endl;
  }
  std::cout << (criteria.size() - failures) << "/" << criteria.size() << " criteria passed" << std::endl;
  return failures == 0 ? 0 : 1;
}
