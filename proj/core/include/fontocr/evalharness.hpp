#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fontocr/image.hpp"
#include "fontocr/recognizer.hpp"
#include "fontocr/templatestore.hpp"

namespace fontocr {

enum class NoiseKind { SaltPepper, Gaussian, Speckle };

std::string_view noise_kind_name(NoiseKind kind) noexcept;
std::optional<NoiseKind> parse_noise_kind(std::string_view text) noexcept;

struct NoiseSpec {
  NoiseKind kind = NoiseKind::SaltPepper;
  double density = 0.05;   // salt & pepper corruption probability
  double sigma = 25.5;     // gaussian std-dev on the 0..255 scale
  double variance = 0.05;  // speckle multiplicative variance
  std::uint64_t seed = 1;

  void validate() const;
};

struct CorpusSpec {
  Font font = Font::Arial;
  double size_scale = 1.0;  // 0.6 / 0.8 / 1.0 stand for 6 / 8 / 10 pt
  int char_count = 500;
  std::uint64_t seed = 1;

  void validate() const;
  /// Nominal point size, 10 * size_scale rounded.
  int point_size() const noexcept;
};

/// Page geometry for synthetic corpora, in pixels.
struct PageGeometry {
  int glyphs_per_line = 40;
  int lines_per_page = 25;
  int glyph_gap = 5;
  int line_gap = 12;
  int margin = 16;
};

/// One pasted glyph. box is empty when scaling erased every ink pixel.
struct PlacedGlyph {
  char label = 0;
  std::optional<BoundingBox> box;
};

struct RenderedCorpus {
  std::vector<GrayImage> pages;
  /// Ground truth, pages[p] has text lines page_lines[p].
  std::vector<std::vector<std::string>> page_lines;
  /// Where every glyph of pages[p] was pasted, in reading order.
  std::vector<std::vector<PlacedGlyph>> placements;

  std::string text() const;
};

/// Paint randomly chosen glyphs of one font, scaled by size_scale, in black
/// on white pages. Glyphs are pasted by their ink extent with fixed gaps.
RenderedCorpus render_corpus(const CorpusSpec& spec, const TemplateSet& set, const PageGeometry& geometry = {});

/// Inject seeded noise. Identity parameters return the image unchanged.
GrayImage add_noise(const GrayImage& image, const NoiseSpec& spec);

/// Correct detections on one page. Every recovered glyph is assigned to the
/// pasted glyph whose box contains its box center. A pasted glyph counts as
/// detected when exactly one recovered glyph lands on it and that glyph was
/// accepted with the right label. Split, merged and rejected glyphs are
/// misses and do not disturb their neighbours.
int count_correct(const std::vector<PlacedGlyph>& truth, const DocumentResult& recovered);

struct EvalCell {
  int total = 0;
  int detected = 0;

  double success() const noexcept;
};

/// Recognition options for each column: filtering on enables the median
/// prefilter and component removal, off disables both.
RecognitionOptions evaluation_options(bool filtering);

EvalCell evaluate(const CorpusSpec& corpus, const NoiseSpec& noise, const TemplateSet& set, bool filtering,
                  const PageGeometry& geometry = {});

struct EvalRow {
  Font font = Font::Arial;
  int size = 10;
  int total = 0;
  int detected_unfiltered = 0;
  double success_unfiltered = 0.0;
  int detected_filtered = 0;
  double success_filtered = 0.0;

  friend bool operator==(const EvalRow&, const EvalRow&) = default;
};

/// 100 * detected / total rounded to two decimals.
double success_percent(int detected, int total) noexcept;

/// Both columns for one corpus. Each column sees the same noisy pages.
EvalRow evaluate_row(const CorpusSpec& corpus, const NoiseSpec& noise, const TemplateSet& set,
                     const PageGeometry& geometry = {});

struct GridSpec {
  std::vector<Font> fonts{Font::Arial, Font::ComicSansMS, Font::TimesNewRoman};
  std::vector<double> size_scales{0.6, 0.8, 1.0};
  /// Characters per corpus keyed by point size; missing sizes use default_count.
  std::map<int, int> counts{{6, 3250}, {8, 3100}, {10, 3300}};
  int default_count = 3300;
  std::uint64_t corpus_seed = 1;
  NoiseSpec noise;
  PageGeometry geometry;
  unsigned threads = 0;  // 0 picks hardware concurrency

  void validate() const;
};

/// Evaluate every (font, size) cell. Cell i uses corpus_seed + i and
/// noise.seed + i. Rows come back ordered by font then size.
std::vector<EvalRow> run_grid(const GridSpec& grid, const TemplateSet& set);

std::string format_csv(const std::vector<EvalRow>& rows);
void emit_csv(const std::vector<EvalRow>& rows, const std::filesystem::path& path);

}  // namespace fontocr
