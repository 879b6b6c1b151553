#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "fontocr/matcher.hpp"
#include "fontocr/rasterio.hpp"
#include "fontocr/segmentation.hpp"
#include "fontocr/templatestore.hpp"

namespace fontocr {

struct RecognitionOptions {
  double threshold = kDefaultRejectThreshold;  // correlation rejection cutoff
  double binarize_threshold = 0.5;
  bool use_otsu = false;         // overrides binarize_threshold
  bool prefilter = true;         // 3x3 median before binarization
  bool component_filter = true;  // drop components below min_component_area

  void validate() const;
};

/// Accepted glyphs per font, indexed like kAllFonts.
struct FontTally {
  std::array<int, 3> counts{};

  int& operator[](Font f) noexcept { return counts[static_cast<std::size_t>(f)]; }
  int operator[](Font f) const noexcept { return counts[static_cast<std::size_t>(f)]; }
  int total() const noexcept { return counts[0] + counts[1] + counts[2]; }

  friend bool operator==(const FontTally&, const FontTally&) = default;
};

struct GlyphResult {
  std::size_t line = 0;
  BoundingBox box;
  Classification match;

  friend bool operator==(const GlyphResult& a, const GlyphResult& b) {
    return a.line == b.line && a.box == b.box && a.match.label == b.match.label &&
           a.match.font == b.match.font && a.match.score == b.match.score &&
           a.match.template_index == b.match.template_index && a.match.threshold == b.match.threshold;
  }
};

struct DocumentResult {
  std::optional<Font> font;
  std::vector<std::string> lines;  // spaces for word gaps, '.' for rejected glyphs
  std::vector<GlyphResult> glyphs;  // reading order
  FontTally tally;

  friend bool operator==(const DocumentResult&, const DocumentResult&) = default;
};

/// Font with the most votes; ties follow kAllFonts order; no votes gives none.
std::optional<Font> decide_font(const FontTally& tally) noexcept;

/// Full pipeline on a grayscale page: optional median prefilter, binarize,
/// component filter, line and character segmentation, glyph normalization,
/// template classification, font vote.
DocumentResult recognize_document(const GrayImage& page, const TemplateSet& set,
                                  const SegmentationParams& params = {}, const RecognitionOptions& options = {});
DocumentResult recognize_document(const LoadedImage& page, const TemplateSet& set,
                                  const SegmentationParams& params = {}, const RecognitionOptions& options = {});

/// Plain-text report: "The font is <name> and the text is:" then one line
/// per text line, newline-terminated. <name> is "none" for an empty result.
std::string format_report(const DocumentResult& result);
void write_report(const DocumentResult& result, const std::filesystem::path& path);

/// JSON report with per-glyph detail; read_structured inverts it exactly.
std::string format_structured(const DocumentResult& result);
DocumentResult parse_structured(const std::string& text);
void write_structured(const DocumentResult& result, const std::filesystem::path& path);
DocumentResult read_structured(const std::filesystem::path& path);

}  // namespace fontocr
