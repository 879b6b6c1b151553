#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fontocr/image.hpp"

namespace fontocr {

enum class Font { Arial, ComicSansMS, TimesNewRoman };

inline constexpr Font kAllFonts[] = {Font::Arial, Font::ComicSansMS, Font::TimesNewRoman};
inline constexpr std::string_view kDefaultAlphabet = "ABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789";

/// Identifier used in manifests, files and CSV ("ComicSansMS").
std::string_view font_id(Font font) noexcept;
/// Human name used in reports ("Comic Sans MS").
std::string_view font_display_name(Font font) noexcept;
std::optional<Font> parse_font(std::string_view text) noexcept;

/// One 46x26 reference glyph. Construction rejects wrong dimensions and
/// constant bitmaps.
class GlyphTemplate {
 public:
  GlyphTemplate(Font font, char label, BinaryImage bits);

  Font font() const noexcept { return font_; }
  char label() const noexcept { return label_; }
  const BinaryImage& bits() const noexcept { return bits_; }
  const PackedBits& packed() const noexcept { return packed_; }

  friend bool operator==(const GlyphTemplate& a, const GlyphTemplate& b) {
    return a.font_ == b.font_ && a.label_ == b.label_ && a.bits_ == b.bits_;
  }

 private:
  Font font_;
  char label_;
  BinaryImage bits_;
  PackedBits packed_;
};

/// Immutable glyph collection in canonical order: font-major, alphabet-minor.
class TemplateSet {
 public:
  /// Sorts glyphs into canonical order and checks that every (font, label)
  /// pair appears exactly once. Throws ValidationError otherwise.
  TemplateSet(std::vector<Font> fonts, std::string alphabet, std::vector<GlyphTemplate> glyphs);

  std::span<const GlyphTemplate> glyphs() const noexcept { return glyphs_; }
  std::span<const Font> fonts() const noexcept { return fonts_; }
  const std::string& alphabet() const noexcept { return alphabet_; }
  std::size_t size() const noexcept { return glyphs_.size(); }

  const GlyphTemplate& glyph(Font font, char label) const;
  std::size_t index_of(Font font, char label) const;

  friend bool operator==(const TemplateSet&, const TemplateSet&) = default;

 private:
  std::vector<Font> fonts_;
  std::string alphabet_;
  std::vector<GlyphTemplate> glyphs_;
};

struct ManifestEntry {
  Font font;
  char label;
  std::string path;
  int line;
};

/// Parse the tab-separated manifest (font, label, relative path). Blank
/// lines and '#' comments are skipped. Throws ValidationError on bad records
/// and on duplicate (font, label) pairs.
std::vector<ManifestEntry> parse_manifest(std::string_view text);

/// Turn an arbitrary glyph raster into a template bitmap: crop to ink, then
/// apply normalize_glyph until the result is stable under re-segmentation.
/// Throws ValidationError for blank or constant glyphs and for glyphs that
/// the gap segmenter would split.
BinaryImage make_template_bits(const BinaryImage& glyph, std::string_view name);

/// Load every manifest glyph (paths relative to glyph_dir), binarize at 0.5
/// and pack into a TemplateSet over the given fonts and alphabet.
TemplateSet build_template_set(const std::filesystem::path& glyph_dir, const std::filesystem::path& manifest,
                               std::vector<Font> fonts = {kAllFonts[0], kAllFonts[1], kAllFonts[2]},
                               std::string alphabet = std::string(kDefaultAlphabet));

/// Binary template-set file. Layout:
///   "GLYPHSET\n" "version 1\n" "size 46 26\n" "fonts <ids>\n"
///   "alphabet <labels>\n" "count <n>\n" "bits\n"
///   n * ceil(46*26/8) bytes of row-major bits, MSB first, each glyph padded
///   to a byte boundary
///   4-byte big-endian CRC-32 over everything before it
std::vector<std::uint8_t> serialize_template_set(const TemplateSet& set);
TemplateSet deserialize_template_set(std::span<const std::uint8_t> data);

void save_template_set(const TemplateSet& set, const std::filesystem::path& path);
TemplateSet load_template_set(const std::filesystem::path& path);

}  // namespace fontocr
