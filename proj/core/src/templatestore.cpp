#include "fontocr/templatestore.hpp"

#include <zlib.h>

#include <algorithm>
#include <map>
#include <sstream>

#include "fontocr/errors.hpp"
#include "fontocr/rasterio.hpp"
#include "fontocr/segmentation.hpp"

namespace fontocr {
namespace {

constexpr std::string_view kMagic = "GLYPHSET\n";
constexpr int kFormatVersion = 1;
constexpr std::size_t kGlyphBytes = (kTemplateRows * kTemplateCols + 7) / 8;
constexpr int kMaxNormalizePasses = 8;

std::string pair_name(Font font, char label) {
  return std::string(font_id(font)) + "/" + label;
}

std::uint32_t crc32_of(std::span<const std::uint8_t> data) {
  return static_cast<std::uint32_t>(
      ::crc32(::crc32(0L, Z_NULL, 0), data.data(), static_cast<uInt>(data.size())));
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

// Reads "key value\n" header lines of a template-set file.
class HeaderReader {
 public:
  explicit HeaderReader(std::span<const std::uint8_t> data) : data_(data) {}

  std::size_t offset() const noexcept { return pos_; }

  std::string line() {
    const auto begin = pos_;
    while (pos_ < data_.size() && data_[pos_] != '\n') ++pos_;
    if (pos_ >= data_.size()) throw FormatError("template set header truncated", begin);
    std::string out(data_.begin() + static_cast<std::ptrdiff_t>(begin),
                    data_.begin() + static_cast<std::ptrdiff_t>(pos_));
    ++pos_;
    return out;
  }

  std::string field(std::string_view key) {
    const auto begin = pos_;
    auto text = line();
    if (text.rfind(std::string(key) + " ", 0) != 0) {
      throw FormatError("expected header field '" + std::string(key) + "'", begin);
    }
    return text.substr(key.size() + 1);
  }

 private:
  std::span<const std::uint8_t> data_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string_view font_id(Font font) noexcept {
  switch (font) {
    case Font::Arial: return "Arial";
    case Font::ComicSansMS: return "ComicSansMS";
    case Font::TimesNewRoman: return "TimesNewRoman";
  }
  return "";
}

std::string_view font_display_name(Font font) noexcept {
  switch (font) {
    case Font::Arial: return "Arial";
    case Font::ComicSansMS: return "Comic Sans MS";
    case Font::TimesNewRoman: return "Times New Roman";
  }
  return "";
}

std::optional<Font> parse_font(std::string_view text) noexcept {
  for (Font f : kAllFonts) {
    if (text == font_id(f) || text == font_display_name(f)) return f;
  }
  return std::nullopt;
}

GlyphTemplate::GlyphTemplate(Font font, char label, BinaryImage bits)
    : font_(font), label_(label), bits_(std::move(bits)) {
  if (bits_.height() != kTemplateRows || bits_.width() != kTemplateCols) {
    throw ValidationError("template " + pair_name(font, label) + " must be 46x26, got " +
                          std::to_string(bits_.height()) + "x" + std::to_string(bits_.width()));
  }
  const auto ink = bits_.ink_count();
  if (ink == 0 || ink == bits_.bits().size()) {
    throw ValidationError("template " + pair_name(font, label) + " is constant");
  }
  packed_ = PackedBits::pack(bits_);
}

TemplateSet::TemplateSet(std::vector<Font> fonts, std::string alphabet, std::vector<GlyphTemplate> glyphs)
    : fonts_(std::move(fonts)), alphabet_(std::move(alphabet)) {
  if (fonts_.empty() || alphabet_.empty()) throw ValidationError("template set needs fonts and an alphabet");
  for (std::size_t i = 0; i < fonts_.size(); ++i) {
    if (std::find(fonts_.begin(), fonts_.begin() + static_cast<std::ptrdiff_t>(i), fonts_[i]) !=
        fonts_.begin() + static_cast<std::ptrdiff_t>(i)) {
      throw ValidationError("duplicate font " + std::string(font_id(fonts_[i])));
    }
  }
  for (std::size_t i = 0; i < alphabet_.size(); ++i) {
    if (alphabet_.find(alphabet_[i]) != i) throw ValidationError(std::string("duplicate label ") + alphabet_[i]);
    if (alphabet_[i] == ' ' || alphabet_[i] == '.') {
      throw ValidationError("labels ' ' and '.' are reserved");
    }
  }

  std::vector<std::optional<GlyphTemplate>> slots(fonts_.size() * alphabet_.size());
  for (auto& g : glyphs) {
    const auto f = std::find(fonts_.begin(), fonts_.end(), g.font());
    const auto l = alphabet_.find(g.label());
    if (f == fonts_.end() || l == std::string::npos) {
      throw ValidationError("template " + pair_name(g.font(), g.label()) + " is outside the set's fonts/alphabet");
    }
    auto& slot = slots[static_cast<std::size_t>(f - fonts_.begin()) * alphabet_.size() + l];
    if (slot) throw ValidationError("duplicate template " + pair_name(g.font(), g.label()));
    slot = std::move(g);
  }
  glyphs_.reserve(slots.size());
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (!slots[i]) {
      throw ValidationError("missing template " +
                            pair_name(fonts_[i / alphabet_.size()], alphabet_[i % alphabet_.size()]));
    }
    glyphs_.push_back(std::move(*slots[i]));
  }
}

std::size_t TemplateSet::index_of(Font font, char label) const {
  const auto f = std::find(fonts_.begin(), fonts_.end(), font);
  const auto l = alphabet_.find(label);
  if (f == fonts_.end() || l == std::string::npos) {
    throw ArgumentError("no template " + pair_name(font, label));
  }
  return static_cast<std::size_t>(f - fonts_.begin()) * alphabet_.size() + l;
}

const GlyphTemplate& TemplateSet::glyph(Font font, char label) const {
  return glyphs_[index_of(font, label)];
}

std::vector<ManifestEntry> parse_manifest(std::string_view text) {
  std::vector<ManifestEntry> entries;
  std::map<std::pair<Font, char>, int> seen;
  int line_no = 0;
  for (auto raw : split(text, '\n')) {
    ++line_no;
    const auto line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto fields = split(line, '\t');
    const std::string where = "manifest line " + std::to_string(line_no);
    if (fields.size() != 3) throw ValidationError(where + ": expected font<TAB>label<TAB>path");
    const auto font = parse_font(trim(fields[0]));
    if (!font) throw ValidationError(where + ": unknown font '" + std::string(fields[0]) + "'");
    const auto label = trim(fields[1]);
    if (label.size() != 1) throw ValidationError(where + ": label must be a single character");
    const auto path = trim(fields[2]);
    if (path.empty()) throw ValidationError(where + ": empty path");
    const auto [it, inserted] = seen.emplace(std::pair{*font, label[0]}, line_no);
    if (!inserted) {
      throw ValidationError(where + ": duplicate " + pair_name(*font, label[0]) + " (first on line " +
                            std::to_string(it->second) + ")");
    }
    entries.push_back({*font, label[0], std::string(path), line_no});
  }
  return entries;
}

BinaryImage make_template_bits(const BinaryImage& glyph, std::string_view name) {
  const auto fail = [&](const std::string& why) { throw ValidationError("glyph " + std::string(name) + ": " + why); };

  auto bounds = ink_bounds(glyph);
  if (!bounds) fail("blank image (constant template)");
  BinaryImage bits = normalize_glyph(crop(glyph, *bounds));
  bool stable = false;
  for (int pass = 0; pass < kMaxNormalizePasses && !stable; ++pass) {
    bounds = ink_bounds(bits);
    if (!bounds) fail("vanished during normalization");
    BinaryImage next = normalize_glyph(crop(bits, *bounds));
    stable = next == bits;
    bits = std::move(next);
  }
  if (!stable) fail("normalization does not converge");

  const auto ink = bits.ink_count();
  if (ink == 0 || ink == bits.bits().size()) fail("constant template");

  // A template must come back as exactly one glyph from a clean page.
  const SegmentationParams params;
  if (remove_small_components(bits, params.min_component_area) != bits) {
    fail("contains a component smaller than " + std::to_string(params.min_component_area) + " pixels");
  }
  const auto layout = segment_page(bits, params);
  if (layout.lines.size() != 1 || layout.lines.front().boxes.size() != 1) {
    fail("splits into several pieces under gap segmentation");
  }
  return bits;
}

TemplateSet build_template_set(const std::filesystem::path& glyph_dir, const std::filesystem::path& manifest,
                               std::vector<Font> fonts, std::string alphabet) {
  const auto text = read_file(manifest);
  const auto entries = parse_manifest(std::string_view(reinterpret_cast<const char*>(text.data()), text.size()));

  std::map<std::pair<Font, char>, const ManifestEntry*> by_pair;
  for (const auto& e : entries) by_pair[{e.font, e.label}] = &e;
  for (Font f : fonts) {
    for (char l : alphabet) {
      if (!by_pair.count({f, l})) throw ValidationError("manifest is missing " + pair_name(f, l));
    }
  }

  std::vector<GlyphTemplate> glyphs;
  for (Font f : fonts) {
    for (char l : alphabet) {
      const auto& entry = *by_pair.at({f, l});
      const auto gray = to_grayscale(load_image(glyph_dir / entry.path));
      glyphs.emplace_back(f, l, make_template_bits(binarize(gray, 0.5), pair_name(f, l)));
    }
  }
  return TemplateSet(std::move(fonts), std::move(alphabet), std::move(glyphs));
}

std::vector<std::uint8_t> serialize_template_set(const TemplateSet& set) {
  std::ostringstream header;
  header << kMagic << "version " << kFormatVersion << "\n"
         << "size " << kTemplateRows << " " << kTemplateCols << "\n"
         << "fonts";
  for (Font f : set.fonts()) header << " " << font_id(f);
  header << "\nalphabet " << set.alphabet() << "\n"
         << "count " << set.size() << "\n"
         << "bits\n";
  const auto text = header.str();
  std::vector<std::uint8_t> out(text.begin(), text.end());

  for (const auto& g : set.glyphs()) {
    std::vector<std::uint8_t> packed(kGlyphBytes, 0);
    const auto bits = g.bits().bits();
    for (std::size_t i = 0; i < bits.size(); ++i) {
      if (bits[i]) packed[i / 8] |= static_cast<std::uint8_t>(0x80u >> (i % 8));
    }
    out.insert(out.end(), packed.begin(), packed.end());
  }
  const auto crc = crc32_of(out);
  for (int shift = 24; shift >= 0; shift -= 8) out.push_back(static_cast<std::uint8_t>(crc >> shift));
  return out;
}

TemplateSet deserialize_template_set(std::span<const std::uint8_t> data) {
  if (data.size() < kMagic.size() || !std::equal(kMagic.begin(), kMagic.end(), data.begin())) {
    throw FormatError("not a template set file (bad magic)", 0);
  }
  HeaderReader reader(data.subspan(kMagic.size()));
  const auto at = [&] { return kMagic.size() + reader.offset(); };

  auto pos = at();
  const auto version = reader.field("version");
  if (version != std::to_string(kFormatVersion)) {
    throw FormatError("unsupported template set version " + version, pos);
  }
  pos = at();
  if (reader.field("size") != std::to_string(kTemplateRows) + " " + std::to_string(kTemplateCols)) {
    throw FormatError("unsupported template size", pos);
  }
  pos = at();
  std::vector<Font> fonts;
  const auto font_ids = reader.field("fonts");
  for (auto id : split(font_ids, ' ')) {
    const auto f = parse_font(id);
    if (!f) throw FormatError("unknown font '" + std::string(id) + "'", pos);
    fonts.push_back(*f);
  }
  const auto alphabet = reader.field("alphabet");
  pos = at();
  const auto count_text = reader.field("count");
  std::size_t count = 0;
  try {
    count = std::stoul(count_text);
  } catch (const std::exception&) {
    throw FormatError("bad glyph count", pos);
  }
  if (count != fonts.size() * alphabet.size()) throw FormatError("glyph count does not match fonts x alphabet", pos);
  pos = at();
  if (reader.line() != "bits") throw FormatError("expected 'bits' marker", pos);

  const std::size_t payload_start = at();
  const std::size_t expected = payload_start + count * kGlyphBytes + 4;
  if (data.size() < expected) throw FormatError("template set truncated", data.size());
  if (data.size() > expected) throw FormatError("trailing bytes after checksum", expected);

  const auto body = data.first(expected - 4);
  std::uint32_t stored = 0;
  for (std::size_t i = expected - 4; i < expected; ++i) stored = (stored << 8) | data[i];
  if (stored != crc32_of(body)) throw FormatError("checksum mismatch", expected - 4);

  std::vector<GlyphTemplate> glyphs;
  glyphs.reserve(count);
  for (std::size_t g = 0; g < count; ++g) {
    const auto packed = data.subspan(payload_start + g * kGlyphBytes, kGlyphBytes);
    std::vector<std::uint8_t> bits(static_cast<std::size_t>(kTemplateRows * kTemplateCols));
    for (std::size_t i = 0; i < bits.size(); ++i) bits[i] = (packed[i / 8] >> (7 - i % 8)) & 1u;
    const Font font = fonts[g / alphabet.size()];
    const char label = alphabet[g % alphabet.size()];
    try {
      glyphs.emplace_back(font, label, BinaryImage(kTemplateCols, kTemplateRows, std::move(bits)));
    } catch (const ValidationError& e) {
      throw FormatError(e.what(), payload_start + g * kGlyphBytes);
    }
  }
  return TemplateSet(std::move(fonts), alphabet, std::move(glyphs));
}

void save_template_set(const TemplateSet& set, const std::filesystem::path& path) {
  write_file(path, serialize_template_set(set));
}

TemplateSet load_template_set(const std::filesystem::path& path) {
  return deserialize_template_set(read_file(path));
}

}  // namespace fontocr
