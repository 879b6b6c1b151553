#include "fontocr/recognizer.hpp"

#include <nlohmann/json.hpp>

#include "fontocr/errors.hpp"

namespace fontocr {
namespace {

using nlohmann::json;

constexpr int kStructuredVersion = 1;

void write_text(const std::filesystem::path& path, const std::string& text) {
  write_file(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

json font_or_null(const std::optional<Font>& font) {
  return font ? json(std::string(font_id(*font))) : json(nullptr);
}

std::optional<Font> font_from(const json& value) {
  if (value.is_null()) return std::nullopt;
  const auto font = parse_font(value.get<std::string>());
  if (!font) throw FormatError("unknown font in structured report", 0);
  return font;
}

}  // namespace

void RecognitionOptions::validate() const {
  if (!(threshold >= -1.0 && threshold <= 1.0)) throw ArgumentError("threshold must lie in [-1, 1]");
  if (!(binarize_threshold >= 0.0 && binarize_threshold <= 1.0)) {
    throw ArgumentError("binarize threshold must lie in [0, 1]");
  }
}

std::optional<Font> decide_font(const FontTally& tally) noexcept {
  std::optional<Font> best;
  for (Font f : kAllFonts) {
    if (tally[f] > 0 && (!best || tally[f] > tally[*best])) best = f;
  }
  return best;
}

DocumentResult recognize_document(const GrayImage& page, const TemplateSet& set, const SegmentationParams& params,
                                  const RecognitionOptions& options) {
  params.validate();
  options.validate();

  const GrayImage filtered = options.prefilter ? median_filter_3x3(page) : page;
  const double cut = options.use_otsu ? otsu_threshold(filtered) : options.binarize_threshold;
  BinaryImage ink = binarize(filtered, cut);
  if (options.component_filter) ink = remove_small_components(ink, params.min_component_area);

  DocumentResult result;
  const auto layout = segment_page(ink, params);
  for (std::size_t li = 0; li < layout.lines.size(); ++li) {
    const auto& line = layout.lines[li];
    std::string text;
    for (std::size_t bi = 0; bi < line.boxes.size(); ++bi) {
      if (line.space_before[bi]) text += ' ';
      const auto match = classify_glyph(normalize_glyph(crop(ink, line.boxes[bi])), set, options.threshold);
      if (match.rejected()) {
        text += '.';
      } else {
        text += *match.label;
        ++result.tally[*match.font];
      }
      result.glyphs.push_back({li, line.boxes[bi], match});
    }
    result.lines.push_back(std::move(text));
  }
  result.font = decide_font(result.tally);
  return result;
}

DocumentResult recognize_document(const LoadedImage& page, const TemplateSet& set, const SegmentationParams& params,
                                  const RecognitionOptions& options) {
  return recognize_document(to_grayscale(page), set, params, options);
}

std::string format_report(const DocumentResult& result) {
  std::string out = "The font is ";
  out += result.font ? font_display_name(*result.font) : "none";
  out += " and the text is:\n";
  for (const auto& line : result.lines) {
    out += line;
    out += '\n';
  }
  return out;
}

void write_report(const DocumentResult& result, const std::filesystem::path& path) {
  write_text(path, format_report(result));
}

std::string format_structured(const DocumentResult& result) {
  json doc;
  doc["format"] = "fontocr-result";
  doc["version"] = kStructuredVersion;
  doc["font"] = font_or_null(result.font);
  doc["lines"] = result.lines;
  json tally = json::object();
  for (Font f : kAllFonts) tally[std::string(font_id(f))] = result.tally[f];
  doc["tally"] = tally;
  json glyphs = json::array();
  for (const auto& g : result.glyphs) {
    json item;
    item["line"] = g.line;
    item["box"] = {g.box.top, g.box.left, g.box.bottom, g.box.right};
    item["rejected"] = g.match.rejected();
    if (g.match.label) item["label"] = std::string(1, *g.match.label);
    item["font"] = font_or_null(g.match.font);
    item["score"] = g.match.score ? json(*g.match.score) : json(nullptr);
    item["template_index"] = g.match.template_index ? json(*g.match.template_index) : json(nullptr);
    item["threshold"] = g.match.threshold;
    glyphs.push_back(std::move(item));
  }
  doc["glyph_count"] = result.glyphs.size();
  doc["glyphs"] = std::move(glyphs);
  return doc.dump(2) + "\n";
}

DocumentResult parse_structured(const std::string& text) {
  try {
    const auto doc = json::parse(text);
    if (doc.at("format") != "fontocr-result") throw FormatError("not a structured result", 0);
    if (doc.at("version") != kStructuredVersion) throw FormatError("unsupported structured result version", 0);
    DocumentResult result;
    result.font = font_from(doc.at("font"));
    result.lines = doc.at("lines").get<std::vector<std::string>>();
    for (Font f : kAllFonts) result.tally[f] = doc.at("tally").at(std::string(font_id(f))).get<int>();
    for (const auto& item : doc.at("glyphs")) {
      GlyphResult g;
      g.line = item.at("line").get<std::size_t>();
      const auto box = item.at("box").get<std::array<int, 4>>();
      g.box = {box[0], box[1], box[2], box[3]};
      if (!item.at("rejected").get<bool>()) {
        const auto label = item.at("label").get<std::string>();
        if (label.size() != 1) throw FormatError("glyph label must be one character", 0);
        g.match.label = label[0];
      }
      g.match.font = font_from(item.at("font"));
      if (!item.at("score").is_null()) g.match.score = item.at("score").get<double>();
      if (!item.at("template_index").is_null()) g.match.template_index = item.at("template_index").get<std::size_t>();
      g.match.threshold = item.at("threshold").get<double>();
      result.glyphs.push_back(g);
    }
    if (doc.at("glyph_count").get<std::size_t>() != result.glyphs.size()) {
      throw FormatError("glyph_count does not match glyph records", 0);
    }
    return result;
  } catch (const json::exception& e) {
    throw FormatError(std::string("structured result: ") + e.what(), 0);
  }
}

void write_structured(const DocumentResult& result, const std::filesystem::path& path) {
  write_text(path, format_structured(result));
}

DocumentResult read_structured(const std::filesystem::path& path) {
  const auto data = read_file(path);
  return parse_structured(std::string(data.begin(), data.end()));
}

}  // namespace fontocr
