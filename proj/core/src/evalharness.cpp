#include "fontocr/evalharness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <random>
#include <thread>

#include "fontocr/errors.hpp"
#include "fontocr/rasterio.hpp"
#include "fontocr/segmentation.hpp"

namespace fontocr {
namespace {

std::vector<GrayImage> noisy_pages(const RenderedCorpus& corpus, const NoiseSpec& noise) {
  std::vector<GrayImage> pages;
  pages.reserve(corpus.pages.size());
  for (std::size_t p = 0; p < corpus.pages.size(); ++p) {
    NoiseSpec page_noise = noise;
    page_noise.seed = noise.seed * 1000003u + p;
    pages.push_back(add_noise(corpus.pages[p], page_noise));
  }
  return pages;
}

EvalCell score_pages(const RenderedCorpus& corpus, const std::vector<GrayImage>& pages, const TemplateSet& set,
                     bool filtering) {
  EvalCell cell;
  const auto options = evaluation_options(filtering);
  for (std::size_t p = 0; p < pages.size(); ++p) {
    for (const auto& line : corpus.page_lines[p]) cell.total += static_cast<int>(line.size());
    const auto result = recognize_document(pages[p], set, SegmentationParams{}, options);
    cell.detected += count_correct(corpus.placements[p], result);
  }
  return cell;
}

}  // namespace

std::string_view noise_kind_name(NoiseKind kind) noexcept {
  switch (kind) {
    case NoiseKind::SaltPepper: return "salt_pepper";
    case NoiseKind::Gaussian: return "gaussian";
    case NoiseKind::Speckle: return "speckle";
  }
  return "";
}

std::optional<NoiseKind> parse_noise_kind(std::string_view text) noexcept {
  for (auto k : {NoiseKind::SaltPepper, NoiseKind::Gaussian, NoiseKind::Speckle}) {
    if (text == noise_kind_name(k)) return k;
  }
  return std::nullopt;
}

void NoiseSpec::validate() const {
  if (!(density >= 0.0 && density <= 1.0)) throw ArgumentError("noise density must lie in [0, 1]");
  if (!(sigma >= 0.0)) throw ArgumentError("gaussian sigma must be >= 0");
  if (!(variance >= 0.0)) throw ArgumentError("speckle variance must be >= 0");
}

void CorpusSpec::validate() const {
  if (char_count < 1) throw ArgumentError("char_count must be >= 1");
  if (!(size_scale > 0.0 && size_scale <= 2.0)) throw ArgumentError("size_scale must lie in (0, 2]");
}

int CorpusSpec::point_size() const noexcept { return static_cast<int>(std::lround(size_scale * 10.0)); }

std::string RenderedCorpus::text() const {
  std::string out;
  for (const auto& page : page_lines) {
    for (const auto& line : page) out += line;
  }
  return out;
}

RenderedCorpus render_corpus(const CorpusSpec& spec, const TemplateSet& set, const PageGeometry& geometry) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);
  std::uniform_int_distribution<std::size_t> pick(0, set.alphabet().size() - 1);

  const int glyph_rows = std::max(1, static_cast<int>(std::lround(kTemplateRows * spec.size_scale)));
  const int glyph_cols = std::max(1, static_cast<int>(std::lround(kTemplateCols * spec.size_scale)));

  // Scaled glyph bitmaps cropped to their ink, one per label.
  std::vector<std::optional<BinaryImage>> shapes;
  for (char label : set.alphabet()) {
    const auto scaled = resize_binary(set.glyph(spec.font, label).bits(), glyph_rows, glyph_cols);
    const auto bounds = ink_bounds(scaled);
    shapes.push_back(bounds ? std::optional(crop(scaled, *bounds)) : std::nullopt);
  }

  RenderedCorpus corpus;
  const int page_width = 2 * geometry.margin + geometry.glyphs_per_line * (glyph_cols + geometry.glyph_gap);
  int remaining = spec.char_count;
  while (remaining > 0) {
    const int capacity = geometry.glyphs_per_line * geometry.lines_per_page;
    const int on_page = std::min(remaining, capacity);
    const int lines = (on_page + geometry.glyphs_per_line - 1) / geometry.glyphs_per_line;
    const int page_height = 2 * geometry.margin + lines * glyph_rows + (lines - 1) * geometry.line_gap;
    GrayImage page(page_width, page_height, 255);
    std::vector<std::string> truth;
    std::vector<PlacedGlyph> placed_glyphs;

    for (int line = 0, placed = 0; line < lines; ++line) {
      std::string text;
      int x = geometry.margin;
      const int y = geometry.margin + line * (glyph_rows + geometry.line_gap);
      for (int i = 0; i < geometry.glyphs_per_line && placed < on_page; ++i, ++placed) {
        const auto index = pick(rng);
        text += set.alphabet()[index];
        const auto& shape = shapes[index];
        if (!shape) {
          placed_glyphs.push_back({set.alphabet()[index], std::nullopt});
          x += geometry.glyph_gap;
          continue;
        }
        placed_glyphs.push_back(
            {set.alphabet()[index], BoundingBox{y, x, y + shape->height() - 1, x + shape->width() - 1}});
        for (int r = 0; r < shape->height(); ++r) {
          for (int c = 0; c < shape->width(); ++c) {
            if (shape->at(r, c)) page.at(y + r, x + c) = 0;
          }
        }
        x += shape->width() + geometry.glyph_gap;
      }
      truth.push_back(std::move(text));
    }
    corpus.pages.push_back(std::move(page));
    corpus.page_lines.push_back(std::move(truth));
    corpus.placements.push_back(std::move(placed_glyphs));
    remaining -= on_page;
  }
  return corpus;
}

GrayImage add_noise(const GrayImage& image, const NoiseSpec& spec) {
  spec.validate();
  GrayImage out = image;
  std::mt19937_64 rng(spec.seed);
  auto px = out.pixels();
  switch (spec.kind) {
    case NoiseKind::SaltPepper: {
      if (spec.density == 0.0) return out;
      std::uniform_real_distribution<double> u(0.0, 1.0);
      for (auto& v : px) {
        if (u(rng) < spec.density) v = u(rng) < 0.5 ? 0 : 255;
      }
      break;
    }
    case NoiseKind::Gaussian: {
      if (spec.sigma == 0.0) return out;
      std::normal_distribution<double> n(0.0, spec.sigma);
      for (auto& v : px) v = static_cast<std::uint8_t>(std::clamp(std::round(v + n(rng)), 0.0, 255.0));
      break;
    }
    case NoiseKind::Speckle: {
      if (spec.variance == 0.0) return out;
      std::normal_distribution<double> n(0.0, std::sqrt(spec.variance));
      for (auto& v : px) v = static_cast<std::uint8_t>(std::clamp(std::round(v * (1.0 + n(rng))), 0.0, 255.0));
      break;
    }
  }
  return out;
}

int count_correct(const std::vector<PlacedGlyph>& truth, const DocumentResult& recovered) {
  std::vector<int> hits(truth.size(), 0);
  std::vector<bool> correct(truth.size(), false);
  for (const auto& g : recovered.glyphs) {
    const int row = (g.box.top + g.box.bottom) / 2;
    const int col = (g.box.left + g.box.right) / 2;
    for (std::size_t i = 0; i < truth.size(); ++i) {
      if (truth[i].box && truth[i].box->contains(row, col)) {
        ++hits[i];
        correct[i] = g.match.label == truth[i].label;
        break;
      }
    }
  }
  int detected = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) detected += (hits[i] == 1 && correct[i]) ? 1 : 0;
  return detected;
}

double EvalCell::success() const noexcept { return success_percent(detected, total); }

double success_percent(int detected, int total) noexcept {
  if (total <= 0) return 0.0;
  return std::round(100.0 * 100.0 * detected / total) / 100.0;
}

RecognitionOptions evaluation_options(bool filtering) {
  RecognitionOptions options;
  options.prefilter = filtering;
  options.component_filter = filtering;
  return options;
}

EvalCell evaluate(const CorpusSpec& corpus, const NoiseSpec& noise, const TemplateSet& set, bool filtering,
                  const PageGeometry& geometry) {
  noise.validate();
  const auto rendered = render_corpus(corpus, set, geometry);
  return score_pages(rendered, noisy_pages(rendered, noise), set, filtering);
}

EvalRow evaluate_row(const CorpusSpec& corpus, const NoiseSpec& noise, const TemplateSet& set,
                     const PageGeometry& geometry) {
  noise.validate();
  const auto rendered = render_corpus(corpus, set, geometry);
  const auto pages = noisy_pages(rendered, noise);
  const auto raw = score_pages(rendered, pages, set, false);
  const auto clean = score_pages(rendered, pages, set, true);
  return EvalRow{corpus.font,    corpus.point_size(), raw.total,       raw.detected,
                 raw.success(), clean.detected,      clean.success()};
}

void GridSpec::validate() const {
  if (fonts.empty() || size_scales.empty()) throw ArgumentError("evaluation grid is empty");
  if (default_count < 1) throw ArgumentError("character count must be >= 1");
  for (const auto& [size, count] : counts) {
    if (count < 1) throw ArgumentError("character count for size " + std::to_string(size) + " must be >= 1");
  }
  for (double s : size_scales) CorpusSpec{fonts.front(), s, 1, 0}.validate();
  noise.validate();
}

std::vector<EvalRow> run_grid(const GridSpec& grid, const TemplateSet& set) {
  grid.validate();
  struct Cell {
    CorpusSpec corpus;
    NoiseSpec noise;
  };
  std::vector<Cell> cells;
  for (Font f : grid.fonts) {
    for (double s : grid.size_scales) {
      const std::uint64_t i = cells.size();
      CorpusSpec corpus{f, s, grid.default_count, grid.corpus_seed + i};
      if (const auto it = grid.counts.find(corpus.point_size()); it != grid.counts.end()) {
        corpus.char_count = it->second;
      }
      NoiseSpec noise = grid.noise;
      noise.seed = grid.noise.seed + i;
      cells.push_back({corpus, noise});
    }
  }

  std::vector<EvalRow> rows(cells.size());
  std::atomic<std::size_t> next{0};
  const unsigned hw = grid.threads ? grid.threads : std::max(1u, std::thread::hardware_concurrency());
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(hw, cells.size()));
  std::vector<std::thread> pool;
  std::exception_ptr failure;
  std::mutex failure_mutex;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < cells.size(); i = next++) {
        try {
          rows[i] = evaluate_row(cells[i].corpus, cells[i].noise, set, grid.geometry);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return rows;
}

std::string format_csv(const std::vector<EvalRow>& rows) {
  std::string out = "font,size,total,detected_unfiltered,success_unfiltered,detected_filtered,success_filtered\n";
  char buf[256];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%s,%d,%d,%d,%.2f,%d,%.2f\n", std::string(font_id(r.font)).c_str(), r.size,
                  r.total, r.detected_unfiltered, r.success_unfiltered, r.detected_filtered, r.success_filtered);
    out += buf;
  }
  return out;
}

void emit_csv(const std::vector<EvalRow>& rows, const std::filesystem::path& path) {
  const auto text = format_csv(rows);
  write_file(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

}  // namespace fontocr
