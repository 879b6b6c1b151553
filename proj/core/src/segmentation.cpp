#include "fontocr/segmentation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fontocr/errors.hpp"

namespace fontocr {
namespace {

struct Run {
  int first;
  int last;
};

// Maximal runs of true entries, with blank gaps shorter than min_gap merged
// into the neighbouring runs.
std::vector<Run> ink_runs(const std::vector<bool>& has_ink, int min_gap) {
  std::vector<Run> runs;
  const int n = static_cast<int>(has_ink.size());
  for (int i = 0; i < n;) {
    if (!has_ink[i]) {
      ++i;
      continue;
    }
    int j = i;
    while (j + 1 < n && has_ink[j + 1]) ++j;
    if (!runs.empty() && i - runs.back().last - 1 < min_gap) {
      runs.back().last = j;
    } else {
      runs.push_back({i, j});
    }
    i = j + 1;
  }
  return runs;
}

}  // namespace

void SegmentationParams::validate() const {
  if (min_component_area < 1 || line_gap < 1 || char_gap < 1 || space_gap < 1) {
    throw ArgumentError("segmentation parameters must all be >= 1");
  }
  if (space_gap < char_gap) {
    throw ArgumentError("space_gap (" + std::to_string(space_gap) + ") must be >= char_gap (" +
                        std::to_string(char_gap) + ")");
  }
}

std::size_t PageLayout::glyph_count() const noexcept {
  std::size_t n = 0;
  for (const auto& line : lines) n += line.boxes.size();
  return n;
}

BinaryImage remove_small_components(const BinaryImage& image, int min_area) {
  if (min_area < 1) throw ArgumentError("min_area must be >= 1");
  const int w = image.width();
  const int h = image.height();
  BinaryImage out = image;
  std::vector<std::uint8_t> seen(image.bits().size(), 0);
  std::vector<int> component;
  std::vector<int> stack;

  for (int start = 0; start < w * h; ++start) {
    if (seen[start] || !image.bits()[start]) continue;
    component.clear();
    stack.assign(1, start);
    seen[start] = 1;
    while (!stack.empty()) {
      const int idx = stack.back();
      stack.pop_back();
      component.push_back(idx);
      const int r = idx / w;
      const int c = idx % w;
      for (int dr = -1; dr <= 1; ++dr) {
        for (int dc = -1; dc <= 1; ++dc) {
          const int rr = r + dr;
          const int cc = c + dc;
          if (rr < 0 || rr >= h || cc < 0 || cc >= w) continue;
          const int n = rr * w + cc;
          if (!seen[n] && image.bits()[n]) {
            seen[n] = 1;
            stack.push_back(n);
          }
        }
      }
    }
    if (static_cast<int>(component.size()) < min_area) {
      for (int idx : component) out.set(idx / w, idx % w, false);
    }
  }
  return out;
}

std::vector<RowInterval> split_lines(const BinaryImage& image, const SegmentationParams& params) {
  params.validate();
  std::vector<bool> has_ink(static_cast<std::size_t>(image.height()), false);
  for (int r = 0; r < image.height(); ++r) {
    for (int c = 0; c < image.width(); ++c) {
      if (image.at(r, c)) {
        has_ink[r] = true;
        break;
      }
    }
  }
  std::vector<RowInterval> lines;
  for (const auto& run : ink_runs(has_ink, params.line_gap)) lines.push_back({run.first, run.last});
  return lines;
}

LineLayout split_chars(const BinaryImage& image, RowInterval line, const SegmentationParams& params) {
  params.validate();
  if (line.top < 0 || line.bottom >= image.height() || line.top > line.bottom) {
    throw ArgumentError("line interval outside image");
  }
  std::vector<bool> has_ink(static_cast<std::size_t>(image.width()), false);
  for (int c = 0; c < image.width(); ++c) {
    for (int r = line.top; r <= line.bottom; ++r) {
      if (image.at(r, c)) {
        has_ink[c] = true;
        break;
      }
    }
  }

  LineLayout layout;
  layout.rows = line;
  for (const auto& run : ink_runs(has_ink, params.char_gap)) {
    BoundingBox box{line.bottom, run.first, line.top, run.last};
    for (int r = line.top; r <= line.bottom; ++r) {
      for (int c = run.first; c <= run.last; ++c) {
        if (image.at(r, c)) {
          box.top = std::min(box.top, r);
          box.bottom = std::max(box.bottom, r);
          break;
        }
      }
    }
    const bool space =
        !layout.boxes.empty() && run.first - layout.boxes.back().right - 1 >= params.space_gap;
    layout.boxes.push_back(box);
    layout.space_before.push_back(space);
  }
  return layout;
}

PageLayout segment_page(const BinaryImage& image, const SegmentationParams& params) {
  PageLayout page;
  for (const auto& line : split_lines(image, params)) {
    page.lines.push_back(split_chars(image, line, params));
  }
  return page;
}

BinaryImage crop(const BinaryImage& image, const BoundingBox& box) {
  if (box.top < 0 || box.left < 0 || box.bottom >= image.height() || box.right >= image.width() ||
      box.top > box.bottom || box.left > box.right) {
    throw ArgumentError("crop box outside image");
  }
  BinaryImage out(box.width(), box.height());
  for (int r = 0; r < box.height(); ++r) {
    for (int c = 0; c < box.width(); ++c) out.set(r, c, image.at(box.top + r, box.left + c));
  }
  return out;
}

std::optional<BoundingBox> ink_bounds(const BinaryImage& image) {
  std::optional<BoundingBox> box;
  for (int r = 0; r < image.height(); ++r) {
    for (int c = 0; c < image.width(); ++c) {
      if (!image.at(r, c)) continue;
      if (!box) {
        box = BoundingBox{r, c, r, c};
      } else {
        box->top = std::min(box->top, r);
        box->left = std::min(box->left, c);
        box->bottom = std::max(box->bottom, r);
        box->right = std::max(box->right, c);
      }
    }
  }
  return box;
}

BinaryImage resize_binary(const BinaryImage& image, int rows, int cols) {
  if (image.empty()) throw ArgumentError("cannot resize an empty image");
  if (rows < 1 || cols < 1) throw ArgumentError("resize target must be positive");
  const int h = image.height();
  const int w = image.width();
  if (h == rows && w == cols) return image;

  struct Tap {
    int lo;
    int hi;
    double frac;
  };
  auto taps = [](int out_size, int in_size) {
    std::vector<Tap> t(static_cast<std::size_t>(out_size));
    const double scale = static_cast<double>(in_size) / out_size;
    for (int i = 0; i < out_size; ++i) {
      const double src = std::clamp((i + 0.5) * scale - 0.5, 0.0, static_cast<double>(in_size - 1));
      const int lo = static_cast<int>(std::floor(src));
      t[i] = {lo, std::min(lo + 1, in_size - 1), src - lo};
    }
    return t;
  };
  const auto ys = taps(rows, h);
  const auto xs = taps(cols, w);

  BinaryImage out(cols, rows);
  for (int r = 0; r < rows; ++r) {
    const auto& ty = ys[r];
    for (int c = 0; c < cols; ++c) {
      const auto& tx = xs[c];
      const double top = (1.0 - tx.frac) * image.at(ty.lo, tx.lo) + tx.frac * image.at(ty.lo, tx.hi);
      const double bottom = (1.0 - tx.frac) * image.at(ty.hi, tx.lo) + tx.frac * image.at(ty.hi, tx.hi);
      const double value = (1.0 - ty.frac) * top + ty.frac * bottom;
      out.set(r, c, value >= 0.5);
    }
  }
  return out;
}

BinaryImage resize_to_template(const BinaryImage& crop) {
  return resize_binary(crop, kTemplateRows, kTemplateCols);
}

BinaryImage normalize_glyph(const BinaryImage& glyph) {
  if (glyph.empty()) throw ArgumentError("cannot normalize an empty crop");
  const int h = glyph.height();
  const int w = glyph.width();
  const int min_width = (h * kTemplateCols + kTemplateRows / 2) / kTemplateRows;
  if (w >= min_width) return resize_to_template(glyph);

  BinaryImage canvas(min_width, h);
  const int offset = (min_width - w) / 2;
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) canvas.set(r, offset + c, glyph.at(r, c));
  }
  return resize_to_template(canvas);
}

}  // namespace fontocr
