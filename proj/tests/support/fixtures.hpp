#pragma once

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <random>
#include <string>

#include "fontocr/image.hpp"
#include "fontocr/segmentation.hpp"
#include "fontocr/templatestore.hpp"

namespace fontocr::testing {

inline std::filesystem::path glyph_dir() { return FONTOCR_GLYPH_DIR; }

/// The default 108-glyph set, built once per test binary.
inline const TemplateSet& default_templates() {
  static const TemplateSet set = build_template_set(glyph_dir(), glyph_dir() / "manifest.tsv");
  return set;
}

/// Scratch directory unique to the running test binary.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("fontocr_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

/// Lay shapes left to right, top-aligned, with `gap` blank columns between
/// them, on a background page with `margin` pixels on every side.
inline BinaryImage paste_shapes(const std::vector<BinaryImage>& shapes, int gap, int margin = 8) {
  int width = 2 * margin;
  int height = 0;
  for (const auto& s : shapes) {
    width += s.width() + gap;
    height = std::max(height, s.height());
  }
  BinaryImage page(width, height + 2 * margin);
  int x = margin;
  for (const auto& s : shapes) {
    for (int r = 0; r < s.height(); ++r) {
      for (int c = 0; c < s.width(); ++c) {
        if (s.at(r, c)) page.set(margin + r, x + c, true);
      }
    }
    x += s.width() + gap;
  }
  return page;
}

/// Ink extent of a template glyph.
inline BinaryImage glyph_shape(const TemplateSet& set, Font font, char ch) {
  const auto& bits = set.glyph(font, ch).bits();
  return crop(bits, *ink_bounds(bits));
}

/// Paste the ink extent of each template glyph of text.
inline BinaryImage paste_text(const TemplateSet& set, Font font, const std::string& text, int gap, int margin = 8) {
  std::vector<BinaryImage> shapes;
  for (char ch : text) shapes.push_back(glyph_shape(set, font, ch));
  return paste_shapes(shapes, gap, margin);
}

/// Ink becomes 0 (black), background 255.
inline GrayImage to_page(const BinaryImage& ink) {
  GrayImage g(ink.width(), ink.height(), 255);
  for (int r = 0; r < ink.height(); ++r) {
    for (int c = 0; c < ink.width(); ++c) {
      if (ink.at(r, c)) g.at(r, c) = 0;
    }
  }
  return g;
}

inline BinaryImage random_binary(std::mt19937_64& rng, int width, int height, double p = 0.5) {
  std::bernoulli_distribution ink(p);
  BinaryImage img(width, height);
  for (int r = 0; r < height; ++r) {
    for (int c = 0; c < width; ++c) img.set(r, c, ink(rng));
  }
  return img;
}

}  // namespace fontocr::testing

namespace fontocr::testing {

/// Random page of rectangular and diagonal-stroke blobs, some below the
/// noise area, for segmentation property checks.
inline BinaryImage random_page(std::mt19937_64& rng, int width = 160, int height = 120) {
  BinaryImage page(width, height);
  const int blobs = 4 + static_cast<int>(rng() % 12);
  for (int b = 0; b < blobs; ++b) {
    const int h = 1 + static_cast<int>(rng() % 20);
    const int w = 1 + static_cast<int>(rng() % 14);
    const int top = static_cast<int>(rng() % (height - h));
    const int left = static_cast<int>(rng() % (width - w));
    const bool diagonal = rng() % 3 == 0;
    for (int r = 0; r < h; ++r) {
      for (int c = 0; c < w; ++c) {
        if (!diagonal || std::abs(r * w / h - c) <= 1) page.set(top + r, left + c, true);
      }
    }
  }
  return page;
}

/// Copy img into a larger background canvas at (dy, dx).
inline BinaryImage embed(const BinaryImage& img, int dy, int dx, int extra_h, int extra_w) {
  BinaryImage out(img.width() + extra_w, img.height() + extra_h);
  for (int r = 0; r < img.height(); ++r) {
    for (int c = 0; c < img.width(); ++c) out.set(r + dy, c + dx, img.at(r, c));
  }
  return out;
}

}  // namespace fontocr::testing
