#pragma once

#include <optional>
#include <vector>

#include "fontocr/image.hpp"

namespace fontocr {

inline constexpr int kTemplateRows = 46;
inline constexpr int kTemplateCols = 26;

/// Inclusive pixel rectangle.
struct BoundingBox {
  int top = 0;
  int left = 0;
  int bottom = 0;
  int right = 0;

  int height() const noexcept { return bottom - top + 1; }
  int width() const noexcept { return right - left + 1; }
  bool contains(int row, int col) const noexcept {
    return row >= top && row <= bottom && col >= left && col <= right;
  }

  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

/// Inclusive row range of one text line.
struct RowInterval {
  int top = 0;
  int bottom = 0;

  friend bool operator==(const RowInterval&, const RowInterval&) = default;
};

struct SegmentationParams {
  int min_component_area = 25;  // components smaller than this are noise
  int line_gap = 1;             // blank rows that end a line
  int char_gap = 1;             // blank columns that end a character
  int space_gap = 13;           // blank columns that also mark a word space

  /// Throws ArgumentError unless all values are >= 1 and space_gap >= char_gap.
  void validate() const;
};

/// Character boxes of one line, left to right. space_before[i] is set when a
/// word space precedes boxes[i].
struct LineLayout {
  RowInterval rows;
  std::vector<BoundingBox> boxes;
  std::vector<bool> space_before;
};

struct PageLayout {
  std::vector<LineLayout> lines;

  std::size_t glyph_count() const noexcept;
};

/// Erase every 8-connected ink component whose area is below min_area.
BinaryImage remove_small_components(const BinaryImage& image, int min_area);

/// Row bands containing ink. Blank runs shorter than line_gap are absorbed
/// into the surrounding band.
std::vector<RowInterval> split_lines(const BinaryImage& image, const SegmentationParams& params);

/// Character boxes within one row band, each tightened vertically to its ink.
LineLayout split_chars(const BinaryImage& image, RowInterval line, const SegmentationParams& params);

/// split_lines followed by split_chars on every line.
PageLayout segment_page(const BinaryImage& image, const SegmentationParams& params);

BinaryImage crop(const BinaryImage& image, const BoundingBox& box);

/// Tight bounding box of the ink, or nothing for an all-background image.
std::optional<BoundingBox> ink_bounds(const BinaryImage& image);

/// Bilinear resample of the {0,1} field to rows x cols, re-thresholded at
/// 0.5 with ties going to ink. Sample positions use pixel-center alignment.
BinaryImage resize_binary(const BinaryImage& image, int rows, int cols);

/// resize_binary to the 46x26 template grid.
BinaryImage resize_to_template(const BinaryImage& crop);

/// Crop normalization used for both templates and page glyphs: a crop
/// narrower than the template aspect ratio is centered on a background
/// canvas of that aspect before resize_to_template. Wider crops are
/// stretched directly.
BinaryImage normalize_glyph(const BinaryImage& crop);

}  // namespace fontocr
