#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "fontocr/image.hpp"
#include "fontocr/templatestore.hpp"

namespace fontocr {

inline constexpr double kDefaultRejectThreshold = 0.4;

struct MatchScore {
  std::size_t template_index = 0;
  std::optional<double> score;  // empty when either image is constant
};

struct Classification {
  std::optional<char> label;  // empty means rejected
  std::optional<Font> font;
  std::optional<double> score;  // best defined score, if any
  std::optional<std::size_t> template_index;
  double threshold = kDefaultRejectThreshold;

  bool rejected() const noexcept { return !label.has_value(); }
};

/// Pearson correlation of two binary images from pixel counts: total pixels,
/// ink in each, and ink shared by both. Empty when either image is constant.
std::optional<double> correlation_from_counts(std::size_t pixels, std::size_t ink_a, std::size_t ink_b,
                                              std::size_t ink_both) noexcept;

/// 2-D correlation coefficient of two equal-size binary images.
/// Throws ArgumentError on a shape mismatch.
std::optional<double> corr2(const BinaryImage& a, const BinaryImage& b);
std::optional<double> corr2(const PackedBits& a, const PackedBits& b);

/// Scores of crop against every template, in canonical order.
std::vector<MatchScore> score_templates(const BinaryImage& crop, const TemplateSet& set);

/// Index of the best defined score; ties go to the lowest template index.
std::optional<std::size_t> best_match(const std::vector<MatchScore>& scores);

/// Best template for a 46x26 crop. Rejected when the best defined score is
/// below threshold (strict) or no score is defined. With chunks > 1 the scan
/// is split across threads; the result does not depend on chunking.
Classification classify_glyph(const BinaryImage& crop, const TemplateSet& set,
                              double threshold = kDefaultRejectThreshold, std::size_t chunks = 1);

}  // namespace fontocr
