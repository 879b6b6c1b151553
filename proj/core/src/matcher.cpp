#include "fontocr/matcher.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <future>
#include <string>

#include "fontocr/errors.hpp"
#include "fontocr/segmentation.hpp"

namespace fontocr {
namespace {

// Scores templates [first, last) and returns the local winner.
MatchScore scan_range(const PackedBits& crop, const TemplateSet& set, std::size_t first, std::size_t last) {
  MatchScore best{first, std::nullopt};
  for (std::size_t i = first; i < last; ++i) {
    const auto s = corr2(crop, set.glyphs()[i].packed());
    if (s && (!best.score || *s > *best.score)) best = {i, s};
  }
  return best;
}

}  // namespace

std::optional<double> correlation_from_counts(std::size_t pixels, std::size_t ink_a, std::size_t ink_b,
                                              std::size_t ink_both) noexcept {
  // With n pixels and binary values, n * sum((a-abar)(b-bbar)) = n*sab - sa*sb
  // and n * sum((a-abar)^2) = n*sa - sa^2. All terms are exact integers.
  __extension__ typedef __int128 Wide;
  const auto n = static_cast<Wide>(pixels);
  const auto sa = static_cast<Wide>(ink_a);
  const auto sb = static_cast<Wide>(ink_b);
  const auto sab = static_cast<Wide>(ink_both);
  const Wide var_a = n * sa - sa * sa;
  const Wide var_b = n * sb - sb * sb;
  if (var_a == 0 || var_b == 0) return std::nullopt;
  const Wide cov = n * sab - sa * sb;
  // Below 2^26 each, var_a * var_b is exact in a double and sqrt is correctly
  // rounded, so self-correlation is exactly 1. Template-sized images always
  // take this path.
  constexpr Wide kExactLimit = Wide{1} << 26;
  if (var_a < kExactLimit && var_b < kExactLimit) {
    return static_cast<double>(cov) / std::sqrt(static_cast<double>(var_a * var_b));
  }
  if (var_a == var_b) return static_cast<double>(cov) / static_cast<double>(var_a);
  return static_cast<double>(cov) / (std::sqrt(static_cast<double>(var_a)) * std::sqrt(static_cast<double>(var_b)));
}

std::optional<double> corr2(const PackedBits& a, const PackedBits& b) {
  if (a.width != b.width || a.height != b.height) {
    throw ArgumentError("corr2 needs equal shapes, got " + std::to_string(a.height) + "x" +
                        std::to_string(a.width) + " and " + std::to_string(b.height) + "x" +
                        std::to_string(b.width));
  }
  return correlation_from_counts(a.pixel_count(), a.ink, b.ink, common_ink(a, b));
}

std::optional<double> corr2(const BinaryImage& a, const BinaryImage& b) {
  return corr2(PackedBits::pack(a), PackedBits::pack(b));
}

std::vector<MatchScore> score_templates(const BinaryImage& crop, const TemplateSet& set) {
  const auto packed = PackedBits::pack(crop);
  std::vector<MatchScore> scores;
  scores.reserve(set.size());
  for (std::size_t i = 0; i < set.size(); ++i) scores.push_back({i, corr2(packed, set.glyphs()[i].packed())});
  return scores;
}

std::optional<std::size_t> best_match(const std::vector<MatchScore>& scores) {
  const MatchScore* best = nullptr;
  for (const auto& s : scores) {
    if (!s.score) continue;
    if (!best || *s.score > *best->score ||
        (*s.score == *best->score && s.template_index < best->template_index)) {
      best = &s;
    }
  }
  if (!best) return std::nullopt;
  return best->template_index;
}

Classification classify_glyph(const BinaryImage& crop, const TemplateSet& set, double threshold,
                              std::size_t chunks) {
  if (!(threshold >= -1.0 && threshold <= 1.0)) {
    throw ArgumentError("rejection threshold must lie in [-1, 1]");
  }
  if (crop.height() != kTemplateRows || crop.width() != kTemplateCols) {
    throw ArgumentError("classify_glyph needs a 46x26 crop");
  }
  const auto packed = PackedBits::pack(crop);
  chunks = std::clamp<std::size_t>(chunks, 1, set.size());

  std::vector<MatchScore> winners;
  if (chunks == 1) {
    winners.push_back(scan_range(packed, set, 0, set.size()));
  } else {
    std::vector<std::future<MatchScore>> parts;
    const std::size_t step = (set.size() + chunks - 1) / chunks;
    for (std::size_t first = 0; first < set.size(); first += step) {
      const std::size_t last = std::min(set.size(), first + step);
      parts.push_back(std::async(std::launch::async, [&, first, last] { return scan_range(packed, set, first, last); }));
    }
    for (auto& p : parts) winners.push_back(p.get());
  }

  Classification result;
  result.threshold = threshold;
  const auto best = best_match(winners);
  if (!best) return result;
  const auto& w = *std::find_if(winners.begin(), winners.end(),
                                [&](const MatchScore& s) { return s.template_index == *best; });
  result.score = w.score;
  result.template_index = w.template_index;
  if (*w.score < threshold) return result;
  const auto& glyph = set.glyphs()[w.template_index];
  result.label = glyph.label();
  result.font = glyph.font();
  return result;
}

}  // namespace fontocr
