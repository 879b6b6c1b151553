#include "fontocr/image.hpp"

#include <algorithm>
#include <bit>
#include <string>

#include "fontocr/errors.hpp"

namespace fontocr {
namespace {

std::size_t checked_area(int width, int height) {
  if (width < 1 || height < 1) {
    throw ArgumentError("image dimensions must be positive, got " + std::to_string(width) + "x" +
                        std::to_string(height));
  }
  return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
}

}  // namespace

GrayImage::GrayImage(int width, int height, std::uint8_t fill)
    : width_(width), height_(height), pixels_(checked_area(width, height), fill) {}

GrayImage::GrayImage(int width, int height, std::vector<std::uint8_t> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  if (pixels_.size() != checked_area(width, height)) {
    throw ArgumentError("gray pixel count does not match dimensions");
  }
}

ColorImage::ColorImage(int width, int height, std::vector<std::uint8_t> rgb)
    : width_(width), height_(height), rgb_(std::move(rgb)) {
  if (rgb_.size() != 3 * checked_area(width, height)) {
    throw ArgumentError("color sample count does not match dimensions");
  }
}

BinaryImage::BinaryImage(int width, int height, bool fill)
    : width_(width), height_(height), bits_(checked_area(width, height), fill ? 1 : 0) {}

BinaryImage::BinaryImage(int width, int height, std::vector<std::uint8_t> bits)
    : width_(width), height_(height), bits_(std::move(bits)) {
  if (bits_.size() != checked_area(width, height)) {
    throw ArgumentError("bit count does not match dimensions");
  }
  if (std::any_of(bits_.begin(), bits_.end(), [](std::uint8_t b) { return b > 1; })) {
    throw ArgumentError("binary image values must be 0 or 1");
  }
}

std::size_t BinaryImage::ink_count() const noexcept {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

BinaryImage BinaryImage::complement() const {
  BinaryImage out = *this;
  for (auto& b : out.bits_) b ^= 1;
  return out;
}

PackedBits PackedBits::pack(const BinaryImage& image) {
  PackedBits packed;
  packed.width = image.width();
  packed.height = image.height();
  const auto bits = image.bits();
  packed.words.assign((bits.size() + 63) / 64, 0);
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i]) {
      packed.words[i / 64] |= std::uint64_t{1} << (i % 64);
      ++packed.ink;
    }
  }
  return packed;
}

std::size_t common_ink(const PackedBits& a, const PackedBits& b) noexcept {
  std::size_t count = 0;
  const std::size_t n = std::min(a.words.size(), b.words.size());
  for (std::size_t i = 0; i < n; ++i) {
    count += static_cast<std::size_t>(std::popcount(a.words[i] & b.words[i]));
  }
  return count;
}

}  // namespace fontocr
