#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace fontocr {

/// 8-bit single-channel raster, row-major.
class GrayImage {
 public:
  GrayImage() = default;
  GrayImage(int width, int height, std::uint8_t fill = 255);
  GrayImage(int width, int height, std::vector<std::uint8_t> pixels);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  bool empty() const noexcept { return pixels_.empty(); }

  std::uint8_t at(int row, int col) const noexcept {
    return pixels_[static_cast<std::size_t>(row) * width_ + col];
  }
  std::uint8_t& at(int row, int col) noexcept {
    return pixels_[static_cast<std::size_t>(row) * width_ + col];
  }

  std::span<const std::uint8_t> pixels() const noexcept { return pixels_; }
  std::span<std::uint8_t> pixels() noexcept { return pixels_; }

  friend bool operator==(const GrayImage&, const GrayImage&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> pixels_;
};

/// Interleaved 8-bit RGB raster, row-major.
class ColorImage {
 public:
  ColorImage() = default;
  ColorImage(int width, int height, std::vector<std::uint8_t> rgb);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }

  std::span<const std::uint8_t> rgb() const noexcept { return rgb_; }

  friend bool operator==(const ColorImage&, const ColorImage&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> rgb_;
};

/// Two-level raster. 1 is ink (foreground), 0 is background.
class BinaryImage {
 public:
  BinaryImage() = default;
  BinaryImage(int width, int height, bool fill = false);
  BinaryImage(int width, int height, std::vector<std::uint8_t> bits);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  bool empty() const noexcept { return bits_.empty(); }

  bool at(int row, int col) const noexcept {
    return bits_[static_cast<std::size_t>(row) * width_ + col] != 0;
  }
  void set(int row, int col, bool ink) noexcept {
    bits_[static_cast<std::size_t>(row) * width_ + col] = ink ? 1 : 0;
  }

  std::span<const std::uint8_t> bits() const noexcept { return bits_; }

  std::size_t ink_count() const noexcept;
  BinaryImage complement() const;

  friend bool operator==(const BinaryImage&, const BinaryImage&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> bits_;
};

/// Binary raster packed 64 pixels per word, plus its ink count. Used by the
/// correlation scan, where the dot product of two bit images is a popcount.
struct PackedBits {
  int width = 0;
  int height = 0;
  std::vector<std::uint64_t> words;
  std::size_t ink = 0;

  static PackedBits pack(const BinaryImage& image);
  std::size_t pixel_count() const noexcept {
    return static_cast<std::size_t>(width) * height;
  }
};

/// Number of pixels that are ink in both images. Shapes must match.
std::size_t common_ink(const PackedBits& a, const PackedBits& b) noexcept;

}  // namespace fontocr
