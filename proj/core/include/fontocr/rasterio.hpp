#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "fontocr/image.hpp"

namespace fontocr {

/// Result of decoding an image file. PBM decodes to BinaryImage (PBM 1 =
/// black = ink), PGM to GrayImage, PPM and color PNG to ColorImage.
using LoadedImage = std::variant<BinaryImage, GrayImage, ColorImage>;

/// Decode a Netpbm stream (P1-P6). Throws FormatError with the byte offset
/// of the first malformed or missing byte.
LoadedImage decode_netpbm(std::span<const std::uint8_t> data);

/// Decode a PNG stream (8/16-bit gray, gray+alpha, RGB, RGBA, palette).
/// Alpha is dropped.
LoadedImage decode_png(std::span<const std::uint8_t> data);

/// Load a PBM, PGM, PPM or PNG file, detected by signature.
LoadedImage load_image(const std::filesystem::path& path);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> data);

enum class NetpbmEncoding { Plain, Raw };

/// PBM writer. Ink (1) is written as PBM black (1).
std::vector<std::uint8_t> encode_pbm(const BinaryImage& image, NetpbmEncoding encoding = NetpbmEncoding::Raw);
/// PGM writer, maxval 255.
std::vector<std::uint8_t> encode_pgm(const GrayImage& image, NetpbmEncoding encoding = NetpbmEncoding::Raw);

void save_pbm(const BinaryImage& image, const std::filesystem::path& path,
              NetpbmEncoding encoding = NetpbmEncoding::Raw);
void save_pgm(const GrayImage& image, const std::filesystem::path& path,
              NetpbmEncoding encoding = NetpbmEncoding::Raw);

/// Luma with BT.601 weights 0.2989/0.5870/0.1140, rounded and clamped.
GrayImage to_grayscale(const ColorImage& image);

/// Collapse any decoded raster to grayscale. Binary ink becomes 0, background 255.
GrayImage to_grayscale(const LoadedImage& image);

/// Threshold then ink-normalize: intensity > threshold*255 is background (0),
/// everything else is ink (1). threshold must lie in [0, 1].
BinaryImage binarize(const GrayImage& image, double threshold);

/// Otsu's threshold over the 256-bin histogram, returned as bin/255.
/// The class split is "intensity <= bin"; ties go to the lowest bin.
/// A constant image yields 0.5.
double otsu_threshold(const GrayImage& image);

/// 3x3 median with edge replication.
GrayImage median_filter_3x3(const GrayImage& image);

}  // namespace fontocr
