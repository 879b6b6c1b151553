#include "fontocr/rasterio.hpp"

#include <png.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <string>

#include "fontocr/errors.hpp"

namespace fontocr {
namespace {

// Cursor over a Netpbm byte stream. Every failure reports the offset of the
// byte being examined.
class NetpbmReader {
 public:
  explicit NetpbmReader(std::span<const std::uint8_t> data) : data_(data) {}

  std::size_t offset() const noexcept { return pos_; }
  bool at_end() const noexcept { return pos_ >= data_.size(); }

  [[noreturn]] void fail(const std::string& what) const { throw FormatError(what, pos_); }

  void skip_whitespace_and_comments() {
    while (!at_end()) {
      const auto c = data_[pos_];
      if (c == '#') {
        while (!at_end() && data_[pos_] != '\n' && data_[pos_] != '\r') ++pos_;
      } else if (std::isspace(c)) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  unsigned read_uint(const char* field) {
    skip_whitespace_and_comments();
    if (at_end()) fail(std::string("unexpected end of data reading ") + field);
    if (!std::isdigit(data_[pos_])) fail(std::string("expected digit for ") + field);
    unsigned long value = 0;
    while (!at_end() && std::isdigit(data_[pos_])) {
      value = value * 10 + (data_[pos_] - '0');
      if (value > 0xFFFFFFu) fail(std::string("value too large for ") + field);
      ++pos_;
    }
    return static_cast<unsigned>(value);
  }

  // Plain PBM allows bits with no separating whitespace.
  unsigned read_plain_bit() {
    skip_whitespace_and_comments();
    if (at_end()) fail("unexpected end of plain PBM raster");
    const auto c = data_[pos_];
    if (c != '0' && c != '1') fail("expected '0' or '1' in plain PBM raster");
    ++pos_;
    return static_cast<unsigned>(c - '0');
  }

  // Exactly one whitespace byte separates the header from a raw raster.
  void expect_single_whitespace() {
    if (at_end()) fail("missing raster data");
    if (!std::isspace(data_[pos_])) fail("expected whitespace before raster");
    ++pos_;
  }

  std::span<const std::uint8_t> take(std::size_t n) {
    if (data_.size() - pos_ < n) {
      throw FormatError("raster truncated: need " + std::to_string(n) + " bytes, have " +
                            std::to_string(data_.size() - pos_),
                        data_.size());
    }
    auto out = data_.subspan(pos_, n);
    pos_ += n;
    return out;
  }

 private:
  std::span<const std::uint8_t> data_;
  std::size_t pos_ = 0;
};

std::uint8_t rescale(unsigned value, unsigned maxval) {
  if (maxval == 255) return static_cast<std::uint8_t>(value);
  return static_cast<std::uint8_t>((value * 255u + maxval / 2) / maxval);
}

int checked_dimension(NetpbmReader& reader, const char* field) {
  const unsigned v = reader.read_uint(field);
  if (v == 0) reader.fail(std::string(field) + " must be positive");
  if (v > 65535) reader.fail(std::string(field) + " exceeds 65535");
  return static_cast<int>(v);
}

std::vector<std::uint8_t> read_samples(NetpbmReader& reader, bool plain, std::size_t count,
                                       unsigned maxval) {
  std::vector<std::uint8_t> out(count);
  if (plain) {
    for (std::size_t i = 0; i < count; ++i) {
      const unsigned v = reader.read_uint("sample");
      if (v > maxval) reader.fail("sample exceeds maxval");
      out[i] = rescale(v, maxval);
    }
    return out;
  }
  reader.expect_single_whitespace();
  const std::size_t width = maxval > 255 ? 2 : 1;
  const auto raw = reader.take(count * width);
  for (std::size_t i = 0; i < count; ++i) {
    unsigned v = width == 2 ? (raw[2 * i] << 8u) | raw[2 * i + 1] : raw[i];
    if (v > maxval) throw FormatError("sample exceeds maxval", reader.offset() - raw.size() + i * width);
    out[i] = rescale(v, maxval);
  }
  return out;
}

void append(std::vector<std::uint8_t>& out, const std::string& text) {
  out.insert(out.end(), text.begin(), text.end());
}

// Plain formats keep lines at or under 70 characters.
void append_plain_row(std::vector<std::uint8_t>& out, const std::vector<std::string>& tokens,
                      bool separate) {
  std::size_t line = 0;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const std::size_t extra = (line > 0 && separate) ? 1 : 0;
    if (line + extra + tokens[i].size() > 70) {
      out.push_back('\n');
      line = 0;
    } else if (extra) {
      out.push_back(' ');
      line += 1;
    }
    append(out, tokens[i]);
    line += tokens[i].size();
  }
  out.push_back('\n');
}

}  // namespace

LoadedImage decode_netpbm(std::span<const std::uint8_t> data) {
  NetpbmReader reader(data);
  if (data.size() < 2 || data[0] != 'P' || data[1] < '1' || data[1] > '6') {
    reader.fail("not a Netpbm stream");
  }
  const char kind = static_cast<char>(data[1]);
  reader.take(2);
  const int width = checked_dimension(reader, "width");
  const int height = checked_dimension(reader, "height");
  const std::size_t count = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);

  if (kind == '1' || kind == '4') {
    std::vector<std::uint8_t> bits(count);
    if (kind == '1') {
      for (auto& b : bits) b = static_cast<std::uint8_t>(reader.read_plain_bit());
    } else {
      reader.expect_single_whitespace();
      const std::size_t stride = (static_cast<std::size_t>(width) + 7) / 8;
      const auto raw = reader.take(stride * height);
      for (int r = 0; r < height; ++r) {
        for (int c = 0; c < width; ++c) {
          const auto byte = raw[r * stride + c / 8];
          bits[static_cast<std::size_t>(r) * width + c] = (byte >> (7 - c % 8)) & 1u;
        }
      }
    }
    return BinaryImage(width, height, std::move(bits));
  }

  const unsigned maxval = reader.read_uint("maxval");
  if (maxval == 0 || maxval > 65535) reader.fail("maxval must lie in [1, 65535]");
  const bool plain = kind == '2' || kind == '3';
  if (kind == '2' || kind == '5') {
    return GrayImage(width, height, read_samples(reader, plain, count, maxval));
  }
  return ColorImage(width, height, read_samples(reader, plain, 3 * count, maxval));
}

LoadedImage decode_png(std::span<const std::uint8_t> data) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&image, data.data(), data.size())) {
    throw FormatError(std::string("PNG header: ") + image.message, 0);
  }
  const bool color = (image.format & PNG_FORMAT_FLAG_COLOR) != 0;
  image.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  std::vector<std::uint8_t> buffer(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, buffer.data(), 0, nullptr)) {
    const std::string message = image.message;
    png_image_free(&image);
    throw FormatError("PNG data: " + message, 0);
  }
  const int width = static_cast<int>(image.width);
  const int height = static_cast<int>(image.height);
  if (color) return ColorImage(width, height, std::move(buffer));
  return GrayImage(width, height, std::move(buffer));
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<std::uint8_t> data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("error reading " + path.string());
  return data;
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
  if (!out) throw IoError("error writing " + path.string());
}

LoadedImage load_image(const std::filesystem::path& path) {
  const auto data = read_file(path);
  static constexpr std::array<std::uint8_t, 4> kPngMagic{0x89, 'P', 'N', 'G'};
  if (data.size() >= 4 && std::equal(kPngMagic.begin(), kPngMagic.end(), data.begin())) {
    return decode_png(data);
  }
  return decode_netpbm(data);
}

std::vector<std::uint8_t> encode_pbm(const BinaryImage& image, NetpbmEncoding encoding) {
  std::vector<std::uint8_t> out;
  const int w = image.width();
  const int h = image.height();
  append(out, std::string(encoding == NetpbmEncoding::Plain ? "P1\n" : "P4\n") + std::to_string(w) +
                  " " + std::to_string(h) + "\n");
  if (encoding == NetpbmEncoding::Plain) {
    std::vector<std::string> row(static_cast<std::size_t>(w));
    for (int r = 0; r < h; ++r) {
      for (int c = 0; c < w; ++c) row[c] = image.at(r, c) ? "1" : "0";
      append_plain_row(out, row, false);
    }
    return out;
  }
  const std::size_t stride = (static_cast<std::size_t>(w) + 7) / 8;
  for (int r = 0; r < h; ++r) {
    std::vector<std::uint8_t> packed(stride, 0);
    for (int c = 0; c < w; ++c) {
      if (image.at(r, c)) packed[c / 8] |= static_cast<std::uint8_t>(0x80u >> (c % 8));
    }
    out.insert(out.end(), packed.begin(), packed.end());
  }
  return out;
}

std::vector<std::uint8_t> encode_pgm(const GrayImage& image, NetpbmEncoding encoding) {
  std::vector<std::uint8_t> out;
  const int w = image.width();
  const int h = image.height();
  append(out, std::string(encoding == NetpbmEncoding::Plain ? "P2\n" : "P5\n") + std::to_string(w) +
                  " " + std::to_string(h) + "\n255\n");
  if (encoding == NetpbmEncoding::Plain) {
    std::vector<std::string> row(static_cast<std::size_t>(w));
    for (int r = 0; r < h; ++r) {
      for (int c = 0; c < w; ++c) row[c] = std::to_string(image.at(r, c));
      append_plain_row(out, row, true);
    }
    return out;
  }
  out.insert(out.end(), image.pixels().begin(), image.pixels().end());
  return out;
}

void save_pbm(const BinaryImage& image, const std::filesystem::path& path, NetpbmEncoding encoding) {
  write_file(path, encode_pbm(image, encoding));
}

void save_pgm(const GrayImage& image, const std::filesystem::path& path, NetpbmEncoding encoding) {
  write_file(path, encode_pgm(image, encoding));
}

GrayImage to_grayscale(const ColorImage& image) {
  const auto rgb = image.rgb();
  std::vector<std::uint8_t> gray(rgb.size() / 3);
  for (std::size_t i = 0; i < gray.size(); ++i) {
    const double luma = 0.2989 * rgb[3 * i] + 0.5870 * rgb[3 * i + 1] + 0.1140 * rgb[3 * i + 2];
    gray[i] = static_cast<std::uint8_t>(std::clamp(std::round(luma), 0.0, 255.0));
  }
  return GrayImage(image.width(), image.height(), std::move(gray));
}

GrayImage to_grayscale(const LoadedImage& image) {
  return std::visit(
      [](const auto& img) -> GrayImage {
        using T = std::decay_t<decltype(img)>;
        if constexpr (std::is_same_v<T, GrayImage>) {
          return img;
        } else if constexpr (std::is_same_v<T, ColorImage>) {
          return to_grayscale(img);
        } else {
          std::vector<std::uint8_t> px(img.bits().size());
          std::transform(img.bits().begin(), img.bits().end(), px.begin(),
                         [](std::uint8_t b) { return static_cast<std::uint8_t>(b ? 0 : 255); });
          return GrayImage(img.width(), img.height(), std::move(px));
        }
      },
      image);
}

BinaryImage binarize(const GrayImage& image, double threshold) {
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw ArgumentError("binarization threshold must lie in [0, 1], got " + std::to_string(threshold));
  }
  const double cut = threshold * 255.0;
  std::vector<std::uint8_t> bits(image.pixels().size());
  std::transform(image.pixels().begin(), image.pixels().end(), bits.begin(),
                 [cut](std::uint8_t v) { return static_cast<std::uint8_t>(v > cut ? 0 : 1); });
  return BinaryImage(image.width(), image.height(), std::move(bits));
}

double otsu_threshold(const GrayImage& image) {
  if (image.empty()) throw ArgumentError("otsu_threshold needs a non-empty image");
  std::array<double, 256> hist{};
  for (auto v : image.pixels()) hist[v] += 1.0;
  const double total = static_cast<double>(image.pixels().size());

  double total_sum = 0.0;
  for (int i = 0; i < 256; ++i) total_sum += i * hist[i];

  double best = 0.0;
  int best_bin = -1;
  double below_count = 0.0;
  double below_sum = 0.0;
  for (int bin = 0; bin < 256; ++bin) {
    below_count += hist[bin];
    below_sum += bin * hist[bin];
    const double above_count = total - below_count;
    if (below_count == 0.0 || above_count == 0.0) continue;
    const double mean_below = below_sum / below_count;
    const double mean_above = (total_sum - below_sum) / above_count;
    const double diff = mean_below - mean_above;
    const double between = below_count * above_count * diff * diff;
    if (between > best) {
      best = between;
      best_bin = bin;
    }
  }
  if (best_bin < 0) return 0.5;
  return best_bin / 255.0;
}

GrayImage median_filter_3x3(const GrayImage& image) {
  const int w = image.width();
  const int h = image.height();
  GrayImage out(w, h);
  std::array<std::uint8_t, 9> window{};
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      std::size_t k = 0;
      for (int dr = -1; dr <= 1; ++dr) {
        const int rr = std::clamp(r + dr, 0, h - 1);
        for (int dc = -1; dc <= 1; ++dc) {
          window[k++] = image.at(rr, std::clamp(c + dc, 0, w - 1));
        }
      }
      std::nth_element(window.begin(), window.begin() + 4, window.end());
      out.at(r, c) = window[4];
    }
  }
  return out;
}

}  // namespace fontocr
