#include "sdseg/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <string>

#include "sdseg/block_segmenter.hpp"
#include "sdseg/errors.hpp"

namespace sdseg {
namespace {

std::vector<std::uint8_t> read_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

bool is_png(const std::vector<std::uint8_t>& bytes) {
  static constexpr std::array<std::uint8_t, 8> kSig{0x89, 'P', 'N', 'G',
                                                     '\r', '\n', 0x1a, '\n'};
  return bytes.size() >= kSig.size() &&
         std::equal(kSig.begin(), kSig.end(), bytes.begin());
}

ImagePlane decode_png(const std::vector<std::uint8_t>& bytes,
                      const std::filesystem::path& path) {
  png_image img{};
  img.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&img, bytes.data(), bytes.size())) {
    throw IoError(path.string() + ": " + img.message);
  }
  if ((img.format & PNG_FORMAT_FLAG_LINEAR) != 0) {
    png_image_free(&img);
    throw IoError(path.string() + ": unsupported bit depth (16-bit PNG)");
  }
  const bool colour = (img.format & PNG_FORMAT_FLAG_COLOR) != 0;
  img.format = colour ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  const int channels = colour ? 3 : 1;
  std::vector<std::uint8_t> buf(PNG_IMAGE_SIZE(img));
  if (!png_image_finish_read(&img, nullptr, buf.data(), 0, nullptr)) {
    throw IoError(path.string() + ": " + img.message);
  }

  ImagePlane plane(static_cast<int>(img.width), static_cast<int>(img.height));
  for (std::size_t i = 0; i < plane.pixels.size(); ++i) {
    const std::uint8_t* p = &buf[i * channels];
    plane.pixels[i] = colour ? luma_bt601(p[0], p[1], p[2]) : p[0];
  }
  return plane;
}

// Netpbm header tokenizer that skips whitespace and '#' comments.
class PnmCursor {
 public:
  PnmCursor(const std::vector<std::uint8_t>& b, const std::filesystem::path& p)
      : bytes_(b), path_(p) {}

  long next_int() {
    skip_space();
    if (pos_ >= bytes_.size() || !std::isdigit(bytes_[pos_])) {
      throw IoError(path_.string() + ": malformed netpbm header");
    }
    long v = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      v = v * 10 + (bytes_[pos_++] - '0');
      if (v > 1'000'000'000L) throw IoError(path_.string() + ": value too large");
    }
    return v;
  }
  // Exactly one whitespace byte separates the header from binary data.
  void skip_single_space() { ++pos_; }
  std::size_t pos() const { return pos_; }

 private:
  void skip_space() {
    while (pos_ < bytes_.size()) {
      if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  const std::vector<std::uint8_t>& bytes_;
  const std::filesystem::path& path_;
  std::size_t pos_ = 2;
};

ImagePlane decode_pnm(const std::vector<std::uint8_t>& bytes,
                      const std::filesystem::path& path) {
  const char kind = static_cast<char>(bytes[1]);
  const bool ascii = kind == '2' || kind == '3';
  const bool colour = kind == '3' || kind == '6';
  PnmCursor cur(bytes, path);
  const long w = cur.next_int();
  const long h = cur.next_int();
  const long maxval = cur.next_int();
  if (w < 1 || h < 1 || w > 65535 || h > 65535) {
    throw IoError(path.string() + ": invalid netpbm dimensions");
  }
  if (maxval != 255) {
    throw IoError(path.string() + ": unsupported bit depth (maxval " +
                  std::to_string(maxval) + ")");
  }
  const int channels = colour ? 3 : 1;
  const std::size_t samples = static_cast<std::size_t>(w) * h * channels;
  std::vector<double> raw(samples);
  if (ascii) {
    for (auto& s : raw) s = static_cast<double>(cur.next_int());
  } else {
    cur.skip_single_space();
    if (bytes.size() < cur.pos() + samples) {
      throw IoError(path.string() + ": truncated netpbm data");
    }
    for (std::size_t i = 0; i < samples; ++i) raw[i] = bytes[cur.pos() + i];
  }

  ImagePlane plane(static_cast<int>(w), static_cast<int>(h));
  for (std::size_t i = 0; i < plane.pixels.size(); ++i) {
    plane.pixels[i] = colour ? luma_bt601(raw[3 * i], raw[3 * i + 1], raw[3 * i + 2])
                             : raw[i];
  }
  return plane;
}

bool has_extension(const std::filesystem::path& path, const char* ext) {
  std::string e = path.extension().string();
  std::transform(e.begin(), e.end(), e.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return e == ext;
}

void write_png(const std::filesystem::path& path, int width, int height,
               std::uint32_t format, const std::uint8_t* data) {
  png_image img{};
  img.version = PNG_IMAGE_VERSION;
  img.width = static_cast<png_uint_32>(width);
  img.height = static_cast<png_uint_32>(height);
  img.format = format;
  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&img, nullptr, &size, 0, data, 0, nullptr)) {
    throw IoError(path.string() + ": " + img.message);
  }
  std::vector<std::uint8_t> out(size);
  if (!png_image_write_to_memory(&img, out.data(), &size, 0, data, 0, nullptr)) {
    throw IoError(path.string() + ": " + img.message);
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot write " + path.string());
  f.write(reinterpret_cast<const char*>(out.data()),
          static_cast<std::streamsize>(size));
  if (!f) throw IoError("failed writing " + path.string());
}

void write_pgm(const std::filesystem::path& path, int width, int height,
               std::span<const std::uint8_t> pixels) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot write " + path.string());
  f << "P5\n" << width << ' ' << height << "\n255\n";
  f.write(reinterpret_cast<const char*>(pixels.data()),
          static_cast<std::streamsize>(pixels.size()));
  if (!f) throw IoError("failed writing " + path.string());
}

}  // namespace

ImagePlane read_luminance(const std::filesystem::path& path) {
  const std::vector<std::uint8_t> bytes = read_bytes(path);
  if (is_png(bytes)) return decode_png(bytes, path);
  if (bytes.size() >= 2 && bytes[0] == 'P' &&
      (bytes[1] == '2' || bytes[1] == '3' || bytes[1] == '5' || bytes[1] == '6')) {
    return decode_pnm(bytes, path);
  }
  throw IoError(path.string() + ": unrecognized image format");
}

SegmentationMask read_mask(const std::filesystem::path& path) {
  const ImagePlane plane = read_luminance(path);
  SegmentationMask mask(plane.width, plane.height);
  for (std::size_t i = 0; i < plane.pixels.size(); ++i) {
    mask.bits[i] = plane.pixels[i] > 127.0 ? 1 : 0;
  }
  return mask;
}

void write_gray(const std::filesystem::path& path, int width, int height,
                std::span<const std::uint8_t> pixels) {
  if (pixels.size() != static_cast<std::size_t>(width) * height) {
    throw DimensionError("pixel buffer does not match image size");
  }
  if (has_extension(path, ".pgm")) {
    write_pgm(path, width, height, pixels);
  } else {
    write_png(path, width, height, PNG_FORMAT_GRAY, pixels.data());
  }
}

void write_luminance(const std::filesystem::path& path, const ImagePlane& image) {
  std::vector<std::uint8_t> px(image.pixels.size());
  for (std::size_t i = 0; i < px.size(); ++i) {
    px[i] = static_cast<std::uint8_t>(std::clamp(std::round(image.pixels[i]), 0.0, 255.0));
  }
  write_gray(path, image.width, image.height, px);
}

void write_mask(const std::filesystem::path& path, const SegmentationMask& mask) {
  std::vector<std::uint8_t> px(mask.bits.size());
  std::transform(mask.bits.begin(), mask.bits.end(), px.begin(),
                 [](std::uint8_t b) -> std::uint8_t { return b ? 255 : 0; });
  write_gray(path, mask.width, mask.height, px);
}

void write_rgb_png(const std::filesystem::path& path, const RgbImage& image) {
  if (image.data.size() != static_cast<std::size_t>(image.width) * image.height * 3) {
    throw DimensionError("RGB buffer does not match image size");
  }
  write_png(path, image.width, image.height, PNG_FORMAT_RGB, image.data.data());
}

RgbImage make_overlay(const ImagePlane& image, const SegmentationMask& mask) {
  if (image.width != mask.width || image.height != mask.height) {
    throw DimensionError("overlay: image and mask sizes differ");
  }
  RgbImage out{image.width, image.height,
               std::vector<std::uint8_t>(image.pixels.size() * 3)};
  for (std::size_t i = 0; i < image.pixels.size(); ++i) {
    const double g = std::clamp(std::round(image.pixels[i]), 0.0, 255.0);
    double r = g, gr = g, b = g;
    if (mask.bits[i]) {
      r = 0.4 * g + 0.6 * 255.0;
      gr = 0.4 * g;
      b = 0.4 * g;
    }
    out.data[3 * i] = static_cast<std::uint8_t>(std::lround(r));
    out.data[3 * i + 1] = static_cast<std::uint8_t>(std::lround(gr));
    out.data[3 * i + 2] = static_cast<std::uint8_t>(std::lround(b));
  }
  return out;
}

}  // namespace sdseg
