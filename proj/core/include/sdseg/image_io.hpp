#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "sdseg/image.hpp"

namespace sdseg {

/// 8-bit interleaved RGB image, row-major.
struct RgbImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> data;  // width * height * 3
};

/// Reads an 8-bit grayscale or RGB image (PNG, binary or ASCII PGM/PPM) as
/// luminance. Colour input is converted with BT.601 weights; alpha is
/// dropped. Throws IoError on unreadable files, unknown formats and bit
/// depths other than 8.
ImagePlane read_luminance(const std::filesystem::path& path);

/// Reads a mask image; any luminance above 127 is foreground.
SegmentationMask read_mask(const std::filesystem::path& path);

/// Writes 8-bit grayscale. PNG unless the extension is .pgm.
void write_gray(const std::filesystem::path& path, int width, int height,
                std::span<const std::uint8_t> pixels);

/// Luminance rounded and clamped to [0, 255].
void write_luminance(const std::filesystem::path& path, const ImagePlane& image);

/// Single-channel mask, foreground = 255, background = 0.
void write_mask(const std::filesystem::path& path, const SegmentationMask& mask);

void write_rgb_png(const std::filesystem::path& path, const RgbImage& image);

/// Grayscale copy of `image` with foreground pixels blended towards red.
RgbImage make_overlay(const ImagePlane& image, const SegmentationMask& mask);

}  // namespace sdseg
