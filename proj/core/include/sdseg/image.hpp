#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace sdseg {

/// Single-channel luminance image, row-major, values nominally in [0, 255].
struct ImagePlane {
  int width = 0;
  int height = 0;
  std::vector<double> pixels;

  ImagePlane() = default;
  ImagePlane(int w, int h, double fill = 0.0);

  double& at(int row, int col) {
    return pixels[static_cast<std::size_t>(row) * width + col];
  }
  double at(int row, int col) const {
    return pixels[static_cast<std::size_t>(row) * width + col];
  }

  /// Throws InputError on empty dimensions, size mismatch, or non-finite
  /// pixels.
  void validate() const;
};

/// Binary mask, 1 = foreground.
struct SegmentationMask {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> bits;

  SegmentationMask() = default;
  SegmentationMask(int w, int h);

  std::uint8_t& at(int row, int col) {
    return bits[static_cast<std::size_t>(row) * width + col];
  }
  std::uint8_t at(int row, int col) const {
    return bits[static_cast<std::size_t>(row) * width + col];
  }

  std::size_t foreground_count() const;

  friend bool operator==(const SegmentationMask&,
                         const SegmentationMask&) = default;
};

}  // namespace sdseg
