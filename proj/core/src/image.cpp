#include "sdseg/image.hpp"

#include <algorithm>
#include <cmath>

#include "sdseg/errors.hpp"

namespace sdseg {

ImagePlane::ImagePlane(int w, int h, double fill)
    : width(w),
      height(h),
      pixels(static_cast<std::size_t>(std::max(w, 0)) *
                 static_cast<std::size_t>(std::max(h, 0)),
             fill) {}

void ImagePlane::validate() const {
  if (width < 1 || height < 1) throw InputError("image has empty dimensions");
  if (pixels.size() != static_cast<std::size_t>(width) * height) {
    throw InputError("image pixel count does not match its dimensions");
  }
  for (double p : pixels) {
    if (!std::isfinite(p)) throw InputError("image contains non-finite pixels");
  }
}

SegmentationMask::SegmentationMask(int w, int h)
    : width(w),
      height(h),
      bits(static_cast<std::size_t>(std::max(w, 0)) *
               static_cast<std::size_t>(std::max(h, 0)),
           0) {}

std::size_t SegmentationMask::foreground_count() const {
  return static_cast<std::size_t>(
      std::count_if(bits.begin(), bits.end(), [](auto b) { return b != 0; }));
}

}  // namespace sdseg
