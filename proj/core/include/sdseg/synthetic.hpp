#pragma once

#include <cstdint>
#include <vector>

#include "sdseg/image.hpp"

namespace sdseg {

/// Parameters of the synthetic screen-content generator.
///
/// Each sample is a smooth background (low-frequency cosine mixture with a
/// decaying spectrum, or a low-order polynomial) with crisp text-like
/// strokes, rules, box outlines and the occasional filled box added at a
/// signed contrast, plus mild Gaussian noise. Ground truth is the set of stroke pixels; it is empty when the
/// contrast is zero.
struct SynthOptions {
  int block_size = 64;
  double min_contrast = 30.0;
  double max_contrast = 80.0;
  int min_thickness = 1;
  int max_thickness = 3;
  int min_strokes = 2;
  int max_strokes = 6;
  /// Strokes are dropped once they would push the foreground past this
  /// fraction of the block.
  double max_foreground_fraction = 0.14;
  /// Standard deviation of additive Gaussian pixel noise (0 = none).
  double noise_sigma = 1.0;
  /// Chance that a stroke is a filled rectangle (button, highlight bar).
  double filled_box_probability = 0.15;
  /// Highest u + v used by cosine-mixture backgrounds.
  int background_max_frequency = 5;

  /// Throws ConfigError on inverted ranges or non-positive sizes.
  void validate() const;
};

struct SyntheticSample {
  ImagePlane image;
  SegmentationMask truth;
};

/// Sample `index` of the suite identified by `seed`. Depends only on
/// (options, seed, index), not on how many samples are generated.
SyntheticSample generate_sample(const SynthOptions& options, std::uint64_t seed,
                                std::uint64_t index);

std::vector<SyntheticSample> generate_suite(const SynthOptions& options,
                                            std::uint64_t seed, int count);

/// The fixed synthetic fixture suite used by the acceptance tests: 50
/// blocks, seed 2017, default options.
std::vector<SyntheticSample> fixture_suite();

}  // namespace sdseg
