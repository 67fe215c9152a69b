#include "sdseg/synthetic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "sdseg/errors.hpp"

namespace sdseg {
namespace {

// SplitMix64: tiny, fully specified, identical output on every platform
// (unlike the std:: distributions).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  int integer(int lo, int hi) {  // inclusive
    return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1));
  }
  bool coin() { return (next() >> 63) != 0; }
  double gaussian() {
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::uint64_t state_;
};

class Canvas {
 public:
  explicit Canvas(int n) : n_(n), bits_(static_cast<std::size_t>(n) * n, 0) {}

  void brush(int r, int c, int t) {
    for (int dr = 0; dr < t; ++dr) {
      for (int dc = 0; dc < t; ++dc) set(r + dr, c + dc);
    }
  }
  void line(int r0, int c0, int r1, int c1, int t) {
    const int steps = std::max(std::abs(r1 - r0), std::abs(c1 - c0));
    for (int s = 0; s <= steps; ++s) {
      const double a = steps == 0 ? 0.0 : static_cast<double>(s) / steps;
      brush(static_cast<int>(std::lround(r0 + a * (r1 - r0))),
            static_cast<int>(std::lround(c0 + a * (c1 - c0))), t);
    }
  }
  std::size_t count() const {
    return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), 1));
  }
  void merge(const Canvas& o) {
    for (std::size_t i = 0; i < bits_.size(); ++i) bits_[i] |= o.bits_[i];
  }
  std::size_t union_count(const Canvas& o) const {
    std::size_t c = 0;
    for (std::size_t i = 0; i < bits_.size(); ++i) c += (bits_[i] | o.bits_[i]);
    return c;
  }
  bool at(int r, int c) const {
    return bits_[static_cast<std::size_t>(r) * n_ + c] != 0;
  }

 private:
  void set(int r, int c) {
    if (r >= 0 && r < n_ && c >= 0 && c < n_) {
      bits_[static_cast<std::size_t>(r) * n_ + c] = 1;
    }
  }

  int n_;
  std::vector<std::uint8_t> bits_;
};

// A seven-segment style glyph inside an h x w box at (r, c).
void draw_glyph(Canvas& cv, Rng& rng, int r, int c, int h, int w, int t) {
  const int mid = r + h / 2;
  const std::array<std::array<int, 4>, 7> segments{{
      {r, c, r, c + w},              // top
      {mid, c, mid, c + w},          // middle
      {r + h, c, r + h, c + w},      // bottom
      {r, c, mid, c},                // upper left
      {r, c + w, mid, c + w},        // upper right
      {mid, c, r + h, c},            // lower left
      {mid, c + w, r + h, c + w},    // lower right
  }};
  int drawn = 0;
  for (const auto& s : segments) {
    if (rng.uniform() < 0.55) {
      cv.line(s[0], s[1], s[2], s[3], t);
      ++drawn;
    }
  }
  if (drawn < 2) {
    cv.line(segments[0][0], segments[0][1], segments[0][2], segments[0][3], t);
    cv.line(segments[3][0], segments[3][1], segments[3][2], segments[3][3], t);
  }
}

Canvas random_stroke(Rng& rng, int n, int t, double filled_box_probability) {
  Canvas cv(n);
  const int margin = 2;
  const int hi = n - margin - t;
  if (rng.uniform() < filled_box_probability) {
    const int h = rng.integer(n / 8, n / 3);
    const int w = rng.integer(n / 6, n / 2);
    const int r = rng.integer(margin, std::max(margin, n - margin - h));
    const int c = rng.integer(margin, std::max(margin, n - margin - w));
    for (int dr = 0; dr < h; ++dr) cv.line(r + dr, c, r + dr, c + w - 1, 1);
    return cv;
  }
  switch (rng.integer(0, 4)) {
    case 0: {  // horizontal rule
      const int r = rng.integer(margin, hi);
      const int c0 = rng.integer(margin, n / 2);
      const int len = rng.integer(n / 6, n / 2);
      cv.line(r, c0, r, std::min(c0 + len, hi), t);
      break;
    }
    case 1: {  // vertical rule
      const int c = rng.integer(margin, hi);
      const int r0 = rng.integer(margin, n / 2);
      const int len = rng.integer(n / 6, n / 2);
      cv.line(r0, c, std::min(r0 + len, hi), c, t);
      break;
    }
    case 2: {  // slanted line
      const int r0 = rng.integer(margin, hi);
      const int c0 = rng.integer(margin, hi);
      const int r1 = rng.integer(margin, hi);
      const int c1 = rng.integer(margin, hi);
      cv.line(r0, c0, r1, c1, t);
      break;
    }
    case 3: {  // box outline
      const int h = rng.integer(n / 8, n / 3);
      const int w = rng.integer(n / 8, n / 3);
      const int r = rng.integer(margin, std::max(margin, hi - h));
      const int c = rng.integer(margin, std::max(margin, hi - w));
      cv.line(r, c, r, c + w, t);
      cv.line(r + h, c, r + h, c + w, t);
      cv.line(r, c, r + h, c, t);
      cv.line(r, c + w, r + h, c + w, t);
      break;
    }
    default: {  // glyph
      const int h = rng.integer(n / 8, n / 4);
      const int w = std::max(3, h * 2 / 3);
      const int r = rng.integer(margin, std::max(margin, hi - h));
      const int c = rng.integer(margin, std::max(margin, hi - w));
      draw_glyph(cv, rng, r, c, h, w, t);
      break;
    }
  }
  return cv;
}

std::vector<double> smooth_background(Rng& rng, int n, int max_freq,
                                      double& level) {
  std::vector<double> bg(static_cast<std::size_t>(n) * n);
  level = rng.uniform(70.0, 185.0);
  const double center = (n - 1) / 2.0;

  if (rng.coin()) {
    // Cosine mixture over frequencies with 1 <= u + v <= max_freq.
    struct Term {
      int u, v;
      double amp;
    };
    std::vector<Term> terms;
    const int count = rng.integer(2, 4);
    double total = 0.0;
    for (int i = 0; i < count; ++i) {
      const int d = rng.integer(1, max_freq);
      const int u = rng.integer(0, d);
      // Amplitude falls off with frequency, like real smooth gradients.
      const double amp = (rng.coin() ? 1.0 : -1.0) * rng.uniform(5.0, 20.0) *
                         std::min(1.0, 2.0 / d);
      terms.push_back({u, d - u, amp});
      total += std::abs(amp);
    }
    const double shrink = total > 40.0 ? 40.0 / total : 1.0;
    for (int x = 0; x < n; ++x) {
      for (int y = 0; y < n; ++y) {
        double v = level;
        for (const auto& t : terms) {
          v += shrink * t.amp *
               std::cos((2.0 * x + 1.0) * std::numbers::pi * t.u / (2.0 * n)) *
               std::cos((2.0 * y + 1.0) * std::numbers::pi * t.v / (2.0 * n));
        }
        bg[static_cast<std::size_t>(x) * n + y] = v;
      }
    }
  } else {
    // Low-order polynomial in normalized coordinates in [-1, 1].
    const double gx = rng.uniform(-16.0, 16.0);
    const double gy = rng.uniform(-16.0, 16.0);
    const double qxx = rng.uniform(-8.0, 8.0);
    const double qyy = rng.uniform(-8.0, 8.0);
    const double qxy = rng.uniform(-6.0, 6.0);
    for (int x = 0; x < n; ++x) {
      const double a = (x - center) / center;
      for (int y = 0; y < n; ++y) {
        const double b = (y - center) / center;
        bg[static_cast<std::size_t>(x) * n + y] =
            level + gx * a + gy * b + qxx * a * a + qyy * b * b + qxy * a * b;
      }
    }
  }
  return bg;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  Rng r(seed ^ (0xd1b54a32d192ed03ULL * (index + 1)));
  r.next();
  return r.next();
}

}  // namespace

void SynthOptions::validate() const {
  if (block_size < 8) throw ConfigError("synthetic block_size must be >= 8");
  if (min_contrast < 0 || max_contrast < min_contrast || max_contrast > 255) {
    throw ConfigError("synthetic contrast range must satisfy 0 <= min <= max <= 255");
  }
  if (min_thickness < 1 || max_thickness < min_thickness ||
      max_thickness > block_size / 4) {
    throw ConfigError("synthetic thickness range is invalid");
  }
  if (min_strokes < 1 || max_strokes < min_strokes) {
    throw ConfigError("synthetic stroke count range is invalid");
  }
  if (!(max_foreground_fraction > 0) || max_foreground_fraction > 1) {
    throw ConfigError("max_foreground_fraction must lie in (0, 1]");
  }
  if (!(noise_sigma >= 0)) throw ConfigError("noise_sigma must be >= 0");
  if (!(filled_box_probability >= 0) || filled_box_probability > 1) {
    throw ConfigError("filled_box_probability must lie in [0, 1]");
  }
  if (background_max_frequency < 1 ||
      background_max_frequency > 2 * (block_size - 1)) {
    throw ConfigError("background_max_frequency is out of range");
  }
}

SyntheticSample generate_sample(const SynthOptions& options, std::uint64_t seed,
                                std::uint64_t index) {
  options.validate();
  Rng rng(mix_seed(seed, index));
  const int n = options.block_size;

  double level = 0.0;
  const std::vector<double> bg = smooth_background(rng, n, options.background_max_frequency, level);
  const double magnitude = rng.uniform(options.min_contrast, options.max_contrast);
  const double contrast = level > 127.5 ? -magnitude : magnitude;
  const int thickness = rng.integer(options.min_thickness, options.max_thickness);
  const int wanted = rng.integer(options.min_strokes, options.max_strokes);

  const auto budget = static_cast<std::size_t>(
      options.max_foreground_fraction * static_cast<double>(n) * n);
  Canvas strokes(n);
  int placed = 0;
  for (int attempt = 0; attempt < 4 * wanted && placed < wanted; ++attempt) {
    const Canvas s = random_stroke(rng, n, thickness, options.filled_box_probability);
    if (strokes.union_count(s) > budget) continue;
    strokes.merge(s);
    ++placed;
  }

  SyntheticSample out{ImagePlane(n, n), SegmentationMask(n, n)};
  const bool visible = magnitude > 0.0;
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      double v = bg[static_cast<std::size_t>(r) * n + c];
      const bool fg = strokes.at(r, c);
      if (fg) v += contrast;
      if (options.noise_sigma > 0) v += options.noise_sigma * rng.gaussian();
      out.image.at(r, c) = std::clamp(std::round(v), 0.0, 255.0);
      out.truth.at(r, c) = (fg && visible) ? 1 : 0;
    }
  }
  return out;
}

std::vector<SyntheticSample> generate_suite(const SynthOptions& options,
                                            std::uint64_t seed, int count) {
  if (count < 1) throw ConfigError("synthetic count must be >= 1");
  std::vector<SyntheticSample> suite;
  suite.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    suite.push_back(generate_sample(options, seed, static_cast<std::uint64_t>(i)));
  }
  return suite;
}

std::vector<SyntheticSample> fixture_suite() {
  return generate_suite(SynthOptions{}, 2017, 50);
}

}  // namespace sdseg
