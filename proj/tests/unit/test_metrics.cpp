#include <doctest.h>

#include <algorithm>
#include <stdexcept>

#include "oracles.hpp"
#include "sdseg/errors.hpp"
#include "sdseg/metrics.hpp"
#include "sdseg/synthetic.hpp"

using namespace sdseg;

namespace {

SegmentationMask line_mask(int w, int h, int row, int c0, int c1, int thick) {
  SegmentationMask m(w, h);
  for (int r = row; r < row + thick; ++r) {
    for (int c = c0; c < c1; ++c) m.at(r, c) = 1;
  }
  return m;
}

SegmentationMask random_mask(testing::TestRng& rng, int w, int h, double p) {
  SegmentationMask m(w, h);
  for (auto& b : m.bits) b = rng.uniform(0, 1) < p ? 1 : 0;
  return m;
}

}  // namespace

TEST_CASE("confusion worked examples") {
  const auto t = line_mask(64, 64, 5, 0, 10, 1);
  const auto c = confusion(t, t);
  CHECK(c.tp == 10);
  CHECK(c.fp == 0);
  CHECK(c.fn == 0);
  CHECK(c.total() == 4096);

  const auto seven = line_mask(64, 64, 9, 3, 10, 1);
  const auto e = confusion(SegmentationMask(64, 64), seven);
  CHECK(e.tp == 0);
  CHECK(e.fn == 7);
  CHECK(e.fp == 0);
}

TEST_CASE("shifted 3-pixel line matches the brute-force counter") {
  const auto truth = line_mask(64, 64, 20, 10, 50, 3);
  const auto pred = line_mask(64, 64, 21, 10, 50, 3);
  const auto c = confusion(pred, truth);
  const auto o = testing::brute_confusion(pred, truth);
  CHECK(c.tp == o.tp);
  CHECK(c.fp == o.fp);
  CHECK(c.fn == o.fn);
  CHECK(c.tn == o.tn);
  CHECK(c.tp == 80);
  CHECK(c.fp == 40);
}

TEST_CASE("random masks match the brute-force counter") {
  testing::TestRng rng(41);
  for (int t = 0; t < 20; ++t) {
    const auto a = random_mask(rng, 37, 23, 0.3);
    const auto b = random_mask(rng, 37, 23, 0.2);
    const auto c = confusion(a, b);
    const auto o = testing::brute_confusion(a, b);
    CHECK(c == ConfusionCounts{o.tp, o.fp, o.fn, o.tn});
    // tp is symmetric, fp and fn swap.
    const auto r = confusion(b, a);
    CHECK(r.tp == c.tp);
    CHECK(r.fp == c.fn);
    CHECK(r.fn == c.fp);
  }
}

TEST_CASE("mismatched sizes") {
  CHECK_THROWS_AS(confusion(SegmentationMask(4, 4), SegmentationMask(4, 5)), DimensionError);
  CHECK_THROWS_AS(confusion(SegmentationMask(8, 2), SegmentationMask(4, 4)), DimensionError);
}

TEST_CASE("rates worked examples") {
  auto r = precision_recall_f1({50, 0, 0, 100});
  CHECK(r.precision == 1.0);
  CHECK(r.recall == 1.0);
  CHECK(r.f1 == 1.0);
  r = precision_recall_f1({1, 1, 1, 0});
  CHECK(r.precision == 0.5);
  CHECK(r.recall == 0.5);
  CHECK(r.f1 == 0.5);
  r = precision_recall_f1({3, 1, 5, 0});
  CHECK(r.precision == 0.75);
  CHECK(r.recall == 0.375);
  CHECK(r.f1 == doctest::Approx(0.5));
}

TEST_CASE("zero-denominator conventions") {
  // Nothing predicted, nothing there: perfect.
  auto r = precision_recall_f1({0, 0, 0, 4096});
  CHECK(r.precision == 1.0);
  CHECK(r.recall == 1.0);
  CHECK(r.f1 == 1.0);
  // Nothing predicted, something missed.
  r = precision_recall_f1({0, 0, 7, 10});
  CHECK(r.precision == 0.0);
  CHECK(r.recall == 0.0);
  CHECK(r.f1 == 0.0);
  // Something predicted, nothing there.
  r = precision_recall_f1({0, 9, 0, 10});
  CHECK(r.precision == 0.0);
  CHECK(r.recall == 0.0);
  CHECK(r.f1 == 0.0);
}

TEST_CASE("rate bounds and perfect prediction") {
  testing::TestRng rng(42);
  for (int t = 0; t < 200; ++t) {
    const ConfusionCounts c{static_cast<std::uint64_t>(rng.integer(0, 20)),
                            static_cast<std::uint64_t>(rng.integer(0, 20)),
                            static_cast<std::uint64_t>(rng.integer(0, 20)),
                            static_cast<std::uint64_t>(rng.integer(0, 20))};
    const auto r = precision_recall_f1(c);
    for (double v : {r.precision, r.recall, r.f1}) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
    if (r.precision > 0 && r.recall > 0) {
      CHECK(r.f1 <= std::max(r.precision, r.recall) + 1e-15);
      CHECK(r.f1 >= std::min(r.precision, r.recall) - 1e-15);
    }
    CHECK((r.f1 == 1.0) == (c.fp == 0 && c.fn == 0));
  }
}

namespace {

DatasetItem constant_item(const std::string& id, SegmentationMask truth) {
  return {id, [truth] { return LabeledImage{ImagePlane(truth.width, truth.height, 0.0), truth}; }};
}

}  // namespace

TEST_CASE("aggregate of identical items equals the item") {
  const auto truth = line_mask(8, 8, 2, 1, 6, 1);
  const std::vector<DatasetItem> items{constant_item("a", truth), constant_item("b", truth)};
  const auto predict = [](const ImagePlane& img) {
    return line_mask(img.width, img.height, 2, 0, 4, 1);
  };
  const auto rep = evaluate_dataset(items, predict);
  REQUIRE(rep.per_image.size() == 2);
  CHECK(rep.macro.precision == rep.per_image[0].rates.precision);
  CHECK(rep.macro.recall == rep.per_image[0].rates.recall);
  CHECK(rep.macro.f1 == rep.per_image[0].rates.f1);
  CHECK(rep.micro.f1 == doctest::Approx(rep.per_image[0].rates.f1));
  CHECK(rep.pooled.tp == 6);
}

TEST_CASE("failed items are reported and excluded") {
  const auto truth = line_mask(8, 8, 2, 1, 6, 1);
  std::vector<DatasetItem> items{constant_item("ok", truth)};
  items.push_back({"broken", []() -> LabeledImage { throw IoError("cannot open broken.png"); }});
  items.push_back({"wrong-size", [] { return LabeledImage{ImagePlane(8, 8), SegmentationMask(4, 4)}; }});
  const auto rep = evaluate_dataset(
      items, [](const ImagePlane& img) { return SegmentationMask(img.width, img.height); }, 2);
  REQUIRE(rep.per_image.size() == 1);
  CHECK(rep.per_image[0].id == "ok");
  REQUIRE(rep.failures.size() == 2);
  CHECK(rep.failures[0].id == "broken");
  CHECK(rep.failures[0].message.find("broken.png") != std::string::npos);
  CHECK(rep.failures[1].id == "wrong-size");
  CHECK(rep.macro.recall == 0.0);
}

TEST_CASE("synthetic suite: aggregate recomputed independently, order-free") {
  SynthOptions opts;
  opts.block_size = 32;
  const auto suite = generate_suite(opts, 77, 12);
  std::vector<DatasetItem> items;
  for (std::size_t i = 0; i < suite.size(); ++i) {
    const auto s = suite[i];
    items.push_back({"s" + std::to_string(i), [s] { return LabeledImage{s.image, s.truth}; }});
  }
  SegmenterConfig cfg;
  cfg.basis.block_size = 32;
  const auto rep = evaluate_dataset(items, cfg, 3);
  REQUIRE(rep.per_image.size() == 12);

  // Recompute from the brute-force counter on freshly predicted masks.
  double p = 0, r = 0, f = 0;
  std::uint64_t tp = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < suite.size(); ++i) {
    const auto mask = segment_image(suite[i].image, cfg);
    const auto o = testing::brute_confusion(mask, suite[i].truth);
    CHECK(rep.per_image[i].counts.tp == o.tp);
    tp += o.tp;
    fp += o.fp;
    fn += o.fn;
    const double pi = (o.tp + o.fp) ? double(o.tp) / double(o.tp + o.fp) : (o.fn ? 0.0 : 1.0);
    const double ri = (o.tp + o.fn) ? double(o.tp) / double(o.tp + o.fn) : (o.fp ? 0.0 : 1.0);
    p += pi;
    r += ri;
    f += (pi + ri) > 0 ? 2 * pi * ri / (pi + ri) : 0.0;
  }
  CHECK(rep.macro.precision == doctest::Approx(p / 12).epsilon(1e-12));
  CHECK(rep.macro.recall == doctest::Approx(r / 12).epsilon(1e-12));
  CHECK(rep.macro.f1 == doctest::Approx(f / 12).epsilon(1e-12));
  CHECK(rep.pooled.tp == tp);
  CHECK(rep.micro.precision == doctest::Approx(double(tp) / double(tp + fp)));
  CHECK(rep.micro.recall == doctest::Approx(double(tp) / double(tp + fn)));

  std::vector<DatasetItem> reversed(items.rbegin(), items.rend());
  const auto rev = evaluate_dataset(reversed, cfg, 1);
  CHECK(rev.macro.f1 == doctest::Approx(rep.macro.f1).epsilon(1e-14));
  CHECK(rev.pooled == rep.pooled);
}
