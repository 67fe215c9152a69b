#include "sdseg/metrics.hpp"

#include <exception>
#include <optional>
#include <string>

#include "sdseg/errors.hpp"
#include "sdseg/worker_pool.hpp"

namespace sdseg {

ConfusionCounts& ConfusionCounts::operator+=(const ConfusionCounts& o) {
  tp += o.tp;
  fp += o.fp;
  fn += o.fn;
  tn += o.tn;
  return *this;
}

ConfusionCounts confusion(const SegmentationMask& pred,
                          const SegmentationMask& truth) {
  if (pred.width != truth.width || pred.height != truth.height ||
      pred.bits.size() != truth.bits.size()) {
    throw DimensionError("mask size mismatch: " + std::to_string(pred.width) +
                         "x" + std::to_string(pred.height) + " vs " +
                         std::to_string(truth.width) + "x" +
                         std::to_string(truth.height));
  }
  ConfusionCounts c;
  for (std::size_t i = 0; i < pred.bits.size(); ++i) {
    const bool p = pred.bits[i] != 0;
    const bool t = truth.bits[i] != 0;
    if (p && t) {
      ++c.tp;
    } else if (p) {
      ++c.fp;
    } else if (t) {
      ++c.fn;
    } else {
      ++c.tn;
    }
  }
  return c;
}

Rates precision_recall_f1(const ConfusionCounts& c) {
  Rates r;
  const auto tp = static_cast<double>(c.tp);
  if (c.tp + c.fp == 0) {
    r.precision = c.fn == 0 ? 1.0 : 0.0;
  } else {
    r.precision = tp / static_cast<double>(c.tp + c.fp);
  }
  if (c.tp + c.fn == 0) {
    r.recall = c.fp == 0 ? 1.0 : 0.0;
  } else {
    r.recall = tp / static_cast<double>(c.tp + c.fn);
  }
  const double sum = r.precision + r.recall;
  r.f1 = sum > 0 ? 2.0 * r.precision * r.recall / sum : 0.0;
  return r;
}

void aggregate(EvalReport& report) {
  report.pooled = {};
  report.macro = {};
  for (const auto& s : report.per_image) {
    report.pooled += s.counts;
    report.macro.precision += s.rates.precision;
    report.macro.recall += s.rates.recall;
    report.macro.f1 += s.rates.f1;
  }
  if (!report.per_image.empty()) {
    const auto n = static_cast<double>(report.per_image.size());
    report.macro.precision /= n;
    report.macro.recall /= n;
    report.macro.f1 /= n;
  }
  report.micro = precision_recall_f1(report.pooled);
}

EvalReport evaluate_dataset(const std::vector<DatasetItem>& items,
                            const MaskPredictor& predict, int jobs) {
  std::vector<std::optional<ImageScore>> scores(items.size());
  std::vector<std::string> errors(items.size());

  parallel_for(items.size(), jobs, [&](std::size_t i) {
    try {
      const LabeledImage item = items[i].load();
      const SegmentationMask pred = predict(item.image);
      ImageScore score{items[i].id, confusion(pred, item.truth), {}};
      score.rates = precision_recall_f1(score.counts);
      scores[i] = std::move(score);
    } catch (const std::exception& e) {
      errors[i] = e.what();
      if (errors[i].empty()) errors[i] = "unknown error";
    }
  });

  EvalReport report;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (scores[i]) {
      report.per_image.push_back(std::move(*scores[i]));
    } else {
      report.failures.push_back({items[i].id, errors[i]});
    }
  }
  aggregate(report);
  return report;
}

EvalReport evaluate_dataset(const std::vector<DatasetItem>& items,
                            const SegmenterConfig& config, int jobs) {
  const BlockSegmenter segmenter(config);
  return evaluate_dataset(
      items,
      [&segmenter](const ImagePlane& image) {
        return segmenter.segment_image(image, 1);
      },
      jobs);
}

}  // namespace sdseg
