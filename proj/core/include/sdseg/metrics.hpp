#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "sdseg/block_segmenter.hpp"
#include "sdseg/image.hpp"

namespace sdseg {

/// Pixel counts with foreground as the positive class.
struct ConfusionCounts {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;
  std::uint64_t tn = 0;

  std::uint64_t total() const { return tp + fp + fn + tn; }
  ConfusionCounts& operator+=(const ConfusionCounts& o);
  friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

struct Rates {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

/// Throws DimensionError when the masks differ in size.
ConfusionCounts confusion(const SegmentationMask& pred,
                          const SegmentationMask& truth);

/// precision = TP/(TP+FP), recall = TP/(TP+FN), f1 = 2PR/(P+R).
/// Empty denominators: precision is 1 when TP+FP = 0 and FN = 0, else 0;
/// recall is 1 when TP+FN = 0 and FP = 0, else 0; f1 is 0 when P+R = 0.
Rates precision_recall_f1(const ConfusionCounts& c);

struct ImageScore {
  std::string id;
  ConfusionCounts counts;
  Rates rates;
};

struct ItemFailure {
  std::string id;
  std::string message;
};

struct EvalReport {
  /// Successful items, in input order.
  std::vector<ImageScore> per_image;
  /// Unweighted mean of per-image precision, recall and F1.
  Rates macro;
  /// Rates of the pooled confusion counts.
  Rates micro;
  ConfusionCounts pooled;
  std::vector<ItemFailure> failures;
};

/// Fills macro, micro and pooled from `per_image`.
void aggregate(EvalReport& report);

struct LabeledImage {
  ImagePlane image;
  SegmentationMask truth;
};

/// A dataset entry loaded on demand. `load` may throw; the item is then
/// reported as a failure and left out of the aggregate.
struct DatasetItem {
  std::string id;
  std::function<LabeledImage()> load;
};

using MaskPredictor = std::function<SegmentationMask(const ImagePlane&)>;

EvalReport evaluate_dataset(const std::vector<DatasetItem>& items,
                            const MaskPredictor& predict, int jobs = 1);

EvalReport evaluate_dataset(const std::vector<DatasetItem>& items,
                            const SegmenterConfig& config, int jobs = 1);

}  // namespace sdseg
