#include "sdseg/block_segmenter.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sdseg/errors.hpp"
#include "sdseg/reference_solvers.hpp"
#include "sdseg/worker_pool.hpp"

namespace sdseg {
namespace {

SolverConfig effective_solver(const SegmenterConfig& cfg) {
  return cfg.method == DecompositionMethod::kLeastAbsoluteDeviation
             ? lad_config(cfg.solver)
             : cfg.solver;
}

const SegmenterConfig& validated(const SegmenterConfig& cfg) {
  cfg.validate();
  return cfg;
}

}  // namespace

EdgePolicy parse_edge_policy(std::string_view name) {
  if (name == "replicate" || name == "pad") return EdgePolicy::kReplicate;
  if (name == "reject") return EdgePolicy::kReject;
  throw ConfigError("unsupported edge policy '" + std::string(name) +
                    "' (expected replicate or reject)");
}

std::string_view to_string(EdgePolicy policy) {
  switch (policy) {
    case EdgePolicy::kReplicate:
      return "replicate";
    case EdgePolicy::kReject:
      return "reject";
  }
  return "unknown";
}

void SegmenterConfig::validate() const {
  basis.validate();
  if (basis.block_size < 2) throw ConfigError("block_size must be >= 2");
  solver.validate();
  if (!std::isfinite(fg_threshold) || fg_threshold < 0) {
    throw ConfigError("fg_threshold must be >= 0");
  }
  if (!std::isfinite(intensity_scale) || intensity_scale <= 0) {
    throw ConfigError("intensity_scale must be > 0");
  }
  if (edge_policy != EdgePolicy::kReplicate && edge_policy != EdgePolicy::kReject) {
    throw ConfigError("unsupported edge policy");
  }
}

double luma_bt601(double r, double g, double b) {
  return 0.299 * r + 0.587 * g + 0.114 * b;
}

BlockSegmenter::BlockSegmenter(const SegmenterConfig& config)
    : config_(validated(config)),
      basis_(build_basis(config_.basis)),
      diff_(build_diff_operator(config_.basis.block_size)),
      workspace_(basis_, diff_, effective_solver(config_)) {}

BlockOutcome BlockSegmenter::segment_block(
    const Eigen::Ref<const Eigen::VectorXd>& block) const {
  const double scale = config_.intensity_scale / 255.0;
  const Eigen::VectorXd f = block * scale;

  BlockOutcome out;
  out.result = solve(f, workspace_);
  out.mask.resize(static_cast<std::size_t>(f.size()));
  for (Eigen::Index i = 0; i < f.size(); ++i) {
    out.mask[static_cast<std::size_t>(i)] =
        std::abs(out.result.s(i)) / scale > config_.fg_threshold ? 1 : 0;
  }
  return out;
}

std::pair<int, int> BlockSegmenter::grid_shape(const ImagePlane& image) const {
  const int n = block_size();
  return {(image.height + n - 1) / n, (image.width + n - 1) / n};
}

Eigen::VectorXd BlockSegmenter::extract_block(const ImagePlane& image,
                                              int block_row,
                                              int block_col) const {
  const int n = block_size();
  Eigen::VectorXd f(static_cast<Eigen::Index>(n) * n);
  for (int x = 0; x < n; ++x) {
    const int row = std::min(block_row * n + x, image.height - 1);
    for (int y = 0; y < n; ++y) {
      const int col = std::min(block_col * n + y, image.width - 1);
      f(static_cast<Eigen::Index>(x) * n + y) = image.at(row, col);
    }
  }
  return f;
}

SegmentationMask BlockSegmenter::segment_image(
    const ImagePlane& image, int jobs, std::vector<BlockRecord>* records) const {
  image.validate();
  const int n = block_size();
  if (config_.edge_policy == EdgePolicy::kReject &&
      (image.width % n != 0 || image.height % n != 0)) {
    throw DimensionError("image " + std::to_string(image.width) + "x" +
                         std::to_string(image.height) +
                         " is not a multiple of the block size " +
                         std::to_string(n));
  }

  const auto [grid_rows, grid_cols] = grid_shape(image);
  const std::size_t blocks = static_cast<std::size_t>(grid_rows) * grid_cols;
  SegmentationMask mask(image.width, image.height);
  if (records != nullptr) {
    records->clear();
    records->resize(blocks);
  }

  // Each block writes a disjoint region of the mask, so the result does not
  // depend on scheduling.
  parallel_for(blocks, jobs, [&](std::size_t index) {
    const int br = static_cast<int>(index) / grid_cols;
    const int bc = static_cast<int>(index) % grid_cols;
    BlockOutcome outcome = segment_block(extract_block(image, br, bc));
    for (int x = 0; x < n; ++x) {
      const int row = br * n + x;
      if (row >= image.height) break;
      for (int y = 0; y < n; ++y) {
        const int col = bc * n + y;
        if (col >= image.width) break;
        mask.at(row, col) = outcome.mask[static_cast<std::size_t>(x) * n + y];
      }
    }
    if (records != nullptr) {
      (*records)[index] = BlockRecord{br, bc, std::move(outcome.result)};
    }
  });
  return mask;
}

BlockOutcome segment_block(const Eigen::Ref<const Eigen::VectorXd>& block,
                           const SegmenterConfig& config) {
  const BlockSegmenter segmenter(config);
  if (block.size() != static_cast<Eigen::Index>(segmenter.block_size()) *
                          segmenter.block_size()) {
    throw DimensionError("block does not match configured block size");
  }
  return segmenter.segment_block(block);
}

SegmentationMask segment_image(const ImagePlane& image,
                               const SegmenterConfig& config, int jobs) {
  const BlockSegmenter segmenter(config);
  return segmenter.segment_image(image, jobs);
}

}  // namespace sdseg
