#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "sdseg/admm.hpp"
#include "sdseg/dct_basis.hpp"
#include "sdseg/diff_operators.hpp"
#include "sdseg/image.hpp"

namespace sdseg {

/// What to do with images whose sides are not multiples of N.
enum class EdgePolicy {
  /// Pad the last row/column of blocks by edge replication, crop the mask.
  kReplicate,
  /// Refuse such images with a DimensionError.
  kReject,
};

EdgePolicy parse_edge_policy(std::string_view name);
std::string_view to_string(EdgePolicy policy);

/// Which background model decides the residual.
enum class DecompositionMethod {
  kSparseTv,
  kLeastAbsoluteDeviation,
};

struct SegmenterConfig {
  BasisSpec basis;
  SolverConfig solver;
  /// A pixel is foreground when |s| exceeds this many 8-bit intensity levels.
  double fg_threshold = 10.0;
  EdgePolicy edge_policy = EdgePolicy::kReplicate;
  /// Pixels are rescaled by intensity_scale / 255 before solving. The
  /// threshold stays in 8-bit units regardless.
  double intensity_scale = 255.0;
  DecompositionMethod method = DecompositionMethod::kSparseTv;

  void validate() const;
};

struct BlockOutcome {
  /// N x N, row-major, 1 = foreground.
  std::vector<std::uint8_t> mask;
  DecompositionResult result;
};

/// Diagnostic record for one block of an image.
struct BlockRecord {
  int block_row = 0;
  int block_col = 0;
  DecompositionResult result;
};

/// Owns the basis, difference operator and factorized ADMM workspace for
/// one configuration. Not copyable or movable: the workspace points into
/// the object.
class BlockSegmenter {
 public:
  explicit BlockSegmenter(const SegmenterConfig& config);
  BlockSegmenter(const BlockSegmenter&) = delete;
  BlockSegmenter& operator=(const BlockSegmenter&) = delete;

  const SegmenterConfig& config() const { return config_; }
  const BasisMatrix& basis() const { return basis_; }
  const DiffOperator& diff() const { return diff_; }
  const AdmmWorkspace& workspace() const { return workspace_; }
  int block_size() const { return config_.basis.block_size; }

  /// Decompose one vectorized block given in 8-bit intensity units.
  BlockOutcome segment_block(const Eigen::Ref<const Eigen::VectorXd>& block) const;

  /// Tile, decompose every block (on up to `jobs` threads) and assemble the
  /// mask. When `records` is non-null it receives one entry per block in
  /// row-major block order.
  SegmentationMask segment_image(const ImagePlane& image, int jobs = 1,
                                 std::vector<BlockRecord>* records = nullptr) const;

  /// Block (block_row, block_col) of `image`, vectorized, with edge
  /// replication past the image border.
  Eigen::VectorXd extract_block(const ImagePlane& image, int block_row,
                                int block_col) const;

  /// Number of block rows and columns needed to cover the image.
  std::pair<int, int> grid_shape(const ImagePlane& image) const;

 private:
  SegmenterConfig config_;
  BasisMatrix basis_;
  DiffOperator diff_;
  AdmmWorkspace workspace_;
};

BlockOutcome segment_block(const Eigen::Ref<const Eigen::VectorXd>& block,
                           const SegmenterConfig& config);

SegmentationMask segment_image(const ImagePlane& image,
                               const SegmenterConfig& config, int jobs = 1);

/// ITU-R BT.601 luma from 8-bit RGB.
double luma_bt601(double r, double g, double b);

}  // namespace sdseg
