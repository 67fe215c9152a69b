#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sdseg/block_segmenter.hpp"

namespace sdseg::cli {

enum ExitCode : int {
  kOk = 0,
  kFileFailure = 1,
  kConfigError = 2,
};

/// Entry point shared by the executable and the tests. `args` excludes the
/// program name.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

/// Background, signed residual and coefficients of one block, as written by
/// `sdseg decompose`. background + sparse == input exactly before any
/// clamping.
struct BlockDecomposition {
  Eigen::VectorXd background;
  Eigen::VectorXd sparse;
  Eigen::VectorXd alpha;
};

BlockDecomposition decompose_image_block(const ImagePlane& block,
                                         const BlockSegmenter& segmenter);

/// Image/ground-truth pairs found in `dir`: <name>.png (or .pgm/.ppm) next
/// to <name>_gt.png (same extensions). Sorted by name. Images without a
/// truth file land in `unpaired`.
struct DatasetListing {
  struct Pair {
    std::string id;
    std::filesystem::path image;
    std::filesystem::path truth;
  };
  std::vector<Pair> pairs;
  std::vector<std::filesystem::path> unpaired;
};

DatasetListing list_dataset(const std::filesystem::path& dir);

}  // namespace sdseg::cli
