#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace sdseg {

/// Block geometry and number of low-frequency bases kept.
struct BasisSpec {
  int block_size = 64;
  int num_bases = 20;

  /// Throws ConfigError unless block_size >= 1 and 1 <= num_bases <= N^2.
  void validate() const;
};

/// A 2D-DCT frequency pair. `u` is the frequency along the first block
/// index (rows), `v` along the second (columns).
struct Frequency {
  int u = 0;
  int v = 0;

  friend bool operator==(const Frequency&, const Frequency&) = default;
};

/// The first `count` frequencies of the JPEG zig-zag scan over an N x N
/// grid: (0,0), (0,1), (1,0), (2,0), (1,1), (0,2), ...
std::vector<Frequency> zigzag_frequencies(int block_size, int count);

/// N^2 x K matrix whose columns are vectorized, orthonormal 2D-DCT-II
/// basis functions.
///
/// Blocks are vectorized row-major: pixel (x, y), with x the row and y the
/// column, lives at index x * N + y. Every other module uses the same order.
class BasisMatrix {
 public:
  BasisMatrix(int block_size, std::vector<Frequency> frequencies,
              Eigen::MatrixXd entries);

  int block_size() const { return block_size_; }
  int num_bases() const { return static_cast<int>(frequencies_.size()); }
  Eigen::Index num_pixels() const { return entries_.rows(); }

  const Eigen::MatrixXd& entries() const { return entries_; }
  const std::vector<Frequency>& frequencies() const { return frequencies_; }

 private:
  int block_size_;
  std::vector<Frequency> frequencies_;
  Eigen::MatrixXd entries_;
};

/// DCT-II normalization: sqrt(1/N) for frequency 0, sqrt(2/N) otherwise.
double dct_normalization(int frequency, int block_size);

/// P_{u,v}(x, y) for an N x N block.
double dct_basis_value(Frequency f, int x, int y, int block_size);

BasisMatrix build_basis(const BasisSpec& spec);

}  // namespace sdseg
