#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace sdseg {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// First-difference operators on a vectorized N x N block (row-major,
/// index x * N + y).
///
/// `dx` differences along the first index (vertical neighbours):
///   (dx s)[x * N + y] = s[(x+1) * N + y] - s[x * N + y],  x < N-1.
/// `dy` differences along the second index (horizontal neighbours):
///   (dy s)[x * (N-1) + y] = s[x * N + y + 1] - s[x * N + y],  y < N-1.
/// Differences that would leave the block are dropped, so each operator has
/// N(N-1) rows and `stacked` = [dx; dy] has 2N(N-1).
class DiffOperator {
 public:
  explicit DiffOperator(int block_size);

  int block_size() const { return block_size_; }
  Eigen::Index rows() const { return stacked_.rows(); }
  Eigen::Index cols() const { return stacked_.cols(); }

  const SparseMatrix& dx() const { return dx_; }
  const SparseMatrix& dy() const { return dy_; }
  const SparseMatrix& stacked() const { return stacked_; }

  /// D s via the sparse matrix.
  Eigen::VectorXd apply(const Eigen::Ref<const Eigen::VectorXd>& s) const;
  /// D s via direct indexing; same row order as `stacked()`.
  Eigen::VectorXd apply_matrix_free(
      const Eigen::Ref<const Eigen::VectorXd>& s) const;
  /// D^T g via the sparse matrix.
  Eigen::VectorXd apply_transpose(
      const Eigen::Ref<const Eigen::VectorXd>& g) const;

 private:
  int block_size_;
  SparseMatrix dx_;
  SparseMatrix dy_;
  SparseMatrix stacked_;
};

/// Throws ConfigError when block_size < 2.
DiffOperator build_diff_operator(int block_size);

/// Anisotropic total variation ||D s||_1. Throws DimensionError when
/// s.size() != N^2.
double tv(const Eigen::Ref<const Eigen::VectorXd>& s, const DiffOperator& op);

}  // namespace sdseg
