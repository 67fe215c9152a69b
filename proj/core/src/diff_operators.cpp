#include "sdseg/diff_operators.hpp"

#include <string>
#include <vector>

#include "sdseg/errors.hpp"

namespace sdseg {
namespace {

using Triplet = Eigen::Triplet<double>;

void check_length(Eigen::Index got, Eigen::Index want, const char* what) {
  if (got != want) {
    throw DimensionError(std::string(what) + ": expected length " +
                         std::to_string(want) + ", got " + std::to_string(got));
  }
}

}  // namespace

DiffOperator::DiffOperator(int block_size) : block_size_(block_size) {
  if (block_size < 2) {
    throw ConfigError("difference operator needs block_size >= 2, got " +
                      std::to_string(block_size));
  }
  const Eigen::Index n = block_size;
  const Eigen::Index per_dir = n * (n - 1);
  const Eigen::Index pixels = n * n;

  std::vector<Triplet> tx, ty, ts;
  tx.reserve(2 * per_dir);
  ty.reserve(2 * per_dir);
  ts.reserve(4 * per_dir);

  for (Eigen::Index x = 0; x + 1 < n; ++x) {
    for (Eigen::Index y = 0; y < n; ++y) {
      const Eigen::Index row = x * n + y;
      tx.emplace_back(row, (x + 1) * n + y, 1.0);
      tx.emplace_back(row, x * n + y, -1.0);
    }
  }
  for (Eigen::Index x = 0; x < n; ++x) {
    for (Eigen::Index y = 0; y + 1 < n; ++y) {
      const Eigen::Index row = x * (n - 1) + y;
      ty.emplace_back(row, x * n + y + 1, 1.0);
      ty.emplace_back(row, x * n + y, -1.0);
    }
  }
  ts = tx;
  for (const auto& t : ty) ts.emplace_back(t.row() + per_dir, t.col(), t.value());

  dx_.resize(per_dir, pixels);
  dy_.resize(per_dir, pixels);
  stacked_.resize(2 * per_dir, pixels);
  dx_.setFromTriplets(tx.begin(), tx.end());
  dy_.setFromTriplets(ty.begin(), ty.end());
  stacked_.setFromTriplets(ts.begin(), ts.end());
}

Eigen::VectorXd DiffOperator::apply(
    const Eigen::Ref<const Eigen::VectorXd>& s) const {
  check_length(s.size(), stacked_.cols(), "DiffOperator::apply");
  return stacked_ * s;
}

Eigen::VectorXd DiffOperator::apply_matrix_free(
    const Eigen::Ref<const Eigen::VectorXd>& s) const {
  check_length(s.size(), stacked_.cols(), "DiffOperator::apply_matrix_free");
  const Eigen::Index n = block_size_;
  const Eigen::Index per_dir = n * (n - 1);
  Eigen::VectorXd out(2 * per_dir);
  for (Eigen::Index x = 0; x + 1 < n; ++x) {
    for (Eigen::Index y = 0; y < n; ++y) {
      out(x * n + y) = s((x + 1) * n + y) - s(x * n + y);
    }
  }
  for (Eigen::Index x = 0; x < n; ++x) {
    for (Eigen::Index y = 0; y + 1 < n; ++y) {
      out(per_dir + x * (n - 1) + y) = s(x * n + y + 1) - s(x * n + y);
    }
  }
  return out;
}

Eigen::VectorXd DiffOperator::apply_transpose(
    const Eigen::Ref<const Eigen::VectorXd>& g) const {
  check_length(g.size(), stacked_.rows(), "DiffOperator::apply_transpose");
  return stacked_.transpose() * g;
}

DiffOperator build_diff_operator(int block_size) {
  return DiffOperator(block_size);
}

double tv(const Eigen::Ref<const Eigen::VectorXd>& s, const DiffOperator& op) {
  check_length(s.size(), op.cols(), "tv");
  return op.apply(s).lpNorm<1>();
}

}  // namespace sdseg
