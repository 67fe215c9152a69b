#include "sdseg/dct_basis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "sdseg/errors.hpp"

namespace sdseg {

void BasisSpec::validate() const {
  if (block_size < 1) {
    throw ConfigError("block_size must be >= 1, got " +
                      std::to_string(block_size));
  }
  const long long max_bases =
      static_cast<long long>(block_size) * static_cast<long long>(block_size);
  if (num_bases < 1 || num_bases > max_bases) {
    throw ConfigError("num_bases must lie in [1, " + std::to_string(max_bases) +
                      "], got " + std::to_string(num_bases));
  }
}

std::vector<Frequency> zigzag_frequencies(int block_size, int count) {
  BasisSpec{block_size, count}.validate();

  std::vector<Frequency> order;
  order.reserve(static_cast<std::size_t>(count));
  const int n = block_size;
  // Anti-diagonal d = u + v. Odd diagonals run with u increasing, even ones
  // with u decreasing, which yields (0,0) -> (0,1) -> (1,0) -> (2,0) ...
  for (int d = 0; d <= 2 * (n - 1); ++d) {
    const int u_lo = std::max(0, d - (n - 1));
    const int u_hi = std::min(d, n - 1);
    if (d % 2 == 1) {
      for (int u = u_lo; u <= u_hi; ++u) {
        order.push_back({u, d - u});
        if (static_cast<int>(order.size()) == count) return order;
      }
    } else {
      for (int u = u_hi; u >= u_lo; --u) {
        order.push_back({u, d - u});
        if (static_cast<int>(order.size()) == count) return order;
      }
    }
  }
  return order;
}

double dct_normalization(int frequency, int block_size) {
  const double n = static_cast<double>(block_size);
  return frequency == 0 ? std::sqrt(1.0 / n) : std::sqrt(2.0 / n);
}

double dct_basis_value(Frequency f, int x, int y, int block_size) {
  const double two_n = 2.0 * block_size;
  const double pi = std::numbers::pi;
  return dct_normalization(f.u, block_size) *
         dct_normalization(f.v, block_size) *
         std::cos((2.0 * x + 1.0) * pi * f.u / two_n) *
         std::cos((2.0 * y + 1.0) * pi * f.v / two_n);
}

BasisMatrix::BasisMatrix(int block_size, std::vector<Frequency> frequencies,
                         Eigen::MatrixXd entries)
    : block_size_(block_size),
      frequencies_(std::move(frequencies)),
      entries_(std::move(entries)) {
  const Eigen::Index pixels =
      static_cast<Eigen::Index>(block_size_) * block_size_;
  if (entries_.rows() != pixels ||
      entries_.cols() != static_cast<Eigen::Index>(frequencies_.size())) {
    throw DimensionError("basis entries do not match block size / frequencies");
  }
}

BasisMatrix build_basis(const BasisSpec& spec) {
  spec.validate();
  const int n = spec.block_size;
  auto freqs = zigzag_frequencies(n, spec.num_bases);

  // Separable evaluation: P_k(x, y) = c_u(x) * c_v(y).
  auto cosine_table = [n](int freq) {
    Eigen::VectorXd c(n);
    for (int i = 0; i < n; ++i) {
      c(i) = dct_normalization(freq, n) *
             std::cos((2.0 * i + 1.0) * std::numbers::pi * freq / (2.0 * n));
    }
    return c;
  };

  Eigen::MatrixXd entries(static_cast<Eigen::Index>(n) * n, spec.num_bases);
  for (int k = 0; k < spec.num_bases; ++k) {
    const Eigen::VectorXd cu = cosine_table(freqs[k].u);
    const Eigen::VectorXd cv = cosine_table(freqs[k].v);
    for (int x = 0; x < n; ++x) {
      for (int y = 0; y < n; ++y) {
        entries(static_cast<Eigen::Index>(x) * n + y, k) = cu(x) * cv(y);
      }
    }
  }
  return BasisMatrix(n, std::move(freqs), std::move(entries));
}

}  // namespace sdseg
