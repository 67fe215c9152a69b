#pragma once

#include <Eigen/Dense>

#include "sdseg/admm.hpp"
#include "sdseg/dct_basis.hpp"
#include "sdseg/diff_operators.hpp"

namespace sdseg {

/// Slow, independent minimizers of the sparse-decomposition objective.
/// Intended for small blocks (N <= 16); nothing enforces that.
enum class ReferenceMethod {
  /// Chambolle-Pock primal-dual iteration on the weighted l1 regression
  /// min sum_i c_i |(M alpha)_i - b_i| with M = [I; P; DP].
  kPrimalDual,
  /// Normalized subgradient descent with step initial / (k+1)^decay_power.
  kSubgradient,
};

struct StepRule {
  double initial = 1.0;
  double decay_power = 0.5;
};

struct ReferenceConfig {
  int max_iters = 200000;
  StepRule step_rule;
  /// Stop when the best objective improves by less than tol (relative)
  /// over a window of `window` iterations.
  double tol = 1e-13;
  int window = 20000;
  ReferenceMethod method = ReferenceMethod::kPrimalDual;

  void validate() const;
};

/// Minimizes the same objective as `solve` and returns the best iterate
/// seen. `objective_history` holds the best-so-far value every 100
/// iterations; `primal_residuals` is left empty.
DecompositionResult proximal_reference(
    const Eigen::Ref<const Eigen::VectorXd>& f, const BasisMatrix& basis,
    const DiffOperator& diff, const SolverConfig& weights,
    const ReferenceConfig& config = {});

/// `base` with the ||alpha||_1 and TV branches switched off, leaving
/// min ||f - P alpha||_1 (scaled by lambda1).
SolverConfig lad_config(const SolverConfig& base);

/// Least-absolute-deviation background fit min_alpha ||f - P alpha||_1,
/// solved by the ADMM in `solve` with the extra branches disabled.
/// `objective_history` reports lambda1 * ||f - P alpha||_1.
DecompositionResult lad_fit(const Eigen::Ref<const Eigen::VectorXd>& f,
                            const BasisMatrix& basis,
                            const SolverConfig& base = {});

DecompositionResult lad_fit(const Eigen::Ref<const Eigen::VectorXd>& f,
                            const AdmmWorkspace& lad_workspace);

}  // namespace sdseg
