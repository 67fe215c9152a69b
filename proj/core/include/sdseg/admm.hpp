#pragma once

#include <functional>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "sdseg/dct_basis.hpp"
#include "sdseg/diff_operators.hpp"

namespace sdseg {

/// Weights and ADMM parameters for
///
///   min_alpha  w ||alpha||_1 + lambda1 ||f - P alpha||_1
///                            + lambda2 ||D f - D P alpha||_1
///
/// with w = `coefficient_weight` (1 for the sparse decomposition).
struct SolverConfig {
  double lambda1 = 10.0;
  double lambda2 = 4.0;
  double rho1 = 1.0;
  double rho2 = 1.0;
  double rho3 = 1.0;
  int max_iters = 50;
  /// Stop once all three primal residual norms and the dual residual norm
  /// drop below this; 0 disables.
  double primal_tol = 0.0;

  // Branch switches used by the least-absolute-deviation baseline.
  double coefficient_weight = 1.0;
  bool use_tv = true;

  void validate() const;
};

/// Primal residual norms after one iteration:
/// ||y - alpha||, ||z + P alpha - f||, ||x + DP alpha - Df||.
struct PrimalResiduals {
  double coefficient = 0.0;
  double fidelity = 0.0;
  double gradient = 0.0;

  double max() const;
};

struct DecompositionResult {
  Eigen::VectorXd alpha;
  /// s = f - P alpha.
  Eigen::VectorXd s;
  std::vector<PrimalResiduals> primal_residuals;
  /// ||-rho1 dy + rho2 P^T dz + rho3 (DP)^T dx|| for the change (dy, dz, dx)
  /// of the split variables in each iteration.
  std::vector<double> dual_residuals;
  std::vector<double> objective_history;
  int iterations_run = 0;

  /// Objective value at the returned alpha (NaN when no iterations ran).
  double final_objective() const;
};

/// Per-(P, D, config) data shared across blocks: the DP product and the
/// Cholesky factor of A = rho3 (DP)^T DP + rho2 P^T P + rho1 I.
///
/// Holds references to `basis` and `diff`; both must outlive the workspace.
/// Immutable after construction, so concurrent solves may share it.
class AdmmWorkspace {
 public:
  AdmmWorkspace(const BasisMatrix& basis, const DiffOperator& diff,
                const SolverConfig& config);
  /// Workspace without a difference operator; requires use_tv == false.
  AdmmWorkspace(const BasisMatrix& basis, const SolverConfig& config);

  const BasisMatrix& basis() const { return *basis_; }
  bool has_diff() const { return diff_ != nullptr; }
  /// Throws InternalError when constructed without an operator.
  const DiffOperator& diff() const;
  const SolverConfig& config() const { return config_; }

  /// Dense D P, 2N(N-1) x K. Empty when the TV branch is disabled.
  const Eigen::MatrixXd& dp() const { return dp_; }
  const Eigen::MatrixXd& system_matrix() const { return a_; }

  Eigen::VectorXd solve_system(const Eigen::VectorXd& rhs) const;

 private:
  const BasisMatrix* basis_;
  const DiffOperator* diff_;
  SolverConfig config_;
  Eigen::MatrixXd dp_;
  Eigen::MatrixXd a_;
  Eigen::LLT<Eigen::MatrixXd> factor_;
};

/// State after one full ADMM sweep, handed to an IterationObserver.
/// `*_prev` are the dual values the sweep started from.
struct AdmmIterate {
  int iteration = 0;
  const Eigen::VectorXd& rhs;
  const Eigen::VectorXd& alpha;
  const Eigen::VectorXd& y;
  const Eigen::VectorXd& z;
  const Eigen::VectorXd& x;
  const Eigen::VectorXd& u1_prev;
  const Eigen::VectorXd& u2_prev;
  const Eigen::VectorXd& u3_prev;
  const Eigen::VectorXd& u1;
  const Eigen::VectorXd& u2;
  const Eigen::VectorXd& u3;
};

using IterationObserver = std::function<void(const AdmmIterate&)>;

/// sign(v) * max(|v| - t, 0), elementwise. Throws DomainError if t < 0.
Eigen::VectorXd soft_threshold(const Eigen::Ref<const Eigen::VectorXd>& v,
                               double t);
double soft_threshold(double v, double t);

double objective(const Eigen::Ref<const Eigen::VectorXd>& alpha,
                 const Eigen::Ref<const Eigen::VectorXd>& f,
                 const BasisMatrix& basis, const DiffOperator& diff,
                 const SolverConfig& config);

/// ADMM for the split problem with y = alpha, z = f - P alpha,
/// x = Df - DP alpha. All variables start at zero.
DecompositionResult solve(const Eigen::Ref<const Eigen::VectorXd>& f,
                          const AdmmWorkspace& workspace,
                          const IterationObserver& observer = {});

DecompositionResult solve(const Eigen::Ref<const Eigen::VectorXd>& f,
                          const BasisMatrix& basis, const DiffOperator& diff,
                          const SolverConfig& config);

}  // namespace sdseg
