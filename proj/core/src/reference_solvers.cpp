#include "sdseg/reference_solvers.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>

#include "sdseg/errors.hpp"

namespace sdseg {
namespace {

// The objective written as sum_i c_i |(M alpha)_i - b_i|.
struct WeightedL1Problem {
  Eigen::MatrixXd m;
  Eigen::VectorXd b;
  Eigen::VectorXd c;

  double value(const Eigen::VectorXd& alpha) const {
    return (c.array() * ((m * alpha) - b).array().abs()).sum();
  }
};

WeightedL1Problem stack_problem(const Eigen::Ref<const Eigen::VectorXd>& f,
                                const BasisMatrix& basis,
                                const DiffOperator& diff,
                                const SolverConfig& w) {
  const Eigen::Index k = basis.num_bases();
  const Eigen::Index n2 = basis.num_pixels();
  const Eigen::Index g = w.use_tv ? diff.rows() : 0;

  WeightedL1Problem prob;
  prob.m.resize(k + n2 + g, k);
  prob.b.resize(k + n2 + g);
  prob.c.resize(k + n2 + g);

  prob.m.topRows(k).setIdentity();
  prob.b.head(k).setZero();
  prob.c.head(k).setConstant(w.coefficient_weight);

  prob.m.middleRows(k, n2) = basis.entries();
  prob.b.segment(k, n2) = f;
  prob.c.segment(k, n2).setConstant(w.lambda1);

  if (g > 0) {
    for (Eigen::Index j = 0; j < k; ++j) {
      prob.m.block(k + n2, j, g, 1) = diff.apply_matrix_free(basis.entries().col(j));
    }
    prob.b.tail(g) = diff.apply_matrix_free(f);
    prob.c.tail(g).setConstant(w.lambda2);
  }
  return prob;
}

// Chambolle-Pock for min_alpha g(M alpha), g(v) = sum c_i |v_i - b_i|.
// prox of sigma g* is a clip to [-c, c] after shifting by sigma b.
Eigen::VectorXd primal_dual(const WeightedL1Problem& prob,
                            const ReferenceConfig& cfg, double& best_value,
                            std::vector<double>& history, int& iters) {
  const Eigen::Index k = prob.m.cols();
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(
      prob.m.transpose() * prob.m, Eigen::EigenvaluesOnly);
  const double op_norm = std::sqrt(eig.eigenvalues().maxCoeff());
  const double tau = 0.99 / op_norm;
  const double sigma = 0.99 / op_norm;

  Eigen::VectorXd alpha = Eigen::VectorXd::Zero(k);
  Eigen::VectorXd alpha_bar = alpha;
  Eigen::VectorXd q = Eigen::VectorXd::Zero(prob.m.rows());
  Eigen::VectorXd best = alpha;
  best_value = prob.value(alpha);
  double window_start_value = best_value;

  for (int it = 0; it < cfg.max_iters; ++it) {
    q += sigma * (prob.m * alpha_bar - prob.b);
    q = q.cwiseMax(-prob.c).cwiseMin(prob.c);
    const Eigen::VectorXd next = alpha - tau * (prob.m.transpose() * q);
    alpha_bar = 2.0 * next - alpha;
    alpha = next;

    const double v = prob.value(alpha);
    if (v < best_value) {
      best_value = v;
      best = alpha;
    }
    iters = it + 1;
    if (iters % 100 == 0) history.push_back(best_value);
    if (iters % cfg.window == 0) {
      const double gain = (window_start_value - best_value) /
                          std::max(1.0, std::abs(best_value));
      if (gain < cfg.tol) break;
      window_start_value = best_value;
    }
  }
  return best;
}

Eigen::VectorXd subgradient(const WeightedL1Problem& prob,
                            const ReferenceConfig& cfg, double& best_value,
                            std::vector<double>& history, int& iters) {
  const Eigen::Index k = prob.m.cols();
  Eigen::VectorXd alpha = Eigen::VectorXd::Zero(k);
  Eigen::VectorXd best = alpha;
  best_value = prob.value(alpha);
  double window_start_value = best_value;

  for (int it = 0; it < cfg.max_iters; ++it) {
    const Eigen::VectorXd r = prob.m * alpha - prob.b;
    const Eigen::VectorXd sign = r.unaryExpr(
        [](double e) { return static_cast<double>((e > 0) - (e < 0)); });
    const Eigen::VectorXd grad =
        prob.m.transpose() * (prob.c.array() * sign.array()).matrix();
    const double gnorm = grad.norm();
    if (gnorm == 0.0) break;
    const double step = cfg.step_rule.initial /
                        std::pow(static_cast<double>(it + 1),
                                 cfg.step_rule.decay_power);
    alpha -= (step / gnorm) * grad;

    const double v = prob.value(alpha);
    if (v < best_value) {
      best_value = v;
      best = alpha;
    }
    iters = it + 1;
    if (iters % 100 == 0) history.push_back(best_value);
    if (iters % cfg.window == 0) {
      const double gain = (window_start_value - best_value) /
                          std::max(1.0, std::abs(best_value));
      if (gain < cfg.tol) break;
      window_start_value = best_value;
    }
  }
  return best;
}

}  // namespace

void ReferenceConfig::validate() const {
  if (max_iters < 1) throw ConfigError("reference max_iters must be >= 1");
  if (!(tol > 0)) throw ConfigError("reference tol must be > 0");
  if (window < 1) throw ConfigError("reference window must be >= 1");
  if (!(step_rule.initial > 0) || !(step_rule.decay_power > 0)) {
    throw ConfigError("reference step rule must be positive");
  }
}

DecompositionResult proximal_reference(
    const Eigen::Ref<const Eigen::VectorXd>& f, const BasisMatrix& basis,
    const DiffOperator& diff, const SolverConfig& weights,
    const ReferenceConfig& config) {
  config.validate();
  weights.validate();
  if (f.size() != basis.num_pixels() || diff.cols() != basis.num_pixels()) {
    throw DimensionError("block length does not match basis / operator");
  }
  if (!f.allFinite()) throw InputError("block contains non-finite values");

  const WeightedL1Problem prob = stack_problem(f, basis, diff, weights);
  DecompositionResult result;
  double best_value = 0.0;
  result.alpha =
      config.method == ReferenceMethod::kPrimalDual
          ? primal_dual(prob, config, best_value, result.objective_history,
                        result.iterations_run)
          : subgradient(prob, config, best_value, result.objective_history,
                        result.iterations_run);
  result.objective_history.push_back(best_value);
  result.s = f - basis.entries() * result.alpha;
  return result;
}

SolverConfig lad_config(const SolverConfig& base) {
  SolverConfig cfg = base;
  cfg.coefficient_weight = 0.0;
  cfg.use_tv = false;
  cfg.lambda2 = 0.0;
  return cfg;
}

DecompositionResult lad_fit(const Eigen::Ref<const Eigen::VectorXd>& f,
                            const BasisMatrix& basis,
                            const SolverConfig& base) {
  const AdmmWorkspace ws(basis, lad_config(base));
  return solve(f, ws);
}

DecompositionResult lad_fit(const Eigen::Ref<const Eigen::VectorXd>& f,
                            const AdmmWorkspace& lad_workspace) {
  const SolverConfig& cfg = lad_workspace.config();
  if (cfg.use_tv || cfg.coefficient_weight != 0.0) {
    throw ConfigError("lad_fit needs a workspace built from lad_config()");
  }
  return solve(f, lad_workspace);
}

}  // namespace sdseg
