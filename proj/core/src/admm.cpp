#include "sdseg/admm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "sdseg/errors.hpp"

namespace sdseg {
namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

void check_block(const Eigen::Ref<const Eigen::VectorXd>& f,
                 const BasisMatrix& basis) {
  if (f.size() != basis.num_pixels()) {
    throw DimensionError("block has " + std::to_string(f.size()) +
                         " values, basis expects " +
                         std::to_string(basis.num_pixels()));
  }
  if (!f.allFinite()) throw InputError("block contains non-finite values");
}

}  // namespace

void SolverConfig::validate() const {
  require(std::isfinite(lambda1) && lambda1 >= 0, "lambda1 must be >= 0");
  require(std::isfinite(lambda2) && lambda2 >= 0, "lambda2 must be >= 0");
  require(std::isfinite(rho1) && rho1 > 0, "rho1 must be > 0");
  require(std::isfinite(rho2) && rho2 > 0, "rho2 must be > 0");
  require(!use_tv || (std::isfinite(rho3) && rho3 > 0), "rho3 must be > 0");
  require(max_iters >= 1, "max_iters must be >= 1");
  require(std::isfinite(primal_tol) && primal_tol >= 0,
          "primal_tol must be >= 0");
  require(std::isfinite(coefficient_weight) && coefficient_weight >= 0,
          "coefficient_weight must be >= 0");
}

double PrimalResiduals::max() const {
  return std::max({coefficient, fidelity, gradient});
}

double DecompositionResult::final_objective() const {
  return objective_history.empty() ? std::numeric_limits<double>::quiet_NaN()
                                   : objective_history.back();
}

AdmmWorkspace::AdmmWorkspace(const BasisMatrix& basis,
                             const DiffOperator& diff,
                             const SolverConfig& config)
    : basis_(&basis), diff_(&diff), config_(config) {
  config_.validate();
  if (diff.cols() != basis.num_pixels()) {
    throw DimensionError("difference operator and basis disagree on N");
  }
  const Eigen::Index k = basis.num_bases();
  const Eigen::MatrixXd& p = basis.entries();
  a_ = config_.rho2 * (p.transpose() * p) +
       config_.rho1 * Eigen::MatrixXd::Identity(k, k);
  if (config_.use_tv) {
    dp_ = diff.stacked() * p;
    a_ += config_.rho3 * (dp_.transpose() * dp_);
  }
  factor_.compute(a_);
  if (factor_.info() != Eigen::Success) {
    throw InternalError("Cholesky factorization of the ADMM system failed");
  }
}

AdmmWorkspace::AdmmWorkspace(const BasisMatrix& basis,
                             const SolverConfig& config)
    : basis_(&basis), diff_(nullptr), config_(config) {
  config_.validate();
  if (config_.use_tv) {
    throw ConfigError("TV branch enabled but no difference operator given");
  }
  const Eigen::Index k = basis.num_bases();
  const Eigen::MatrixXd& p = basis.entries();
  a_ = config_.rho2 * (p.transpose() * p) +
       config_.rho1 * Eigen::MatrixXd::Identity(k, k);
  factor_.compute(a_);
  if (factor_.info() != Eigen::Success) {
    throw InternalError("Cholesky factorization of the ADMM system failed");
  }
}

const DiffOperator& AdmmWorkspace::diff() const {
  if (diff_ == nullptr) throw InternalError("workspace has no difference operator");
  return *diff_;
}

Eigen::VectorXd AdmmWorkspace::solve_system(const Eigen::VectorXd& rhs) const {
  return factor_.solve(rhs);
}

double soft_threshold(double v, double t) {
  if (!(t >= 0)) throw DomainError("soft-threshold requires t >= 0");
  const double mag = std::abs(v) - t;
  if (mag <= 0) return 0.0;
  return v > 0 ? mag : -mag;
}

Eigen::VectorXd soft_threshold(const Eigen::Ref<const Eigen::VectorXd>& v,
                               double t) {
  if (!(t >= 0)) throw DomainError("soft-threshold requires t >= 0");
  Eigen::VectorXd out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double mag = std::abs(v(i)) - t;
    out(i) = mag <= 0 ? 0.0 : (v(i) > 0 ? mag : -mag);
  }
  return out;
}

double objective(const Eigen::Ref<const Eigen::VectorXd>& alpha,
                 const Eigen::Ref<const Eigen::VectorXd>& f,
                 const BasisMatrix& basis, const DiffOperator& diff,
                 const SolverConfig& config) {
  if (alpha.size() != basis.num_bases()) {
    throw DimensionError("alpha length does not match basis count");
  }
  if (f.size() != basis.num_pixels() || diff.cols() != basis.num_pixels()) {
    throw DimensionError("block length does not match basis / operator");
  }
  const Eigen::VectorXd s = f - basis.entries() * alpha;
  double value = config.coefficient_weight * alpha.lpNorm<1>() +
                 config.lambda1 * s.lpNorm<1>();
  if (config.use_tv) value += config.lambda2 * diff.apply(s).lpNorm<1>();
  return value;
}

DecompositionResult solve(const Eigen::Ref<const Eigen::VectorXd>& f,
                          const AdmmWorkspace& ws,
                          const IterationObserver& observer) {
  const BasisMatrix& basis = ws.basis();
  check_block(f, basis);
  const SolverConfig& cfg = ws.config();
  const Eigen::MatrixXd& p = basis.entries();
  const Eigen::MatrixXd& dp = ws.dp();
  const bool tv_on = cfg.use_tv;
  const Eigen::Index k = basis.num_bases();
  const Eigen::Index m = tv_on ? dp.rows() : 0;

  const Eigen::VectorXd df = tv_on ? ws.diff().apply(f) : Eigen::VectorXd();

  Eigen::VectorXd alpha = Eigen::VectorXd::Zero(k);
  Eigen::VectorXd y = Eigen::VectorXd::Zero(k);
  Eigen::VectorXd z = Eigen::VectorXd::Zero(f.size());
  Eigen::VectorXd x = Eigen::VectorXd::Zero(m);
  Eigen::VectorXd u1 = Eigen::VectorXd::Zero(k);
  Eigen::VectorXd u2 = Eigen::VectorXd::Zero(f.size());
  Eigen::VectorXd u3 = Eigen::VectorXd::Zero(m);
  Eigen::VectorXd u1_prev, u2_prev, u3_prev, y_prev, z_prev, x_prev;
  Eigen::VectorXd rhs(k), p_alpha(f.size()), dp_alpha(m);

  DecompositionResult result;
  result.primal_residuals.reserve(static_cast<std::size_t>(cfg.max_iters));
  result.objective_history.reserve(static_cast<std::size_t>(cfg.max_iters));
  result.dual_residuals.reserve(static_cast<std::size_t>(cfg.max_iters));

  for (int it = 0; it < cfg.max_iters; ++it) {
    // alpha-update: A alpha = u1 - P^T u2 - (DP)^T u3 + rho1 y
    //                         + rho2 P^T (f - z) + rho3 (DP)^T (Df - x)
    rhs.noalias() = p.transpose() * (cfg.rho2 * (f - z) - u2);
    rhs += u1 + cfg.rho1 * y;
    if (tv_on) rhs.noalias() += dp.transpose() * (cfg.rho3 * (df - x) - u3);
    alpha = ws.solve_system(rhs);

    p_alpha.noalias() = p * alpha;
    if (tv_on) dp_alpha.noalias() = dp * alpha;

    // Proximal steps on the split variables, all taken at the new alpha.
    y_prev.swap(y);
    z_prev.swap(z);
    x_prev.swap(x);
    y = soft_threshold(alpha - u1 / cfg.rho1, cfg.coefficient_weight / cfg.rho1);
    z = soft_threshold(f - p_alpha - u2 / cfg.rho2, cfg.lambda1 / cfg.rho2);
    if (tv_on) {
      x = soft_threshold(df - dp_alpha - u3 / cfg.rho3, cfg.lambda2 / cfg.rho3);
    }

    if (observer) {
      u1_prev = u1;
      u2_prev = u2;
      u3_prev = u3;
    }

    const Eigen::VectorXd r1 = y - alpha;
    const Eigen::VectorXd r2 = z + p_alpha - f;
    u1 += cfg.rho1 * r1;
    u2 += cfg.rho2 * r2;
    PrimalResiduals res{r1.norm(), r2.norm(), 0.0};
    Eigen::VectorXd dual = p.transpose() * (cfg.rho2 * (z - z_prev));
    dual -= cfg.rho1 * (y - y_prev);
    if (tv_on) {
      const Eigen::VectorXd r3 = x + dp_alpha - df;
      u3 += cfg.rho3 * r3;
      res.gradient = r3.norm();
      dual.noalias() += dp.transpose() * (cfg.rho3 * (x - x_prev));
    }
    const double dual_norm = dual.norm();

    double obj = cfg.coefficient_weight * alpha.lpNorm<1>() +
                 cfg.lambda1 * (f - p_alpha).lpNorm<1>();
    if (tv_on) obj += cfg.lambda2 * (df - dp_alpha).lpNorm<1>();
    if (!std::isfinite(obj)) {
      throw InternalError("ADMM produced a non-finite objective");
    }

    result.primal_residuals.push_back(res);
    result.objective_history.push_back(obj);
    result.dual_residuals.push_back(dual_norm);
    result.iterations_run = it + 1;

    if (observer) {
      observer(AdmmIterate{it + 1, rhs, alpha, y, z, x, u1_prev, u2_prev,
                           u3_prev, u1, u2, u3});
    }

    if (cfg.primal_tol > 0 && res.max() < cfg.primal_tol &&
        dual_norm < cfg.primal_tol) {
      break;
    }
  }

  result.s = f - p * alpha;
  result.alpha = std::move(alpha);
  return result;
}

DecompositionResult solve(const Eigen::Ref<const Eigen::VectorXd>& f,
                          const BasisMatrix& basis, const DiffOperator& diff,
                          const SolverConfig& config) {
  const AdmmWorkspace ws(basis, diff, config);
  return solve(f, ws);
}

}  // namespace sdseg
