#pragma once

#include <Eigen/Dense>
#include <functional>
#include <stdexcept>
#include <string>

#include "neuroquansa/common.hpp"

namespace neuroquansa {

// Thrown after the iteration budget is exhausted; carries the best iterate.
class FitError : public std::runtime_error {
 public:
  FitError(const std::string& msg, Eigen::VectorXd best, double residual)
      : std::runtime_error(msg), best_params(std::move(best)), residual_norm(residual) {}
  Eigen::VectorXd best_params;
  double residual_norm;
};

struct FitResult {
  Eigen::VectorXd params;
  Eigen::VectorXd std_errors;  // from the covariance sigma^2 (J^T J)^-1
  double residual_norm = 0.0;  // ||y - f||_2
  int iterations = 0;
  bool converged = false;
};

// Model value and gradient with respect to the parameters at a single x.
using CurveModel = std::function<double(double x, const Eigen::VectorXd& p)>;
using CurveJacobian =
    std::function<void(double x, const Eigen::VectorXd& p, Eigen::Ref<Eigen::VectorXd> grad)>;
// Optional domain guard; steps leaving the domain are rejected.
using ParamGuard = std::function<bool(const Eigen::VectorXd& p)>;

// Small Levenberg-Marquardt least-squares driver for scalar curve models.
inline FitResult levenberg_marquardt(const CurveModel& model, const CurveJacobian& jacobian,
                                     const Eigen::VectorXd& xs, const Eigen::VectorXd& ys,
                                     Eigen::VectorXd p, const ParamGuard& guard = {},
                                     int max_iterations = 200) {
  const int n = static_cast<int>(xs.size());
  const int k = static_cast<int>(p.size());
  require(n == ys.size(), "x/y length mismatch");
  require(n >= k, "need at least as many points as parameters");

  const auto residuals = [&](const Eigen::VectorXd& q, Eigen::VectorXd& r) {
    for (int i = 0; i < n; ++i) r[i] = ys[i] - model(xs[i], q);
  };

  Eigen::VectorXd r(n), r_try(n), grad(k);
  Eigen::MatrixXd jac(n, k);
  residuals(p, r);
  double cost = r.squaredNorm();
  double lambda = 1e-3;
  bool converged = false;
  int iter = 0;

  for (; iter < max_iterations; ++iter) {
    for (int i = 0; i < n; ++i) {
      jacobian(xs[i], p, grad);
      jac.row(i) = grad;
    }
    const Eigen::MatrixXd jtj = jac.transpose() * jac;
    const Eigen::VectorXd jtr = jac.transpose() * r;
    if (jtr.lpNorm<Eigen::Infinity>() < 1e-14 * (1.0 + cost)) {
      converged = true;
      break;
    }

    bool stepped = false;
    for (int attempt = 0; attempt < 40; ++attempt) {
      Eigen::MatrixXd damped = jtj;
      damped.diagonal() += lambda * jtj.diagonal().cwiseMax(1e-12);
      const Eigen::VectorXd delta = damped.ldlt().solve(jtr);
      const Eigen::VectorXd p_try = p + delta;
      if (!guard || guard(p_try)) {
        residuals(p_try, r_try);
        const double cost_try = r_try.squaredNorm();
        if (cost_try <= cost) {
          const bool small_step = delta.norm() <= 1e-13 * (1.0 + p.norm());
          const bool small_gain = (cost - cost_try) <= 1e-15 * (1.0 + cost);
          p = p_try;
          r = r_try;
          cost = cost_try;
          lambda = std::max(lambda * 0.3, 1e-12);
          stepped = true;
          if (small_step || small_gain) converged = true;
          break;
        }
      }
      lambda *= 2.0;
    }
    if (!stepped || converged) {
      converged = converged || !stepped;  // lambda saturation = stationary
      break;
    }
  }

  FitResult result;
  result.params = p;
  result.residual_norm = std::sqrt(cost);
  result.iterations = iter;
  result.converged = converged;

  // Covariance-based standard errors at the final iterate.
  for (int i = 0; i < n; ++i) {
    jacobian(xs[i], p, grad);
    jac.row(i) = grad;
  }
  Eigen::MatrixXd jtj = jac.transpose() * jac;
  const double dof = std::max(1, n - k);
  const double sigma2 = cost / dof;
  const Eigen::MatrixXd cov = sigma2 * jtj.completeOrthogonalDecomposition().pseudoInverse();
  result.std_errors = cov.diagonal().cwiseMax(0.0).cwiseSqrt();

  if (!result.converged)
    throw FitError("curve fit did not converge", result.params, result.residual_norm);
  return result;
}

}  // namespace neuroquansa
