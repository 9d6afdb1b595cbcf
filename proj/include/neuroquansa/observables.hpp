#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <map>
#include <vector>

#include "neuroquansa/common.hpp"
#include "neuroquansa/curve_fit.hpp"
#include "neuroquansa/distribution.hpp"
#include "neuroquansa/local_energy.hpp"
#include "neuroquansa/tfim.hpp"

namespace neuroquansa {

struct CorrelationFit {
  double amplitude = 0.0;  // A
  double xi = 0.0;         // correlation length
  double offset = 0.0;     // B, finite-size floor
  double amplitude_std = 0.0;
  double xi_std = 0.0;
  double offset_std = 0.0;
  double residual_norm = 0.0;
  bool xi_identifiable = true;  // false on flat input data
};

// Nonlinear least squares of C(d) = A exp(-d / xi) + B.
inline CorrelationFit fit_correlation_length(const std::vector<double>& distances,
                                             const std::vector<double>& czz) {
  require(distances.size() == czz.size(), "distance/value length mismatch");
  require(distances.size() >= 4, "need at least 4 distance points");

  Eigen::VectorXd xs = Eigen::Map<const Eigen::VectorXd>(distances.data(), distances.size());
  Eigen::VectorXd ys = Eigen::Map<const Eigen::VectorXd>(czz.data(), czz.size());

  CorrelationFit fit;
  const double y_span = ys.maxCoeff() - ys.minCoeff();
  if (y_span < 1e-10 * std::max(1.0, ys.cwiseAbs().maxCoeff())) {
    fit.offset = ys.mean();
    fit.xi_identifiable = false;
    return fit;
  }

  // Starting point: floor from the farthest point, decay rate from the
  // first two points above the floor.
  double b0 = ys[ys.size() - 1];
  double a0 = ys[0] - b0;
  if (std::abs(a0) < 1e-12) a0 = y_span;
  double xi0 = 1.0;
  {
    const double r0 = ys[0] - b0;
    const double r1 = ys[1] - b0;
    if (r0 * r1 > 0.0 && std::abs(r1) < std::abs(r0)) {
      xi0 = (xs[1] - xs[0]) / std::log(std::abs(r0) / std::abs(r1));
    }
  }
  Eigen::VectorXd p(3);
  p << a0, std::max(xi0, 1e-2), b0;

  const CurveModel model = [](double d, const Eigen::VectorXd& q) {
    return q[0] * std::exp(-d / q[1]) + q[2];
  };
  const CurveJacobian jac = [](double d, const Eigen::VectorXd& q,
                               Eigen::Ref<Eigen::VectorXd> g) {
    const double e = std::exp(-d / q[1]);
    g[0] = e;
    g[1] = q[0] * e * d / (q[1] * q[1]);
    g[2] = 1.0;
  };
  const ParamGuard guard = [](const Eigen::VectorXd& q) { return q[1] > 1e-6; };

  const FitResult r = levenberg_marquardt(model, jac, xs, ys, p, guard);
  fit.amplitude = r.params[0];
  fit.xi = r.params[1];
  fit.offset = r.params[2];
  fit.amplitude_std = r.std_errors[0];
  fit.xi_std = r.std_errors[1];
  fit.offset_std = r.std_errors[2];
  fit.residual_norm = r.residual_norm;
  return fit;
}

struct ObservableSet {
  double sigma_x = 0.0;               // average x magnetization
  std::vector<double> czz;            // C_zz(d), d = 0 .. floor(N/2)
  CorrelationFit correlation;         // exponential fit of czz
  std::map<double, double> m_histogram;  // z magnetization m -> probability
};

// Average x magnetization evaluated from square-root products, assuming
// non-negative amplitudes.
inline double sigma_x_from_distribution(const Distribution& p, const TFIMSpec& spec,
                                        double epsilon = kDefaultEpsilon) {
  std::vector<double> sqrt_p(p.size());
  for (std::size_t v = 0; v < p.size(); ++v) sqrt_p[v] = std::sqrt(p[v] + epsilon);
  double total = 0.0;
  for (int i = 0; i < spec.n_spins; ++i) {
    const std::size_t mask = std::size_t{1} << i;
    for (std::size_t v = 0; v < p.size(); ++v) total += sqrt_p[v] * sqrt_p[v ^ mask];
  }
  return total / spec.n_spins;
}

// Two-point zz correlation C_zz(d) = (1/N) sum_i <s_i s_{i+d}>.
inline double czz_from_distribution(const Distribution& p, const TFIMSpec& spec, int d) {
  double total = 0.0;
  for (std::size_t v = 0; v < p.size(); ++v) {
    if (p[v] == 0.0) continue;
    int aligned = 0;
    for (int i = 0; i < spec.n_spins; ++i) {
      const int j = (i + d) % spec.n_spins;
      aligned += (bit(v, i) == bit(v, j)) ? 1 : -1;
    }
    total += p[v] * aligned;
  }
  return total / spec.n_spins;
}

inline ObservableSet observables(const Distribution& p_hat, const TFIMSpec& spec,
                                 double epsilon = kDefaultEpsilon) {
  spec.validate();
  require(p_hat.n_visible() == spec.n_spins, "distribution size does not match spin count");
  require(std::abs(p_hat.total() - 1.0) < 1e-9, "distribution must be normalized");

  ObservableSet obs;
  obs.sigma_x = sigma_x_from_distribution(p_hat, spec, epsilon);

  const int d_max = spec.n_spins / 2;
  std::vector<double> ds;
  for (int d = 0; d <= d_max; ++d) {
    obs.czz.push_back(czz_from_distribution(p_hat, spec, d));
    ds.push_back(d);
  }
  if (obs.czz.size() >= 4) {
    try {
      obs.correlation = fit_correlation_length(ds, obs.czz);
    } catch (const FitError& e) {
      obs.correlation.amplitude = e.best_params[0];
      obs.correlation.xi = e.best_params[1];
      obs.correlation.offset = e.best_params[2];
      obs.correlation.xi_identifiable = false;
    }
  } else {
    obs.correlation.xi_identifiable = false;
  }

  for (std::size_t v = 0; v < p_hat.size(); ++v) {
    if (p_hat[v] == 0.0) continue;
    int n_up = 0;
    for (int i = 0; i < spec.n_spins; ++i) n_up += bit(v, i);
    const double m = n_up - 0.5 * spec.n_spins;
    obs.m_histogram[m] += p_hat[v];
  }
  return obs;
}

// State overlap F = sum_v sqrt(p_hat(v)) psi_0(v) in [0, 1].
inline double fidelity(const Distribution& p_hat, const GroundStateSolution& reference) {
  require(p_hat.size() == static_cast<std::size_t>(reference.amplitudes.size()),
          "distribution and reference dimensions differ");
  double f = 0.0;
  for (std::size_t v = 0; v < p_hat.size(); ++v)
    f += std::sqrt(p_hat[v]) * reference.amplitudes[v];
  return std::min(f, 1.0);
}

inline double infidelity(const Distribution& p_hat, const GroundStateSolution& reference) {
  return 1.0 - fidelity(p_hat, reference);
}

}  // namespace neuroquansa
