#pragma once

#include <Eigen/Dense>

#include "neuroquansa/common.hpp"

namespace neuroquansa {

// Adam running moments. Canonical hyperparameters; moments are stored
// uncorrected and bias-corrected where they enter the update.
struct AdamState {
  Eigen::ArrayXd first_moment;
  Eigen::ArrayXd second_moment;
  long step = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  explicit AdamState(Eigen::Index size = 0)
      : first_moment(Eigen::ArrayXd::Zero(size)), second_moment(Eigen::ArrayXd::Zero(size)) {}
};

// Exponentially decaying step size, eta(1) = alpha1, eta(t+1) = eta(t) * gamma.
inline double lr_schedule(long t, double alpha1 = 1.0, double gamma = 0.999) {
  require(t >= 1, "schedule is 1-indexed");
  return alpha1 * std::pow(gamma, static_cast<double>(t - 1));
}

// One Adam update. Returns the parameter delta
//   -eta * mhat / (sqrt(vhat) + eps_adam)
// so that callers apply theta += delta.
inline Eigen::ArrayXd adam_step(AdamState& state, const Eigen::ArrayXd& gradient, double lr) {
  require(gradient.size() == state.first_moment.size(), "gradient shape mismatch");
  require(gradient.allFinite(), "non-finite gradient");
  state.step += 1;
  const double t = static_cast<double>(state.step);
  state.first_moment = state.beta1 * state.first_moment + (1.0 - state.beta1) * gradient;
  state.second_moment =
      state.beta2 * state.second_moment + (1.0 - state.beta2) * gradient.square();
  const Eigen::ArrayXd m_hat = state.first_moment / (1.0 - std::pow(state.beta1, t));
  const Eigen::ArrayXd v_hat = state.second_moment / (1.0 - std::pow(state.beta2, t));
  return -lr * m_hat / (v_hat.sqrt() + state.epsilon);
}

}  // namespace neuroquansa
