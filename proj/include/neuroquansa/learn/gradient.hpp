#pragma once

#include <Eigen/Dense>
#include <vector>

#include "neuroquansa/common.hpp"
#include "neuroquansa/distribution.hpp"
#include "neuroquansa/local_energy.hpp"
#include "neuroquansa/samples.hpp"
#include "neuroquansa/tfim.hpp"

namespace neuroquansa {

struct GradientEstimate {
  Eigen::MatrixXd dw;  // d E / d W_ij over the bipartite block, N x N_h
  Eigen::VectorXd db;  // visible biases first, then hidden
  double energy = 0.0;
  double n_samples = 0.0;  // total sample weight
  Distribution p_hat;      // visible histogram of the first pass

  // dW expanded to the full symmetric (N + N_h)^2 layout.
  Eigen::MatrixXd symmetric_weights() const {
    const auto n = dw.rows();
    const auto m = dw.cols();
    Eigen::MatrixXd full = Eigen::MatrixXd::Zero(n + m, n + m);
    full.block(0, n, n, m) = dw;
    full.block(n, 0, m, n) = dw.transpose();
    return full;
  }
};

// Two-pass estimator of Eqs. for dE/dW and dE/db: the first pass over the
// collection builds the visible histogram and from it the local-energy
// table, the second averages (E_loc - E) z_i z_j and (E_loc - E) z_k.
// Samples sharing a visible state are grouped, which leaves the estimate
// unchanged.
inline GradientEstimate estimate_gradient(const SampleSet& samples, const TFIMSpec& spec,
                                          double epsilon = kDefaultEpsilon) {
  spec.validate();
  const int n = samples.states.n_visible();
  const int m = samples.states.n_hidden();
  require(n == spec.n_spins, "sample visible width does not match spin count");
  require(n <= 20, "gradient estimation limited to 20 visible units");
  require(!samples.states.empty(), "empty sample set");

  const std::size_t n_states = std::size_t{1} << n;
  std::vector<double> count(n_states, 0.0);
  Eigen::MatrixXd hidden_sum = Eigen::MatrixXd::Zero(n_states, m);

  const int words = samples.states.words_per_row();
  double total = 0.0;
  for (std::size_t r = 0, rows = samples.states.size(); r < rows; ++r) {
    const double weight = samples.weight(r);
    const std::uint64_t* row = samples.states.row(r);
    const State v = samples.states.visible_state(r);
    count[v] += weight;
    total += weight;
    for (int w = 0; w < words; ++w) {
      std::uint64_t bits = row[w];
      if (w == 0) bits &= ~((n >= 64) ? 0ULL : ((1ULL << n) - 1));  // strip visible part
      while (bits) {
        const int u = w * 64 + std::countr_zero(bits);
        hidden_sum(v, u - n) += weight;
        bits &= bits - 1;
      }
    }
  }
  require(total > 0.0, "sample set has zero total weight");

  Distribution p_hat(n);
  for (std::size_t v = 0; v < n_states; ++v) p_hat[v] = count[v] / total;
  const LocalEnergyTable table(p_hat, spec, epsilon);
  const double e_mean = table.mean(p_hat);

  GradientEstimate grad;
  grad.dw = Eigen::MatrixXd::Zero(n, m);
  grad.db = Eigen::VectorXd::Zero(n + m);
  for (std::size_t v = 0; v < n_states; ++v) {
    if (count[v] == 0.0 && hidden_sum.row(v).isZero(0.0)) continue;
    const double centered = table[v] - e_mean;
    const double cv = centered * count[v];
    for (int i = 0; i < n; ++i) {
      if (!bit(v, i)) continue;
      grad.db[i] += cv;
      grad.dw.row(i) += centered * hidden_sum.row(v);
    }
    grad.db.tail(m) += centered * hidden_sum.row(v).transpose();
  }
  grad.dw /= total;
  grad.db /= total;
  grad.energy = e_mean;
  grad.n_samples = total;
  grad.p_hat = std::move(p_hat);
  return grad;
}

}  // namespace neuroquansa
