#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <vector>

#include "neuroquansa/common.hpp"
#include "neuroquansa/distribution.hpp"
#include "neuroquansa/samples.hpp"

namespace neuroquansa {

// Abstract parameters of a bipartite Boltzmann machine,
//   p(v, h) = exp(v^T W h + b_v . v + b_h . h) / Z.
struct RBMParams {
  Eigen::MatrixXd weights;       // N x N_h
  Eigen::VectorXd visible_bias;  // N
  Eigen::VectorXd hidden_bias;   // N_h

  int n_visible() const { return static_cast<int>(weights.rows()); }
  int n_hidden() const { return static_cast<int>(weights.cols()); }

  void validate() const {
    require(weights.rows() == visible_bias.size(), "visible bias length mismatch");
    require(weights.cols() == hidden_bias.size(), "hidden bias length mismatch");
    require(weights.allFinite() && visible_bias.allFinite() && hidden_bias.allFinite(),
            "RBM parameters must be finite");
  }

  static RBMParams zeros(int n_visible, int n_hidden) {
    return {Eigen::MatrixXd::Zero(n_visible, n_hidden), Eigen::VectorXd::Zero(n_visible),
            Eigen::VectorXd::Zero(n_hidden)};
  }

  // Network energy eps(z) = -v^T W h - b.z of a packed joint state.
  double energy(std::uint64_t z) const {
    const int n = n_visible();
    const int m = n_hidden();
    double e = 0.0;
    for (int i = 0; i < n; ++i) {
      if (!bit(z, i)) continue;
      e -= visible_bias[i];
      for (int j = 0; j < m; ++j)
        if (bit(z, n + j)) e -= weights(i, j);
    }
    for (int j = 0; j < m; ++j)
      if (bit(z, n + j)) e -= hidden_bias[j];
    return e;
  }
};

struct ExactDistribution {
  Distribution visible;  // marginal p(v), normalized
  double partition_sum;  // Z_theta over the joint (v, h) space
};

// Marginal over the hidden layer, p(v) ~ exp(b_v.v) prod_j (1 + exp(b_h_j
// + (W^T v)_j)), evaluated in log space. Enumerates all 2^N visible states.
inline ExactDistribution exact_marginal(const RBMParams& params) {
  params.validate();
  const int n = params.n_visible();
  const int m = params.n_hidden();
  require(n <= 20, "exact marginal limited to n_visible <= 20");

  const std::size_t n_states = std::size_t{1} << n;
  std::vector<double> logw(n_states);
  double logw_max = -std::numeric_limits<double>::infinity();
  Eigen::VectorXd v(n);
  for (std::size_t s = 0; s < n_states; ++s) {
    for (int i = 0; i < n; ++i) v[i] = bit(s, i) ? 1.0 : 0.0;
    double lw = params.visible_bias.dot(v);
    const Eigen::VectorXd theta = params.hidden_bias + params.weights.transpose() * v;
    for (int j = 0; j < m; ++j) lw += softplus(theta[j]);
    logw[s] = lw;
    if (lw > logw_max) logw_max = lw;
  }
  double z_shifted = 0.0;
  for (std::size_t s = 0; s < n_states; ++s) z_shifted += std::exp(logw[s] - logw_max);

  Distribution p(n);
  for (std::size_t s = 0; s < n_states; ++s) p[s] = std::exp(logw[s] - logw_max) / z_shifted;
  return {std::move(p), z_shifted * std::exp(logw_max)};
}

enum class ChainInit { AllOnes, AllZeros, Random };

struct GibbsConfig {
  std::size_t burn_in = 1000;  // sweeps discarded before recording
  std::size_t thinning = 1;    // sweeps per recorded sample
  ChainInit init = ChainInit::AllOnes;
};

namespace detail {

inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

class GibbsChain {
 public:
  GibbsChain(const RBMParams& params, std::uint64_t seed, ChainInit init)
      : params_(&params), rng_(seed) {
    const int n = params.n_visible();
    const int m = params.n_hidden();
    v_.resize(n);
    h_.resize(m);
    switch (init) {
      case ChainInit::AllOnes:
        v_.setOnes();
        h_.setOnes();
        break;
      case ChainInit::AllZeros:
        v_.setZero();
        h_.setZero();
        break;
      case ChainInit::Random:
        for (int i = 0; i < n; ++i) v_[i] = uniform01(rng_) < 0.5 ? 0.0 : 1.0;
        for (int j = 0; j < m; ++j) h_[j] = uniform01(rng_) < 0.5 ? 0.0 : 1.0;
        break;
    }
    theta_.resize(std::max(n, m));
  }

  // One block sweep: redraw all hidden units given v, then all visible
  // units given h.
  void sweep() {
    const int n = params_->n_visible();
    const int m = params_->n_hidden();
    theta_.head(m) = params_->hidden_bias + params_->weights.transpose() * v_;
    for (int j = 0; j < m; ++j) h_[j] = uniform01(rng_) < logistic(theta_[j]) ? 1.0 : 0.0;
    theta_.head(n) = params_->visible_bias + params_->weights * h_;
    for (int i = 0; i < n; ++i) v_[i] = uniform01(rng_) < logistic(theta_[i]) ? 1.0 : 0.0;
  }

  void pack(std::uint64_t* words, int words_per_row) const {
    const int n = params_->n_visible();
    const int m = params_->n_hidden();
    for (int w = 0; w < words_per_row; ++w) words[w] = 0;
    for (int i = 0; i < n; ++i)
      if (v_[i] > 0.5) words[i / 64] |= 1ULL << (i % 64);
    for (int j = 0; j < m; ++j) {
      const int u = n + j;
      if (h_[j] > 0.5) words[u / 64] |= 1ULL << (u % 64);
    }
  }

  State visible_state() const {
    State s = 0;
    for (int i = 0; i < params_->n_visible(); ++i)
      if (v_[i] > 0.5) s |= State{1} << i;
    return s;
  }

 private:
  const RBMParams* params_;
  std::mt19937_64 rng_;
  Eigen::VectorXd v_, h_, theta_;
};

}  // namespace detail

// Block-Gibbs joint samples, one row per recorded sweep.
inline StateSamples gibbs_sample_states(const RBMParams& params, std::size_t n_samples,
                                        std::uint64_t seed, const GibbsConfig& config = {}) {
  params.validate();
  detail::GibbsChain chain(params, seed, config.init);
  for (std::size_t s = 0; s < config.burn_in; ++s) chain.sweep();

  StateSamples samples(params.n_visible(), params.n_hidden());
  samples.reserve(n_samples);
  std::uint64_t words[4] = {0, 0, 0, 0};
  for (std::size_t k = 0; k < n_samples; ++k) {
    for (std::size_t t = 0; t < std::max<std::size_t>(config.thinning, 1); ++t) chain.sweep();
    chain.pack(words, samples.words_per_row());
    samples.push_row(words);
  }
  return samples;
}

// Visible-state histogram from a block-Gibbs run.
inline EmpiricalDistribution gibbs_sample(const RBMParams& params, std::size_t n_samples,
                                          std::size_t burn_in, std::size_t thinning,
                                          std::uint64_t seed) {
  require(n_samples > 0, "n_samples must be positive");
  params.validate();
  GibbsConfig config;
  config.burn_in = burn_in;
  config.thinning = thinning;
  detail::GibbsChain chain(params, seed, config.init);
  for (std::size_t s = 0; s < burn_in; ++s) chain.sweep();
  EmpiricalDistribution hist(params.n_visible());
  for (std::size_t k = 0; k < n_samples; ++k) {
    for (std::size_t t = 0; t < std::max<std::size_t>(thinning, 1); ++t) chain.sweep();
    hist.add(chain.visible_state());
  }
  return hist;
}

}  // namespace neuroquansa
