#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>

#include "neuroquansa/common.hpp"
#include "neuroquansa/rbm.hpp"

namespace neuroquansa {

// Parameter constraints and instabilities of the emulated analog substrate.
struct HardwareModel {
  int weight_clip = 63;             // |w| <= 63, 6 bit + sign
  int grid_step = 1;                // coarse weight grid, 128/grid_step + 1 values
  double drift_sigma = 0.0;         // per-run weight jitter, abstract units
  double bias_jitter = 0.0;         // per-run bias jitter, abstract units
  double pseudo_flip_fraction = 0.0;
  std::uint64_t seed = 0;

  void validate() const {
    require(weight_clip == 63, "weight clip is fixed at 63");
    require(grid_step == 1 || grid_step == 2 || grid_step == 4 || grid_step == 8 ||
                grid_step == 16 || grid_step == 32 || grid_step == 64,
            "grid step must be in {1,2,4,8,16,32,64}");
    require_finite(drift_sigma, "drift_sigma");
    require_finite(bias_jitter, "bias_jitter");
    require(drift_sigma >= 0.0 && bias_jitter >= 0.0, "jitter sigmas must be >= 0");
    require(pseudo_flip_fraction >= 0.0 && pseudo_flip_fraction <= 1.0,
            "pseudo_flip_fraction must be in [0, 1]");
  }
};

// Nearest point of the grid built from 0 in +-step increments up to +-64,
// with the edges decremented to +-63. Ties round toward zero.
inline int quantize_weight_to_grid(int w, int step) {
  require(step == 1 || step == 2 || step == 4 || step == 8 || step == 16 || step == 32 ||
              step == 64,
          "grid step must be in {1,2,4,8,16,32,64}");
  require(w >= -63 && w <= 63, "weight outside the 6-bit range");
  const int a = std::abs(w);
  int lower = (a / step) * step;
  int upper = lower + step;
  if (lower > 63) lower = 63;
  if (upper > 63) upper = 63;
  const int d_lower = std::abs(a - lower);
  const int d_upper = std::abs(a - upper);
  const int q = (d_upper < d_lower) ? upper : lower;
  return w < 0 ? -q : q;
}

inline Eigen::MatrixXi quantize_to_grid(const Eigen::MatrixXi& w, int step) {
  Eigen::MatrixXi q(w.rows(), w.cols());
  for (Eigen::Index j = 0; j < w.cols(); ++j)
    for (Eigen::Index i = 0; i < w.rows(); ++i) q(i, j) = quantize_weight_to_grid(w(i, j), step);
  return q;
}

// Changes exactly round(p_flip * n) uniformly chosen entries by +-1 and
// clips to the 6-bit range.
inline Eigen::MatrixXi pseudo_update(const Eigen::MatrixXi& w, double p_flip,
                                     std::uint64_t seed) {
  require(p_flip >= 0.0 && p_flip <= 1.0, "p_flip must be in [0, 1]");
  const auto n = static_cast<std::size_t>(w.size());
  const auto k = static_cast<std::size_t>(std::llround(p_flip * static_cast<double>(n)));

  std::vector<std::size_t> indices(n);
  for (std::size_t i = 0; i < n; ++i) indices[i] = i;
  std::mt19937_64 rng(derive_seed(seed, 0x70736575ULL));
  for (std::size_t i = 0; i < k; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, n - 1);
    std::swap(indices[i], indices[pick(rng)]);
  }

  Eigen::MatrixXi out = w;
  for (std::size_t i = 0; i < k; ++i) {
    const auto idx = static_cast<Eigen::Index>(indices[i]);
    const int delta = (rng() & 1) ? 1 : -1;
    int value = out(idx) + delta;
    value = std::max(-63, std::min(63, value));
    out(idx) = value;
  }
  return out;
}

// Effective parameters of one hardware run: programmed values plus
// independent zero-mean Gaussian jitter, deterministic per (seed, run).
// The programmed parameters are left untouched.
inline RBMParams apply_drift(const RBMParams& programmed, const HardwareModel& model,
                             std::uint64_t run_index) {
  model.validate();
  if (model.drift_sigma == 0.0 && model.bias_jitter == 0.0) return programmed;
  std::mt19937_64 rng(derive_seed(model.seed, 0x64726966ULL, run_index));
  std::normal_distribution<double> weight_noise(0.0, model.drift_sigma);
  std::normal_distribution<double> bias_noise(0.0, model.bias_jitter);
  RBMParams effective = programmed;
  if (model.drift_sigma > 0.0) {
    for (Eigen::Index j = 0; j < effective.weights.cols(); ++j)
      for (Eigen::Index i = 0; i < effective.weights.rows(); ++i)
        effective.weights(i, j) += weight_noise(rng);
  }
  if (model.bias_jitter > 0.0) {
    for (Eigen::Index i = 0; i < effective.visible_bias.size(); ++i)
      effective.visible_bias[i] += bias_noise(rng);
    for (Eigen::Index j = 0; j < effective.hidden_bias.size(); ++j)
      effective.hidden_bias[j] += bias_noise(rng);
  }
  return effective;
}

}  // namespace neuroquansa
