#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <memory>

#include "neuroquansa/common.hpp"
#include "neuroquansa/hw/model.hpp"
#include "neuroquansa/rbm.hpp"
#include "neuroquansa/samples.hpp"

namespace neuroquansa {

enum class WeightDomain { Continuous, Integer6Bit };

struct BackendCapability {
  int max_visible = 0;
  int max_hidden = 0;
  WeightDomain domain = WeightDomain::Continuous;
};

// A source of joint (v, h) samples for given network parameters.
// Parameters are passed in backend units: abstract Boltzmann weights for
// continuous backends, LSB units for integer-weighted backends (these are
// rounded and clipped to [-63, 63] on write-out).
class SamplingBackend {
 public:
  virtual ~SamplingBackend() = default;
  virtual BackendCapability capability() const = 0;
  virtual void set_parameters(const Eigen::MatrixXd& weights, const Eigen::VectorXd& biases) = 0;
  virtual SampleSet sample(std::size_t n_samples, int n_runs, std::uint64_t seed) = 0;
  // Abstract weight carried by one backend weight unit.
  virtual double weight_unit() const = 0;
  // Weights as realized after quantization and clipping, in backend units.
  virtual const Eigen::MatrixXd& realized_weights() const = 0;
};

// Exact enumeration over the joint (v, h) space; emits every state once,
// weighted by its exact probability. Test and reference backend.
class ExactEnumerationBackend : public SamplingBackend {
 public:
  ExactEnumerationBackend(int n_visible, int n_hidden)
      : params_(RBMParams::zeros(n_visible, n_hidden)) {
    require(n_visible + n_hidden <= 22, "exact enumeration limited to 22 units");
  }

  BackendCapability capability() const override {
    return {params_.n_visible(), params_.n_hidden(), WeightDomain::Continuous};
  }

  void set_parameters(const Eigen::MatrixXd& weights, const Eigen::VectorXd& biases) override {
    params_.weights = weights;
    params_.visible_bias = biases.head(params_.n_visible());
    params_.hidden_bias = biases.tail(params_.n_hidden());
    params_.validate();
  }

  SampleSet sample(std::size_t /*n_samples*/, int /*n_runs*/, std::uint64_t /*seed*/) override {
    const int n = params_.n_visible();
    const int m = params_.n_hidden();
    const std::size_t joint = std::size_t{1} << (n + m);

    SampleSet set;
    set.states = StateSamples(n, m);
    set.states.reserve(joint);
    set.weights.resize(joint);

    std::vector<double> logw(joint);
    double logw_max = -std::numeric_limits<double>::infinity();
    for (std::size_t z = 0; z < joint; ++z) {
      logw[z] = -params_.energy(z);
      if (logw[z] > logw_max) logw_max = logw[z];
    }
    double norm = 0.0;
    for (std::size_t z = 0; z < joint; ++z) norm += std::exp(logw[z] - logw_max);
    for (std::size_t z = 0; z < joint; ++z) {
      set.states.push_row(static_cast<std::uint64_t>(z));
      set.weights[z] = std::exp(logw[z] - logw_max) / norm;
    }
    return set;
  }

  double weight_unit() const override { return 1.0; }
  const Eigen::MatrixXd& realized_weights() const override { return params_.weights; }
  const RBMParams& params() const { return params_; }

 private:
  RBMParams params_;
};

struct GibbsBackendConfig {
  WeightDomain domain = WeightDomain::Continuous;
  double lsb_scale = 0.02;  // abstract weight per LSB in integer mode
  GibbsConfig gibbs;
  HardwareModel hardware;  // grid/drift constraints, integer mode only
};

// Block-Gibbs reference backend standing in for the chip.
class GibbsBackend : public SamplingBackend {
 public:
  GibbsBackend(int n_visible, int n_hidden, GibbsBackendConfig config = {})
      : config_(std::move(config)), params_(RBMParams::zeros(n_visible, n_hidden)) {
    config_.hardware.validate();
    realized_ = Eigen::MatrixXd::Zero(n_visible, n_hidden);
  }

  BackendCapability capability() const override {
    return {params_.n_visible(), params_.n_hidden(), config_.domain};
  }

  void set_parameters(const Eigen::MatrixXd& weights, const Eigen::VectorXd& biases) override {
    const int n = params_.n_visible();
    const int m = params_.n_hidden();
    require(weights.rows() == n && weights.cols() == m, "weight shape mismatch");
    require(biases.size() == n + m, "bias length mismatch");
    if (config_.domain == WeightDomain::Integer6Bit) {
      Eigen::MatrixXi w_int(n, m);
      for (int j = 0; j < m; ++j)
        for (int i = 0; i < n; ++i) {
          const double clipped = std::max(-63.0, std::min(63.0, weights(i, j)));
          w_int(i, j) = static_cast<int>(std::llround(clipped));
        }
      if (config_.hardware.grid_step > 1)
        w_int = quantize_to_grid(w_int, config_.hardware.grid_step);
      realized_ = w_int.cast<double>();
      params_.weights = config_.lsb_scale * realized_;
    } else {
      realized_ = weights;
      params_.weights = weights;
    }
    params_.visible_bias = biases.head(n);
    params_.hidden_bias = biases.tail(m);
    params_.validate();
  }

  // Integer-weight entry point used by the hardware experiments.
  void set_integer_weights(const Eigen::MatrixXi& w_int, const Eigen::VectorXd& biases) {
    require(config_.domain == WeightDomain::Integer6Bit, "backend is not integer-weighted");
    set_parameters(w_int.cast<double>(), biases);
  }

  SampleSet sample(std::size_t n_samples, int n_runs, std::uint64_t seed) override {
    require(n_samples > 0 && n_runs > 0, "need a positive sample budget");
    SampleSet set;
    set.states = StateSamples(params_.n_visible(), params_.n_hidden());
    set.states.reserve(n_samples);
    const std::size_t per_run = n_samples / n_runs;
    for (int r = 0; r < n_runs; ++r) {
      const std::size_t budget = (r == 0) ? n_samples - per_run * (n_runs - 1) : per_run;
      if (budget == 0) continue;
      const RBMParams effective =
          apply_drift(params_, config_.hardware, next_run_index_ + static_cast<std::uint64_t>(r));
      const StateSamples run =
          gibbs_sample_states(effective, budget, derive_seed(seed, r), config_.gibbs);
      for (std::size_t k = 0; k < run.size(); ++k) set.states.push_row(run.row(k));
    }
    next_run_index_ += static_cast<std::uint64_t>(n_runs);
    return set;
  }

  double weight_unit() const override {
    return config_.domain == WeightDomain::Integer6Bit ? config_.lsb_scale : 1.0;
  }
  const Eigen::MatrixXd& realized_weights() const override { return realized_; }
  const RBMParams& params() const { return params_; }
  HardwareModel& hardware() { return config_.hardware; }

 private:
  GibbsBackendConfig config_;
  RBMParams params_;
  Eigen::MatrixXd realized_;
  std::uint64_t next_run_index_ = 0;
};

}  // namespace neuroquansa
