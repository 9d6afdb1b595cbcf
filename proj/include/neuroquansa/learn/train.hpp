#pragma once

#include <Eigen/Dense>
#include <chrono>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "neuroquansa/common.hpp"
#include "neuroquansa/learn/adam.hpp"
#include "neuroquansa/learn/backend.hpp"
#include "neuroquansa/learn/gradient.hpp"
#include "neuroquansa/observables.hpp"
#include "neuroquansa/tfim.hpp"

namespace neuroquansa {

struct TrainingConfig {
  long iterations = 1500;
  std::size_t samples_per_iteration = 200000;
  int runs_per_iteration = 3;
  double learning_rate = 1.0;  // alpha(1)
  double lr_decay = 0.999;     // gamma_lr
  double epsilon = kDefaultEpsilon;
  double bias_init_offset = 0.0;  // Delta b, applied on top of the activation midpoint
  int weight_init_max = 5;        // initial weights are uniform integers in [-max, max]
  double continuous_init_unit = 0.1;  // abstract weight per init integer, continuous backends
  std::uint64_t seed = 1;

  void validate() const {
    require(iterations >= 0, "iterations must be >= 0");
    require(samples_per_iteration > 0, "samples_per_iteration must be positive");
    require(runs_per_iteration > 0, "runs_per_iteration must be positive");
    require(learning_rate > 0.0 && lr_decay > 0.0 && lr_decay <= 1.0, "bad learning rate");
    require(epsilon >= 0.0, "epsilon must be >= 0");
    require(weight_init_max >= 0 && weight_init_max <= 63, "weight_init_max out of range");
  }
};

struct TraceRow {
  long iteration = 0;
  double energy = 0.0;
  double delta_e = 0.0;
  double infidelity = 0.0;
  double dkl = 0.0;
  double flip_fraction = 0.0;
  double wall_ms = 0.0;
};

// Master parameters and optimizer moments; serializable for resumption.
struct TrainState {
  Eigen::MatrixXd weights;  // backend units
  Eigen::VectorXd biases;
  AdamState adam;
  long next_iteration = 1;
};

struct TrainResult {
  std::vector<TraceRow> trace;
  TrainState state;
  Distribution final_distribution;  // visible histogram of the last iteration
  bool completed = false;
  std::string error;
};

inline TrainState initial_train_state(const SamplingBackend& backend,
                                      const TrainingConfig& config) {
  const BackendCapability cap = backend.capability();
  const int n = cap.max_visible;
  const int m = cap.max_hidden;
  const double unit =
      cap.domain == WeightDomain::Integer6Bit ? 1.0 : config.continuous_init_unit;

  TrainState state;
  state.weights.resize(n, m);
  std::mt19937_64 rng(derive_seed(config.seed, 0x696e6974ULL));
  std::uniform_int_distribution<int> w0(-config.weight_init_max, config.weight_init_max);
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < n; ++i) state.weights(i, j) = unit * w0(rng);
  // Activation midpoint corresponds to zero abstract bias.
  state.biases = Eigen::VectorXd::Constant(n + m, config.bias_init_offset);
  state.adam = AdamState(n * m + n + m);
  return state;
}

using IterationCallback = std::function<void(const TraceRow&, const TrainState&)>;

// Variational ground-state search: alternates backend sampling with
// host-side gradient estimation and Adam updates of the master parameters.
inline TrainResult train(const TFIMSpec& spec, SamplingBackend& backend,
                         const TrainingConfig& config, TrainState state,
                         const IterationCallback& on_iteration = {}) {
  spec.validate();
  config.validate();
  const BackendCapability cap = backend.capability();
  require(cap.max_visible == spec.n_spins, "backend visible layer must match the spin count");

  const GroundStateSolution ground = exact_ground_state(spec);
  const Distribution ground_distribution = ground.distribution();

  const int n = cap.max_visible;
  const int m = cap.max_hidden;
  // Granularity used for the weight-change diagnostic; integer backends
  // report flips of the realized 6-bit weights.
  const double flip_quantum =
      cap.domain == WeightDomain::Integer6Bit ? 1.0 : config.continuous_init_unit;

  TrainResult result;
  result.trace.reserve(config.iterations);

  backend.set_parameters(state.weights, state.biases);
  Eigen::MatrixXd previous_realized = backend.realized_weights();

  for (long t = state.next_iteration; t <= config.iterations; ++t) {
    const auto t_start = std::chrono::steady_clock::now();

    SampleSet samples;
    try {
      samples = backend.sample(config.samples_per_iteration, config.runs_per_iteration,
                               derive_seed(config.seed, 0x73616d70ULL, t));
    } catch (const std::exception&) {
      try {
        samples = backend.sample(config.samples_per_iteration, config.runs_per_iteration,
                                 derive_seed(config.seed, 0x73616d70ULL, t, 1));
      } catch (const std::exception& retry_error) {
        result.error = "backend failed twice at iteration " + std::to_string(t) + ": " +
                       retry_error.what();
        result.state = std::move(state);
        if (!result.trace.empty()) {
          // Partial trace is preserved for inspection.
          result.final_distribution = Distribution(n);
        }
        return result;
      }
    }

    const GradientEstimate grad = estimate_gradient(samples, spec, config.epsilon);

    TraceRow row;
    row.iteration = t;
    row.energy = grad.energy;
    row.delta_e = std::abs(grad.energy - ground.energy) / spec.n_spins;
    row.infidelity = infidelity(grad.p_hat, ground);
    row.dkl = dkl(grad.p_hat, ground_distribution);

    // Chain rule into backend units, then Adam on the flattened parameters.
    Eigen::ArrayXd flat(n * m + n + m);
    flat.head(n * m) =
        Eigen::Map<const Eigen::ArrayXd>(grad.dw.data(), n * m) * backend.weight_unit();
    flat.tail(n + m) = grad.db.array();
    const Eigen::ArrayXd delta =
        adam_step(state.adam, flat, lr_schedule(t, config.learning_rate, config.lr_decay));
    Eigen::Map<Eigen::ArrayXd>(state.weights.data(), n * m) += delta.head(n * m);
    state.biases.array() += delta.tail(n + m);
    state.next_iteration = t + 1;

    backend.set_parameters(state.weights, state.biases);
    const Eigen::MatrixXd& realized = backend.realized_weights();
    long flips = 0;
    for (int j = 0; j < m; ++j)
      for (int i = 0; i < n; ++i)
        if (std::llround(realized(i, j) / flip_quantum) !=
            std::llround(previous_realized(i, j) / flip_quantum))
          ++flips;
    row.flip_fraction = static_cast<double>(flips) / static_cast<double>(n * m);
    previous_realized = realized;

    row.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                            t_start)
                      .count();
    result.trace.push_back(row);
    if (on_iteration) on_iteration(row, state);
    if (t == config.iterations) result.final_distribution = grad.p_hat;
  }

  result.state = std::move(state);
  result.completed = true;
  return result;
}

inline TrainResult train(const TFIMSpec& spec, SamplingBackend& backend,
                         const TrainingConfig& config,
                         const IterationCallback& on_iteration = {}) {
  return train(spec, backend, config, initial_train_state(backend, config), on_iteration);
}

}  // namespace neuroquansa
