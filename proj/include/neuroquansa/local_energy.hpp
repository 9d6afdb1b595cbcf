#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "neuroquansa/common.hpp"
#include "neuroquansa/distribution.hpp"
#include "neuroquansa/tfim.hpp"

namespace neuroquansa {

// Default regularizer added under the square roots of the local energy.
inline constexpr double kDefaultEpsilon = 1e-12;

// Local energy of a single configuration,
//   E_loc(v) = -J sum_i s_i s_{i+1} - h sum_i sqrt(p(v^i) + eps) / sqrt(p(v) + eps),
// where v^i flips spin i. Probabilities missing from p_hat enter as zero
// and are absorbed by the regularizer.
inline double local_energy(State v, const Distribution& p_hat, const TFIMSpec& spec,
                           double epsilon = kDefaultEpsilon) {
  double offdiag = 0.0;
  const double pv = std::sqrt(p_hat[v] + epsilon);
  for (int i = 0; i < spec.n_spins; ++i) {
    const State flipped = v ^ (State{1} << i);
    offdiag += std::sqrt(p_hat[flipped] + epsilon);
  }
  return spec.diagonal(v) - spec.field * offdiag / pv;
}

// Local energies tabulated over the full visible space of a distribution.
class LocalEnergyTable {
 public:
  LocalEnergyTable(const Distribution& p_hat, const TFIMSpec& spec,
                   double epsilon = kDefaultEpsilon)
      : epsilon_(epsilon), values_(p_hat.size()) {
    spec.validate();
    require(p_hat.n_visible() == spec.n_spins, "distribution size does not match spin count");
    require(epsilon >= 0.0, "epsilon must be non-negative");
    std::vector<double> sqrt_p(p_hat.size());
    for (std::size_t v = 0; v < p_hat.size(); ++v) sqrt_p[v] = std::sqrt(p_hat[v] + epsilon);
    for (std::size_t v = 0; v < p_hat.size(); ++v) {
      double offdiag = 0.0;
      for (int i = 0; i < spec.n_spins; ++i) offdiag += sqrt_p[v ^ (std::size_t{1} << i)];
      // 0/0 can only appear for eps = 0 on zero-probability states, which
      // never contribute to the weighted mean; park a zero there.
      values_[v] = sqrt_p[v] > 0.0
                       ? spec.diagonal(static_cast<State>(v)) - spec.field * offdiag / sqrt_p[v]
                       : 0.0;
    }
  }

  double epsilon() const { return epsilon_; }
  double operator[](std::size_t v) const { return values_[v]; }
  std::size_t size() const { return values_.size(); }

  // Weighted mean over the distribution; equals the variational energy.
  double mean(const Distribution& p_hat) const {
    require(p_hat.size() == values_.size(), "distribution size mismatch");
    double e = 0.0;
    for (std::size_t v = 0; v < values_.size(); ++v)
      if (p_hat[v] > 0.0) e += p_hat[v] * values_[v];
    return e;
  }

 private:
  double epsilon_;
  std::vector<double> values_;
};

struct VariationalEnergy {
  double energy = 0.0;
  std::optional<double> delta_e;  // |E - E0| / N when a reference is given
};

// E_theta = sum_v p(v) E_loc(v) over the supplied distribution estimate.
inline VariationalEnergy variational_energy(const Distribution& p_hat, const TFIMSpec& spec,
                                            double epsilon = kDefaultEpsilon,
                                            std::optional<double> reference_energy = {}) {
  require(p_hat.total() > 0.0, "empty distribution");
  const LocalEnergyTable table(p_hat, spec, epsilon);
  VariationalEnergy result;
  result.energy = table.mean(p_hat);
  if (reference_energy)
    result.delta_e = std::abs(result.energy - *reference_energy) / spec.n_spins;
  return result;
}

}  // namespace neuroquansa
