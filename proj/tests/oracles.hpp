// Independent reference computations used by the test suites. These stay
// deliberately separate from the library implementations they check.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "neuroquansa/distribution.hpp"
#include "neuroquansa/rbm.hpp"

namespace oracles {

#ifndef M_PI
#define M_PI 3.14159265358979323846
#endif

// Ground state energy of the periodic transverse-field Ising chain from
// the Jordan-Wigner free-fermion solution. Both fermion parity sectors are
// evaluated: the even sector fills the Bogoliubov vacuum over antiperiodic
// momenta, the odd sector uses periodic momenta with a forced occupation
// of the k = 0 mode.
inline double jordan_wigner_ground_energy(int n, double j, double h) {
  const auto eps = [&](double k) {
    return 2.0 * std::sqrt(j * j + h * h - 2.0 * j * h * std::cos(k));
  };

  double e_even = 0.0;
  for (int m = 0; m < n; ++m) e_even -= 0.5 * eps(2.0 * M_PI * (m + 0.5) / n);

  double e_odd = 0.0;
  for (int m = 1; m < n; ++m) {
    if (n % 2 == 0 && 2 * m == n) continue;  // unpaired k = pi mode
    e_odd -= 0.5 * eps(2.0 * M_PI * m / n);
  }
  e_odd += (h - j);                  // k = 0 mode, occupied to fix the parity
  if (n % 2 == 0) e_odd -= (h + j);  // k = pi mode, left empty

  return std::min(e_even, e_odd);
}

// Brute-force RBM visible marginal: sums exp(-energy) over every joint
// state with a from-scratch energy evaluation.
inline neuroquansa::Distribution brute_force_marginal(const Eigen::MatrixXd& w,
                                                      const Eigen::VectorXd& b_v,
                                                      const Eigen::VectorXd& b_h,
                                                      double* partition_sum = nullptr) {
  const int n = static_cast<int>(w.rows());
  const int m = static_cast<int>(w.cols());
  neuroquansa::Distribution p(n);
  double z_total = 0.0;
  for (std::size_t v = 0; v < (std::size_t{1} << n); ++v) {
    double pv = 0.0;
    for (std::size_t h = 0; h < (std::size_t{1} << m); ++h) {
      double energy = 0.0;
      for (int i = 0; i < n; ++i) {
        if (!((v >> i) & 1)) continue;
        energy -= b_v[i];
        for (int k = 0; k < m; ++k)
          if ((h >> k) & 1) energy -= w(i, k);
      }
      for (int k = 0; k < m; ++k)
        if ((h >> k) & 1) energy -= b_h[k];
      pv += std::exp(-energy);
    }
    p[v] = pv;
    z_total += pv;
  }
  for (std::size_t v = 0; v < p.size(); ++v) p[v] /= z_total;
  if (partition_sum) *partition_sum = z_total;
  return p;
}

inline neuroquansa::RBMParams random_rbm(int n, int m, double scale, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-scale, scale);
  neuroquansa::RBMParams params = neuroquansa::RBMParams::zeros(n, m);
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < n; ++i) params.weights(i, j) = u(rng);
  for (int i = 0; i < n; ++i) params.visible_bias[i] = u(rng);
  for (int j = 0; j < m; ++j) params.hidden_bias[j] = u(rng);
  return params;
}

// Least-squares slope of log(y) against log(x).
inline double log_log_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  const int n = static_cast<int>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    const double lx = std::log(xs[i]);
    const double ly = std::log(ys[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace oracles
