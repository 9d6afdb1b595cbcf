#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SparseCore>
#include <cmath>
#include <cstdint>
#include <vector>

#include "neuroquansa/common.hpp"
#include "neuroquansa/distribution.hpp"

namespace neuroquansa {

// Transverse-field Ising chain
//   H = -J sum_i sigma_z^i sigma_z^{i+1} - h sum_i sigma_x^i
// with periodic boundaries. Spin i maps to bit i of the state index,
// bit 1 <-> up <-> s = +1.
struct TFIMSpec {
  int n_spins = 8;
  double coupling = 1.0;  // J > 0 (ferromagnetic, stoquastic in the z basis)
  double field = 1.0;     // h >= 0

  void validate() const {
    require(n_spins >= 3, "TFIM requires at least 3 spins");
    require_finite(coupling, "coupling");
    require_finite(field, "field");
    require(coupling >= 0.0, "coupling J must be non-negative");
    require(field >= 0.0, "field h must be non-negative");
  }

  std::size_t dim() const { return std::size_t{1} << n_spins; }

  // Diagonal bond energy -J sum_i s_i s_{i+1} of a basis state.
  double diagonal(State v) const {
    int aligned = 0;
    for (int i = 0; i < n_spins; ++i) {
      const int j = (i + 1) % n_spins;
      aligned += (bit(v, i) == bit(v, j)) ? 1 : -1;
    }
    return -coupling * aligned;
  }
};

inline Eigen::SparseMatrix<double> build_hamiltonian(const TFIMSpec& spec) {
  spec.validate();
  require(spec.n_spins <= 16, "explicit Hamiltonian limited to 16 spins");
  const std::size_t dim = spec.dim();
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(dim * (spec.n_spins + 1));
  for (std::size_t v = 0; v < dim; ++v) {
    triplets.emplace_back(v, v, spec.diagonal(static_cast<State>(v)));
    for (int i = 0; i < spec.n_spins; ++i)
      triplets.emplace_back(v ^ (std::size_t{1} << i), v, -spec.field);
  }
  Eigen::SparseMatrix<double> h(dim, dim);
  h.setFromTriplets(triplets.begin(), triplets.end());
  return h;
}

// y = H x without materializing the matrix.
inline void apply_hamiltonian(const TFIMSpec& spec, const Eigen::VectorXd& x, Eigen::VectorXd& y) {
  const std::size_t dim = spec.dim();
  y.resize(dim);
  for (std::size_t v = 0; v < dim; ++v) y[v] = spec.diagonal(static_cast<State>(v)) * x[v];
  for (int i = 0; i < spec.n_spins; ++i) {
    const std::size_t mask = std::size_t{1} << i;
    for (std::size_t v = 0; v < dim; ++v) y[v] -= spec.field * x[v ^ mask];
  }
}

struct GroundStateSolution {
  double energy = 0.0;
  Eigen::VectorXd amplitudes;  // unit norm, non-negative for h > 0

  Distribution distribution() const {
    const int n = static_cast<int>(std::round(std::log2(static_cast<double>(amplitudes.size()))));
    Distribution p(n);
    for (std::size_t v = 0; v < static_cast<std::size_t>(amplitudes.size()); ++v)
      p[v] = amplitudes[v] * amplitudes[v];
    return p;
  }
};

namespace detail {

// Lanczos with full reorthogonalization on the implicit matvec.
inline GroundStateSolution lanczos_ground_state(const TFIMSpec& spec) {
  const std::size_t dim = spec.dim();
  const int max_steps = std::min<std::size_t>(dim, 140);

  std::vector<Eigen::VectorXd> basis;
  basis.reserve(max_steps);
  Eigen::VectorXd v = Eigen::VectorXd::Ones(dim).normalized();
  Eigen::VectorXd w(dim);
  std::vector<double> alpha, beta;

  GroundStateSolution best;
  for (int step = 0; step < max_steps; ++step) {
    basis.push_back(v);
    apply_hamiltonian(spec, v, w);
    alpha.push_back(v.dot(w));
    w -= alpha.back() * v;
    if (step > 0) w -= beta.back() * basis[step - 1];
    for (const auto& u : basis) w -= u.dot(w) * u;  // full reorthogonalization
    const double b = w.norm();

    // Tridiagonal eigenproblem of the current Krylov space.
    const int k = step + 1;
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(k, k);
    for (int i = 0; i < k; ++i) t(i, i) = alpha[i];
    for (int i = 0; i + 1 < k; ++i) t(i, i + 1) = t(i + 1, i) = beta[i];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
    best.energy = es.eigenvalues()[0];
    best.amplitudes = Eigen::VectorXd::Zero(dim);
    for (int i = 0; i < k; ++i) best.amplitudes += es.eigenvectors()(i, 0) * basis[i];
    best.amplitudes.normalize();

    if (b < 1e-13 || (k > 2 && b * std::abs(es.eigenvectors()(k - 1, 0)) < 1e-12)) break;
    beta.push_back(b);
    v = w / b;
  }
  return best;
}

}  // namespace detail

// Lowest eigenpair of the TFIM Hamiltonian; dense diagonalization for
// n <= 12, Lanczos above. Amplitude sign is fixed to a non-negative sum.
inline GroundStateSolution exact_ground_state(const TFIMSpec& spec) {
  spec.validate();
  require(spec.n_spins <= 16, "ground state solver limited to 16 spins");

  GroundStateSolution solution;
  if (spec.n_spins <= 12) {
    const Eigen::MatrixXd dense = Eigen::MatrixXd(build_hamiltonian(spec));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense);
    solution.energy = es.eigenvalues()[0];
    solution.amplitudes = es.eigenvectors().col(0);
  } else {
    solution = detail::lanczos_ground_state(spec);
  }

  Eigen::VectorXd residual;
  apply_hamiltonian(spec, solution.amplitudes, residual);
  residual -= solution.energy * solution.amplitudes;
  const double res = residual.norm();
  if (res > 1e-8 * std::max(1.0, std::abs(solution.energy)))
    throw std::runtime_error("ground state solver did not converge, residual " +
                             std::to_string(res));

  if (solution.amplitudes.sum() < 0.0) solution.amplitudes = -solution.amplitudes;
  if (spec.field > 0.0) {
    // Stoquasticity guarantees a non-negative ground state; clip the
    // numerical noise around zero.
    require(solution.amplitudes.minCoeff() > -1e-8, "ground state unexpectedly sign-changing");
    solution.amplitudes = solution.amplitudes.cwiseMax(0.0);
    solution.amplitudes.normalize();
  }
  return solution;
}

}  // namespace neuroquansa
