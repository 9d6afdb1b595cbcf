#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "neuroquansa/common.hpp"
#include "neuroquansa/samples.hpp"

namespace neuroquansa {

// Dense probability vector over all 2^N visible configurations, indexed by
// the packed state (bit i = unit i).
class Distribution {
 public:
  Distribution() = default;
  explicit Distribution(int n_visible)
      : n_visible_(n_visible), p_(std::size_t{1} << n_visible, 0.0) {
    require(n_visible >= 0 && n_visible <= 24, "visible layer too large for dense distribution");
  }
  Distribution(int n_visible, std::vector<double> p) : n_visible_(n_visible), p_(std::move(p)) {
    require(p_.size() == (std::size_t{1} << n_visible), "probability vector has wrong length");
  }

  int n_visible() const { return n_visible_; }
  std::size_t size() const { return p_.size(); }
  double operator[](std::size_t v) const { return p_[v]; }
  double& operator[](std::size_t v) { return p_[v]; }
  const std::vector<double>& probabilities() const { return p_; }

  double total() const {
    double s = 0.0;
    for (double x : p_) s += x;
    return s;
  }

  void normalize() {
    const double s = total();
    require(s > 0.0, "cannot normalize an empty distribution");
    for (double& x : p_) x /= s;
  }

  void write_csv(std::ostream& os) const {
    os << "state,probability\n";
    for (std::size_t v = 0; v < p_.size(); ++v) {
      os << bitstring(v) << ',' << p_[v] << "\n";
    }
  }

  std::string bitstring(std::size_t v) const {
    std::string s(n_visible_, '0');
    for (int i = 0; i < n_visible_; ++i)
      if (bit(v, i)) s[i] = '1';
    return s;
  }

 private:
  int n_visible_ = 0;
  std::vector<double> p_;
};

// Histogram over visible configurations.
class EmpiricalDistribution {
 public:
  EmpiricalDistribution() = default;
  explicit EmpiricalDistribution(int n_visible)
      : n_visible_(n_visible), counts_(std::size_t{1} << n_visible, 0) {
    require(n_visible >= 0 && n_visible <= 24, "visible layer too large for histogram");
  }

  void add(State v, std::uint64_t count = 1) {
    counts_[v] += count;
    total_ += count;
  }

  void add_samples(const StateSamples& samples) {
    for (std::size_t r = 0, n = samples.size(); r < n; ++r) add(samples.visible_state(r));
  }

  int n_visible() const { return n_visible_; }
  std::uint64_t total() const { return total_; }
  std::uint64_t count(State v) const { return counts_[v]; }
  const std::vector<std::uint64_t>& counts() const { return counts_; }

  Distribution normalized() const {
    require(total_ > 0, "empty histogram");
    Distribution d(n_visible_);
    for (std::size_t v = 0; v < counts_.size(); ++v)
      d[v] = static_cast<double>(counts_[v]) / static_cast<double>(total_);
    return d;
  }

 private:
  int n_visible_ = 0;
  std::vector<std::uint64_t> counts_;
  std::uint64_t total_ = 0;
};

// Kullback-Leibler divergence sum_v p(v) log(p(v)/q(v)), natural log.
// Zero entries of q on the support of p are replaced by 1e-6 and q is
// renormalized, mirroring the zero-count handling used for empirical
// histograms.
inline double dkl(const Distribution& p, const Distribution& q,
                  double zero_replacement = 1e-6) {
  require(p.size() == q.size(), "distributions live on different state spaces");
  std::vector<double> qs(q.probabilities());
  bool smoothed = false;
  double qsum = 0.0;
  for (std::size_t v = 0; v < qs.size(); ++v) {
    require(p[v] >= 0.0 && qs[v] >= 0.0, "negative probability");
    if (p[v] > 0.0 && qs[v] == 0.0) {
      qs[v] = zero_replacement;
      smoothed = true;
    }
    qsum += qs[v];
  }
  double d = 0.0;
  for (std::size_t v = 0; v < qs.size(); ++v) {
    if (p[v] > 0.0) d += p[v] * std::log(p[v] / (smoothed ? qs[v] / qsum : qs[v]));
  }
  return d;
}

}  // namespace neuroquansa
