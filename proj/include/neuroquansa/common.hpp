#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace neuroquansa {

// Model time is dimensionless, normalized so that tau_syn = 1.
using Time = double;

using State = std::uint32_t;  // packed visible configuration, bit i = spin i

// splitmix64: cheap, well-mixed stream derivation for seeding sub-RNGs.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d4a2fa9d6d2d8bULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a,
                                 std::uint64_t b = 0, std::uint64_t c = 0) {
  return splitmix64(splitmix64(splitmix64(base ^ a) ^ b) ^ c);
}

inline bool bit(std::uint64_t word, int i) { return (word >> i) & 1ULL; }

inline double logistic(double x) {
  // Stable for large |x|.
  if (x >= 0.0) {
    const double e = std::exp(-x);
    return 1.0 / (1.0 + e);
  }
  const double e = std::exp(x);
  return e / (1.0 + e);
}

inline double softplus(double x) {
  if (x > 35.0) return x;
  if (x < -35.0) return std::exp(x);
  return std::log1p(std::exp(x));
}

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

inline void require_finite(double x, const std::string& name) {
  if (!std::isfinite(x)) throw std::invalid_argument(name + " must be finite");
}

}  // namespace neuroquansa
