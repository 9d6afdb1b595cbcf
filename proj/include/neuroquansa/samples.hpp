#pragma once

#include <cstdint>
#include <ostream>
#include <vector>

#include "neuroquansa/common.hpp"

namespace neuroquansa {

// Binary network states, one row per readout. Rows are bit-packed:
// bits [0, n_visible) hold the visible units, bits [n_visible,
// n_visible + n_hidden) the hidden units.
class StateSamples {
 public:
  StateSamples() = default;
  StateSamples(int n_visible, int n_hidden, Time readout_interval = 0.0)
      : n_visible_(n_visible),
        n_hidden_(n_hidden),
        readout_interval_(readout_interval),
        words_per_row_((n_visible + n_hidden + 63) / 64) {
    require(n_visible >= 0 && n_hidden >= 0, "unit counts must be >= 0");
  }

  int n_visible() const { return n_visible_; }
  int n_hidden() const { return n_hidden_; }
  int n_units() const { return n_visible_ + n_hidden_; }
  Time readout_interval() const { return readout_interval_; }
  std::size_t size() const { return words_per_row_ ? data_.size() / words_per_row_ : 0; }
  bool empty() const { return data_.empty(); }

  void reserve(std::size_t rows) { data_.reserve(rows * words_per_row_); }

  // Appends a row given as packed words (low word first).
  void push_row(const std::uint64_t* words) {
    data_.insert(data_.end(), words, words + words_per_row_);
  }
  void push_row(std::uint64_t word) {
    data_.push_back(word);
    for (int w = 1; w < words_per_row_; ++w) data_.push_back(0);
  }

  bool get(std::size_t row, int unit) const {
    return bit(data_[row * words_per_row_ + unit / 64], unit % 64);
  }

  // Packed visible part of a row; only valid for n_visible <= 32.
  State visible_state(std::size_t row) const {
    return static_cast<State>(data_[row * words_per_row_] &
                              ((n_visible_ >= 64) ? ~0ULL : ((1ULL << n_visible_) - 1)));
  }

  const std::uint64_t* row(std::size_t r) const { return data_.data() + r * words_per_row_; }
  int words_per_row() const { return words_per_row_; }

  double mean(int unit) const {
    if (empty()) return 0.0;
    std::size_t count = 0;
    for (std::size_t r = 0, n = size(); r < n; ++r) count += get(r, unit);
    return static_cast<double>(count) / static_cast<double>(size());
  }

  // One row per readout: time followed by the binary units.
  void write_csv(std::ostream& os) const {
    os << "time";
    for (int k = 0; k < n_units(); ++k) os << ",z" << k;
    os << "\n";
    for (std::size_t r = 0, n = size(); r < n; ++r) {
      os << (static_cast<double>(r + 1) * readout_interval_);
      for (int k = 0; k < n_units(); ++k) os << ',' << (get(r, k) ? 1 : 0);
      os << "\n";
    }
  }

 private:
  int n_visible_ = 0;
  int n_hidden_ = 0;
  Time readout_interval_ = 0.0;
  int words_per_row_ = 0;
  std::vector<std::uint64_t> data_;
};

// A set of joint (v, h) states with optional weights. Sampling backends
// emit unit-weight rows; the exact enumeration backend emits every state
// once, weighted by its exact probability.
struct SampleSet {
  StateSamples states;
  std::vector<double> weights;  // empty => every row has weight 1

  bool weighted() const { return !weights.empty(); }
  double weight(std::size_t row) const { return weighted() ? weights[row] : 1.0; }
};

}  // namespace neuroquansa
