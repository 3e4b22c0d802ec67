#pragma once

#include <cmath>
#include <cstddef>

namespace gatelab {

/// Welford accumulator. Order of add() calls fixes the floating-point result.
class RunningStats {
 public:
  void add(double v) {
    ++count_;
    const double delta = v - mean_;
    mean_ += delta / static_cast<double>(count_);
    m2_ += delta * (v - mean_);
  }

  std::size_t count() const { return count_; }
  double mean() const { return mean_; }
  /// Unbiased sample variance; zero for fewer than two samples.
  double variance() const { return count_ > 1 ? m2_ / static_cast<double>(count_ - 1) : 0.0; }
  double standard_deviation() const { return std::sqrt(variance()); }
  /// sample standard deviation / sqrt(count).
  double standard_error() const {
    return count_ > 1 ? std::sqrt(variance() / static_cast<double>(count_)) : 0.0;
  }

 private:
  std::size_t count_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

}  // namespace gatelab
