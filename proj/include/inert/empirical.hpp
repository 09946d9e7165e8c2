#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace inert::mc {

/// Sorted sample set with a right-continuous step CDF.
class EmpiricalDistribution {
 public:
  /// Throws std::invalid_argument on an empty or non-finite sample.
  explicit EmpiricalDistribution(std::vector<double> samples);

  std::size_t size() const noexcept { return sorted_.size(); }
  std::span<const double> sorted_samples() const noexcept { return sorted_; }

  /// Fraction of samples <= x.
  double cdf(double x) const noexcept;

 private:
  std::vector<double> sorted_;
};

/// Kolmogorov-Smirnov distance
///   max_i max(|i/n - F(x_(i))|, |(i-1)/n - F(x_(i))|).
/// Throws if F decreases along the sorted samples or leaves [0, 1].
double ks_distance(const EmpiricalDistribution& emp,
                   const std::function<double(double)>& cdf);

}  // namespace inert::mc
