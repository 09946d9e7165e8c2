#include "inert/empirical.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace inert::mc {

EmpiricalDistribution::EmpiricalDistribution(std::vector<double> samples)
    : sorted_(std::move(samples)) {
  if (sorted_.empty()) throw std::invalid_argument("empty sample");
  if (!std::all_of(sorted_.begin(), sorted_.end(),
                   [](double x) { return std::isfinite(x); })) {
    throw std::invalid_argument("sample contains non-finite values");
  }
  std::sort(sorted_.begin(), sorted_.end());
}

double EmpiricalDistribution::cdf(double x) const noexcept {
  const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
  return static_cast<double>(it - sorted_.begin()) /
         static_cast<double>(sorted_.size());
}

double ks_distance(const EmpiricalDistribution& emp,
                   const std::function<double(double)>& cdf) {
  const auto xs = emp.sorted_samples();
  const double n = static_cast<double>(xs.size());
  double worst = 0.0;
  double prev_f = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(xs[i]);
    if (!(f >= 0.0 && f <= 1.0)) {
      throw std::invalid_argument("reference CDF left [0, 1]");
    }
    if (f < prev_f) {
      throw std::invalid_argument("reference CDF is not monotone");
    }
    prev_f = f;
    const double above = static_cast<double>(i + 1) / n - f;
    const double below = f - static_cast<double>(i) / n;
    worst = std::max({worst, std::abs(above), std::abs(below)});
  }
  return worst;
}

}  // namespace inert::mc
