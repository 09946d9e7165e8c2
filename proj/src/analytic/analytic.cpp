#include "inert/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace inert::analytic {

namespace {

constexpr double kTailFloor = 1e-300;

void require_nonnegative_gap(double h) {
  if (!(h >= 0.0)) throw std::invalid_argument("gap h must be >= 0");
}

}  // namespace

double standard_normal_cdf(double x) noexcept {
  const double p = 0.5 * std::erfc(-x / std::numbers::sqrt2);
  return p < kTailFloor ? 0.0 : p;
}

double StationaryLaw::density(double v, double h) const {
  require_nonnegative_gap(h);
  const double z = v + g_;
  return 2.0 * g_ / std::sqrt(std::numbers::pi) * std::exp(-2.0 * g_ * h) *
         std::exp(-z * z);
}

double StationaryLaw::v_cdf(double v) const noexcept {
  return standard_normal_cdf((v + g_) * std::numbers::sqrt2);
}

double StationaryLaw::gap_cdf(double h) const {
  require_nonnegative_gap(h);
  return -std::expm1(-2.0 * g_ * h);
}

double stationary_density(double v, double h, const GravParams& params) {
  return StationaryLaw(params).density(v, h);
}

double stationary_v_cdf(double v, const GravParams& params) noexcept {
  return StationaryLaw(params).v_cdf(v);
}

double stationary_gap_cdf(double h, const GravParams& params) {
  return StationaryLaw(params).gap_cdf(h);
}

double bm_sup_tail(double x, double t) {
  if (!(x > 0.0) || !(t > 0.0)) {
    throw std::invalid_argument("bm_sup_tail needs x > 0 and t > 0");
  }
  // 2 (1 - Phi(x/sqrt t)) = erfc(x / sqrt(2t))
  const double p = std::erfc(x / std::sqrt(2.0 * t));
  return p < kTailFloor ? 0.0 : p;
}

double bm_drift_hitting_density(double a, double m, double t) {
  if (a == 0.0) throw std::invalid_argument("hitting level a must be nonzero");
  if (!(t > 0.0)) throw std::invalid_argument("t must be positive");
  const double d = a - m * t;
  return std::abs(a) / std::sqrt(2.0 * std::numbers::pi * t * t * t) *
         std::exp(-d * d / (2.0 * t));
}

double bm_drift_hitting_prob(double a, double m) noexcept {
  const double ma = m * a;
  return std::exp(ma - std::abs(ma));
}

double bm_drift_hitting_mass(double a, double m, double t0, double t1) {
  if (a == 0.0) throw std::invalid_argument("hitting level a must be nonzero");
  if (!(t0 >= 0.0 && t1 > t0)) {
    throw std::invalid_argument("need 0 <= t0 < t1");
  }
  auto density = [a, m](double t) {
    return t > 0.0 ? bm_drift_hitting_density(a, m, t) : 0.0;
  };
  using Quad = boost::math::quadrature::gauss_kronrod<double, 31>;
  // Split at multiples of the natural scale a^2 so the adaptive rule sees
  // the sharp rise near t = 0 and the long tail separately.
  const double scale = std::max(a * a, 1e-6);
  double total = 0.0;
  double lo = t0;
  for (double edge : {scale, 10.0 * scale, 100.0 * scale}) {
    if (edge <= lo) continue;
    const double hi = std::min(edge, t1);
    total += Quad::integrate(density, lo, hi, 15, 1e-12);
    lo = hi;
    if (lo >= t1) return total;
  }
  total += Quad::integrate(density, lo, t1, 15, 1e-12);
  return total;
}

double skorokhod_linear(std::span<const PathPoint> path, double slope) {
  if (path.empty()) throw std::invalid_argument("path must not be empty");
  double best = 0.0;
  for (const PathPoint& p : path) best = std::max(best, p.b - slope * p.t);
  return best;
}

}  // namespace inert::analytic
