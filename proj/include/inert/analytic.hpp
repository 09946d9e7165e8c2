// Closed-form reference laws: the product-form stationary density of
// (V, H), its marginals, Brownian supremum and first-passage laws, and the
// Skorokhod functional for a linear boundary.
#pragma once

#include <span>

#include "inert/model.hpp"

namespace inert::analytic {

/// Standard normal CDF via erfc. Values below 1e-300 are returned as 0.
double standard_normal_cdf(double x) noexcept;

/// Stationary law of (V, H): V ~ N(-g, 1/2) independent of H ~ Exp(2g).
class StationaryLaw {
 public:
  explicit StationaryLaw(const GravParams& params) : g_(params.g()) {}

  double g() const noexcept { return g_; }
  double v_mean() const noexcept { return -g_; }
  /// Independent of g.
  static constexpr double v_variance() noexcept { return 0.5; }
  double gap_rate() const noexcept { return 2.0 * g_; }
  double gap_mean() const noexcept { return 1.0 / gap_rate(); }

  double density(double v, double h) const;
  double v_cdf(double v) const noexcept;
  double gap_cdf(double h) const;

 private:
  double g_;
};

/// (2g / sqrt(pi)) exp(-2 g h) exp(-(v + g)^2). Throws for h < 0.
double stationary_density(double v, double h, const GravParams& params);

/// Phi((v + g) sqrt(2)).
double stationary_v_cdf(double v, const GravParams& params) noexcept;

/// 1 - exp(-2 g h). Throws for h < 0.
double stationary_gap_cdf(double h, const GravParams& params);

/// P(sup_{s <= t} B_s >= x) = 2 (1 - Phi(x / sqrt(t))), the exact
/// reflection-principle value. Throws unless x > 0 and t > 0.
double bm_sup_tail(double x, double t);

/// Density at t of the first time B_s + m s reaches level a:
///   |a| / sqrt(2 pi t^3) exp(-(a - m t)^2 / (2 t)).
/// Throws for a = 0 or t <= 0.
double bm_drift_hitting_density(double a, double m, double t);

/// P(level a is ever reached by B_s + m s) = exp(m a - |m a|).
double bm_drift_hitting_prob(double a, double m) noexcept;

/// Adaptive Gauss-Kronrod integral of bm_drift_hitting_density over
/// [t0, t1] (0 <= t0 < t1), absolute tolerance ~1e-9 or better.
double bm_drift_hitting_mass(double a, double m, double t0, double t1);

struct PathPoint {
  double t;
  double b;
};

/// max(0, max_u (b_u - slope * u)) over the recorded points: the local time
/// of a path pushed down by a line of the given slope through the origin.
/// Throws on an empty path.
double skorokhod_linear(std::span<const PathPoint> path, double slope);

}  // namespace inert::analytic
