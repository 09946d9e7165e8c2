// Estimators that confront simulated paths with the analytic laws.
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "inert/ensemble.hpp"
#include "inert/model.hpp"
#include "inert/renewal.hpp"

namespace inert::mc {

// ---------------------------------------------------------------------------
// Stationary marginals

/// (V, H) samples pooled over paths, in path-major order.
struct StationarySamples {
  std::vector<double> v;
  std::vector<double> h;
  /// Start offset of each path's block in v/h (size n_paths + 1).
  std::vector<std::size_t> path_offsets;
};

/// Samples at multiples of sample_stride strictly after burn_in, from
/// run_ensemble(config). Throws if horizon - burn_in < 10 sample_stride.
StationarySamples pool_stationary_samples(const EnsembleConfig& config);

struct StationaryReport {
  std::size_t n_samples = 0;
  double ks_v = 0.0;
  double ks_h = 0.0;
  double mean_v = 0.0;
  double var_v = 0.0;
  double mean_h = 0.0;
  /// Batch-means standard errors (10 contiguous batches per path).
  double se_mean_v = 0.0;
  double se_mean_h = 0.0;
};

StationaryReport stationary_report(const StationarySamples& samples,
                                   const GravParams& params);

StationaryReport stationary_marginal_test(const EnsembleConfig& config);

/// 2-D histogram of pooled samples against the stationary density, on
/// [v_lo, v_hi] x [h_lo, h_hi].
struct PhaseHistogram {
  std::size_t v_bins = 0;
  std::size_t h_bins = 0;
  double v_lo = 0.0, v_hi = 0.0, h_lo = 0.0, h_hi = 0.0;
  /// Row-major [v_bin][h_bin].
  std::vector<double> empirical_density;
  std::vector<double> analytic_density;  ///< density at bin centres
};

/// Default window [-g-4, -g+4] x [0, 4/g] with 50 x 50 bins.
PhaseHistogram phase_histogram(const StationarySamples& samples,
                               const GravParams& params,
                               std::size_t v_bins = 50,
                               std::size_t h_bins = 50);

// ---------------------------------------------------------------------------
// Strong law

struct StrongLawReport {
  double x_over_t = 0.0;
  double s_over_t = 0.0;
  std::vector<double> times;
  std::vector<double> residual_x;  ///< X_t - (B_t - g t)
  std::vector<double> residual_s;  ///< S_t - (B_t - g t)
  /// max_t |residual_x - ((X0 + V0) - V_t)|
  double identity_error_x = 0.0;
  /// max_t |residual_s - ((X0 + V0) - V_t + H_t)|
  double identity_error_s = 0.0;
};

/// Terminal ratios and residual processes of a recorded path.
StrongLawReport strong_law_estimate(const TimeSeries& series);

// ---------------------------------------------------------------------------
// Cycle extremes

struct TailPoint {
  double level = 0.0;
  double probability = 0.0;
  std::int64_t exceedances = 0;
  bool used_in_fit = false;
};

struct TailReport {
  std::size_t n_cycles = 0;
  std::vector<TailPoint> upper_v;  ///< P(sup_v >= -g + a)
  std::vector<TailPoint> lower_v;  ///< P(inf_v <= -g - a)
  std::vector<TailPoint> gap;      ///< P(sup_h >= r)
  /// OLS slopes of log P against a^2 (velocity) and r (gap); empty when
  /// fewer than two levels have enough exceedances.
  std::optional<double> slope_upper_v;
  std::optional<double> slope_lower_v;
  std::optional<double> slope_gap;
};

inline constexpr std::int64_t kMinTailExceedances = 20;
inline constexpr std::size_t kMinTailCycles = 1000;

/// Per-level exceedance fractions of the cycle extremes and their log-slope
/// fits, excluding levels with fewer than kMinTailExceedances events.
/// Throws when there are fewer than min_cycles cycles.
TailReport cycle_extreme_tails(const std::vector<RenewalCycle>& cycles,
                               const GravParams& params,
                               std::span<const double> velocity_levels,
                               std::span<const double> gap_levels,
                               std::size_t min_cycles = kMinTailCycles);

/// Ordinary least-squares slope of y on x. Throws for fewer than 2 points
/// or constant x.
double ols_slope(std::span<const double> x, std::span<const double> y);

// ---------------------------------------------------------------------------
// Fluctuation growth

/// Running extremes of V and H observed at a set of checkpoint times.
class RunningExtremes {
 public:
  explicit RunningExtremes(std::vector<double> checkpoints);

  /// Feed states in time order.
  void observe(const SystemState& state);

  const std::vector<double>& checkpoints() const noexcept { return times_; }
  /// Values at checkpoints reached so far (NaN for those not reached).
  const std::vector<double>& max_v() const noexcept { return max_v_; }
  const std::vector<double>& max_h() const noexcept { return max_h_; }
  const std::vector<double>& min_v() const noexcept { return min_v_; }
  const std::vector<double>& min_h() const noexcept { return min_h_; }

 private:
  std::vector<double> times_;
  std::vector<double> max_v_, max_h_, min_v_, min_h_;
  std::size_t next_ = 0;
  bool started_ = false;
  double run_max_v_ = 0.0, run_max_h_ = 0.0, run_min_v_ = 0.0,
         run_min_h_ = 0.0;
};

/// Running extremes of a recorded series at the given checkpoints.
RunningExtremes running_extremes(const TimeSeries& series,
                                 std::vector<double> checkpoints);

struct FluctuationReport {
  std::vector<double> checkpoints;
  std::vector<double> median_max_v;
  std::vector<double> median_max_h;
  /// Running minima; descriptive only.
  std::vector<double> median_min_v;
  std::vector<double> median_min_h;
  double slope_v = 0.0;  ///< median max V against sqrt(log t)
  double slope_h = 0.0;  ///< median max H against log t
};

/// Per path running maxima of V and H on every step up to each checkpoint,
/// ensemble medians, and their regressions on sqrt(log t) and log t.
/// Checkpoints must be increasing, > 1, <= horizon, at least two, and span
/// at least two decades.
FluctuationReport fluctuation_scaling(const EnsembleConfig& config,
                                      std::vector<double> checkpoints);

double median(std::vector<double> values);

}  // namespace inert::mc
