// Regeneration cycles of (V, H).
//
// After a renewal time zeta_k the detector waits for the excursion event
// |V + g| >= a0 + 2 (eta_k); the next renewal zeta_{k+1} is the first later
// grid time at which V crosses -g from below with S = X, the latter read as
// gap <= gap_tol on a discrete grid. Cycles are [zeta_k, zeta_{k+1}).
#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "inert/ensemble.hpp"
#include "inert/model.hpp"

namespace inert::mc {

struct PhasePoint {
  double v;
  double h;
};

struct RenewalCycle {
  double start = 0.0;
  double end = 0.0;
  double duration = 0.0;
  double sup_v = -std::numeric_limits<double>::infinity();
  double inf_v = std::numeric_limits<double>::infinity();
  double sup_h = 0.0;
  /// Whether `samples` is populated, each standing for `sample_dt` of time.
  bool has_samples = false;
  double sample_dt = 0.0;
  std::vector<PhasePoint> samples;
};

/// Streaming detector; feed states in time order at a uniform spacing.
class RenewalDetector {
 public:
  /// sample_every > 0 keeps every sample_every-th observed state (counted
  /// from the first) as a PhasePoint of weight sample_dt in the open cycle;
  /// 0 keeps extremes only.
  RenewalDetector(const GravParams& params, double gap_tol, double a0,
                  std::int64_t sample_every = 0, double sample_dt = 0.0);

  void observe(const SystemState& state);

  /// Completed cycles so far (the open cycle is never included).
  const std::vector<RenewalCycle>& cycles() const noexcept { return done_; }
  std::vector<RenewalCycle> take_cycles() noexcept { return std::move(done_); }

 private:
  void open_cycle(const SystemState& state);

  double g_;
  double gap_tol_;
  double excursion_;
  std::int64_t sample_every_;
  double sample_dt_;

  std::int64_t seen_ = 0;
  bool have_prev_ = false;
  double prev_v_ = 0.0;
  bool armed_ = false;
  bool open_ = false;
  RenewalCycle current_;
  std::vector<RenewalCycle> done_;
};

/// True for a state that can serve as zeta_0: V = -g (to rounding) and
/// gap <= gap_tol.
bool is_renewal_state(const SystemState& state, const GravParams& params,
                      double gap_tol) noexcept;

/// Cycles found on the recorded grid of `series`. Every recorded state is a
/// sample of weight series.record_interval(). An incomplete trailing cycle
/// is dropped; the leading segment counts only if the series starts in a
/// renewal state.
std::vector<RenewalCycle> detect_renewals(const TimeSeries& series,
                                          double gap_tol, double a0,
                                          const GravParams& params);

/// Axis-aligned region lo <= v <= hi, lo <= h <= hi.
struct Region {
  double v_lo = -std::numeric_limits<double>::infinity();
  double v_hi = std::numeric_limits<double>::infinity();
  double h_lo = 0.0;
  double h_hi = std::numeric_limits<double>::infinity();

  bool contains(double v, double h) const noexcept {
    return v >= v_lo && v <= v_hi && h >= h_lo && h <= h_hi;
  }
};

/// Regenerative ratio estimator of the stationary mass of `region`:
/// time spent in the region summed over cycles, divided by total cycle
/// duration. Throws on an empty list or cycles without samples.
double cycle_stationary_estimate(const std::vector<RenewalCycle>& cycles,
                                 const Region& region);

/// Simulates n_paths independent paths from renewal_state, each until it
/// has completed `cycles_per_path` cycles or reached config.horizon, with
/// detection on every step. Cycles are concatenated in path order.
/// sample_every > 0 attaches (V, H) samples every that many steps.
std::vector<RenewalCycle> simulate_cycles(const EnsembleConfig& config,
                                          std::int64_t cycles_per_path,
                                          std::int64_t sample_every = 0);

}  // namespace inert::mc
