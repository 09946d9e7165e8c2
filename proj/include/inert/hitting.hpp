// First passage of a drifted Brownian motion B_t + m t through a level a,
// simulated stand-alone and compared with the closed-form law.
#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace inert::mc {

/// How a crossing inside a step is detected.
///   grid:   only the grid values are checked, so hits are detected late
///           and some are missed entirely.
///   bridge: a Brownian-bridge crossing test catches in-step crossings; the
///           hit time is recorded at the step midpoint.
enum class Detection { grid, bridge };

std::string to_string(Detection d);
/// Throws std::invalid_argument for anything but "grid" or "bridge".
Detection detection_from_string(std::string_view name);

struct HittingConfig {
  double a = 1.0;
  double m = -1.0;
  double dt = 1e-3;
  double horizon = 200.0;
  std::int64_t n = 100000;
  std::uint64_t seed = 0;
  Detection detection = Detection::bridge;
  double bin_width = 0.1;
  unsigned workers = 0;

  /// Throws std::invalid_argument naming the violated constraint.
  void validate() const;
};

struct HittingBin {
  double t_lo = 0.0;
  double t_hi = 0.0;
  std::int64_t observed = 0;
  double expected = 0.0;  ///< n times the oracle mass of the bin
};

struct HittingReport {
  std::int64_t n = 0;
  std::int64_t hits = 0;
  double hit_fraction = 0.0;
  /// Oracle P(tau <= horizon), by quadrature of the density.
  double oracle_mass = 0.0;
  /// Oracle P(tau < infinity).
  double oracle_prob = 0.0;
  std::vector<HittingBin> bins;
  /// Pearson statistic over bins merged until each expects >= 5 hits, plus
  /// one cell for paths that never hit.
  double chi_square = 0.0;
  std::int64_t chi_square_df = 0;
  double p_value = 0.0;
  /// Set when m a >= 0: the path hits with probability one eventually, so
  /// the fixed horizon truncates a heavy tail.
  std::string note;
};

/// Hit time of one path, or a negative value if it does not hit by the
/// horizon. Paths that have drifted so far away that the remaining chance
/// of ever hitting is below 1e-12 are stopped early.
double simulate_hitting_time(const HittingConfig& config, std::uint64_t seed);

/// n paths, path i seeded with derive_subseed(seed, i).
HittingReport hitting_time_oracle_test(const HittingConfig& config);

}  // namespace inert::mc
