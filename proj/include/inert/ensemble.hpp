// Ensemble driver: independent paths, per-path seeds, deterministic
// parallel execution.
#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "inert/model.hpp"

namespace inert::mc {

struct EnsembleConfig {
  GravParams params{1.0};
  double dt = 1e-3;
  double horizon = 1e4;
  std::int64_t n_paths = 64;
  std::uint64_t master_seed = 0;
  double burn_in = 1e2;
  /// Time between retained (V, H) samples.
  double sample_stride = 1.0;
  /// Largest gap accepted as contact S = X at a renewal.
  double gap_tol = 10.0 * std::sqrt(1e-3);
  /// Renewal excursion threshold: a cycle needs |V + g| to reach a0 + 2.
  double a0 = 2.0;
  Scheme scheme = Scheme::bridge;
  /// Worker threads; 0 picks hardware concurrency. Never affects results.
  unsigned workers = 0;

  /// Defaults for acceleration g: burn_in = 100 max(1/g, 1),
  /// gap_tol = 10 sqrt(dt), a0 = g + 1.
  static EnsembleConfig defaults(double g, double dt = 1e-3);

  /// Throws std::invalid_argument naming the violated constraint.
  void validate() const;

  /// Steps between retained samples (sample_stride / dt, rounded).
  std::int64_t sample_every() const;
};

/// Per-path seed: the SplitMix64 finaliser applied to
/// master_seed + (path_index + 1) * 0x9E3779B97F4A7C15.
std::uint64_t derive_subseed(std::uint64_t master_seed,
                             std::uint64_t path_index) noexcept;

/// Failure inside one path of an ensemble.
class PathError : public std::runtime_error {
 public:
  PathError(std::int64_t path, const std::string& what);
  std::int64_t path() const noexcept { return path_; }

 private:
  std::int64_t path_;
};

/// Runs task(i) for i in [0, n) on up to `workers` threads. Each index is
/// executed exactly once and tasks must write only to slot i of their
/// output, so results do not depend on scheduling. If any task throws, the
/// lowest failing index is rethrown as PathError after all workers stop.
void for_each_path(std::int64_t n, unsigned workers,
                   const std::function<void(std::int64_t)>& task);

/// Starting state of every ensemble path: S = X = 0, V = -g (a renewal
/// state).
SystemState renewal_state(const GravParams& params);

/// n_paths trajectories from renewal_state, path i seeded by
/// derive_subseed(master_seed, i), recorded every sample_every() steps.
std::vector<TimeSeries> run_ensemble(const EnsembleConfig& config);

}  // namespace inert::mc
