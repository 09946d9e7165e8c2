#include "inert/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <new>
#include <thread>

namespace inert::mc {

EnsembleConfig EnsembleConfig::defaults(double g, double dt) {
  EnsembleConfig c;
  c.params = GravParams(g);
  c.dt = dt;
  c.burn_in = 1e2 * std::max(1.0 / g, 1.0);
  c.gap_tol = 10.0 * std::sqrt(dt);
  c.a0 = g + 1.0;
  return c;
}

void EnsembleConfig::validate() const {
  auto fail = [](const std::string& msg) { throw std::invalid_argument(msg); };
  if (!(std::isfinite(dt) && dt > 0.0)) fail("dt must be positive");
  if (!(std::isfinite(horizon) && horizon >= dt)) fail("horizon must be >= dt");
  if (n_paths < 1) fail("paths must be >= 1");
  if (!(std::isfinite(burn_in) && burn_in >= 0.0)) fail("burn-in must be >= 0");
  if (!(burn_in < horizon)) fail("burn-in must be smaller than horizon");
  if (!(std::isfinite(sample_stride) && sample_stride >= dt)) {
    fail("stride must be >= dt");
  }
  if (!(std::isfinite(gap_tol) && gap_tol > 0.0)) fail("gap-tol must be > 0");
  if (!(std::isfinite(a0) && a0 > params.g())) fail("a0 must exceed g");
}

std::int64_t EnsembleConfig::sample_every() const {
  return std::max<std::int64_t>(1, std::llround(sample_stride / dt));
}

std::uint64_t derive_subseed(std::uint64_t master_seed,
                             std::uint64_t path_index) noexcept {
  std::uint64_t z = master_seed + (path_index + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

PathError::PathError(std::int64_t path, const std::string& what)
    : std::runtime_error("path " + std::to_string(path) + ": " + what),
      path_(path) {}

void for_each_path(std::int64_t n, unsigned workers,
                   const std::function<void(std::int64_t)>& task) {
  if (n <= 0) return;
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(
      std::min<std::int64_t>(static_cast<std::int64_t>(workers), n));

  std::atomic<std::int64_t> next{0};
  std::atomic<bool> abort{false};
  std::mutex failure_mutex;
  std::int64_t failed_path = -1;
  std::string failure;

  auto record = [&](std::int64_t i, std::string msg) {
    std::lock_guard lock(failure_mutex);
    if (failed_path < 0 || i < failed_path) {
      failed_path = i;
      failure = std::move(msg);
    }
    abort = true;
  };

  auto worker = [&] {
    while (!abort) {
      const std::int64_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        task(i);
      } catch (const std::bad_alloc&) {
        record(i, "out of memory");
      } catch (const std::exception& e) {
        record(i, e.what());
      } catch (...) {
        record(i, "unknown error");
      }
    }
  };

  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  if (failed_path >= 0) throw PathError(failed_path, failure);
}

SystemState renewal_state(const GravParams& params) {
  return new_state(0.0, 0.0, -params.g());
}

std::vector<TimeSeries> run_ensemble(const EnsembleConfig& config) {
  config.validate();
  std::vector<TimeSeries> out(static_cast<std::size_t>(config.n_paths));
  const SystemState start = renewal_state(config.params);
  const std::int64_t every = config.sample_every();
  for_each_path(config.n_paths, config.workers, [&](std::int64_t i) {
    out[static_cast<std::size_t>(i)] = simulate_path(
        start, config.params, config.dt, config.horizon,
        derive_subseed(config.master_seed, static_cast<std::uint64_t>(i)),
        every, config.scheme);
  });
  return out;
}

}  // namespace inert::mc
