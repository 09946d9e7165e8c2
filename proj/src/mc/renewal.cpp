#include "inert/renewal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace inert::mc {

RenewalDetector::RenewalDetector(const GravParams& params, double gap_tol,
                                 double a0, std::int64_t sample_every,
                                 double sample_dt)
    : g_(params.g()),
      gap_tol_(gap_tol),
      excursion_(a0 + 2.0),
      sample_every_(sample_every),
      sample_dt_(sample_dt) {
  if (!(gap_tol > 0.0)) throw std::invalid_argument("gap_tol must be > 0");
  if (!(a0 > g_)) throw std::invalid_argument("a0 must exceed g");
  if (sample_every < 0) throw std::invalid_argument("sample_every must be >= 0");
  if (sample_every > 0 && !(sample_dt > 0.0)) {
    throw std::invalid_argument("sample_dt must be > 0 when sampling");
  }
}

bool is_renewal_state(const SystemState& state, const GravParams& params,
                      double gap_tol) noexcept {
  const double g = params.g();
  return std::abs(state.v + g) <= 1e-12 * std::max(1.0, g) &&
         state.gap() <= gap_tol;
}

void RenewalDetector::open_cycle(const SystemState& state) {
  current_ = RenewalCycle{};
  current_.start = state.t;
  current_.has_samples = sample_every_ > 0;
  current_.sample_dt = sample_every_ > 0 ? sample_dt_ : 0.0;
  open_ = true;
}

void RenewalDetector::observe(const SystemState& state) {
  const std::int64_t index = seen_++;
  const double v = state.v;
  const double h = state.gap();

  if (index == 0 && is_renewal_state(state, GravParams(g_), gap_tol_)) {
    open_cycle(state);
  } else if (!armed_) {
    if (std::abs(v + g_) >= excursion_) armed_ = true;
  } else if (have_prev_ && prev_v_ < -g_ && v >= -g_ && h <= gap_tol_) {
    if (open_) {
      current_.end = state.t;
      current_.duration = current_.end - current_.start;
      done_.push_back(std::move(current_));
    }
    open_cycle(state);
    armed_ = false;
  }

  if (open_) {
    current_.sup_v = std::max(current_.sup_v, v);
    current_.inf_v = std::min(current_.inf_v, v);
    current_.sup_h = std::max(current_.sup_h, h);
    if (sample_every_ > 0 && index % sample_every_ == 0) {
      current_.samples.push_back({v, h});
    }
  }
  prev_v_ = v;
  have_prev_ = true;
}

std::vector<RenewalCycle> detect_renewals(const TimeSeries& series,
                                          double gap_tol, double a0,
                                          const GravParams& params) {
  RenewalDetector detector(params, gap_tol, a0, 1, series.record_interval());
  for (const SystemState& st : series.states) detector.observe(st);
  return detector.take_cycles();
}

double cycle_stationary_estimate(const std::vector<RenewalCycle>& cycles,
                                 const Region& region) {
  if (cycles.empty()) throw std::invalid_argument("no complete cycles");
  double occupied = 0.0;
  double total = 0.0;
  for (const RenewalCycle& c : cycles) {
    if (!c.has_samples) {
      throw std::invalid_argument("cycle carries no phase samples");
    }
    std::int64_t inside = 0;
    for (const PhasePoint& p : c.samples) inside += region.contains(p.v, p.h);
    occupied += c.sample_dt * static_cast<double>(inside);
    total += c.duration;
  }
  return occupied / total;
}

std::vector<RenewalCycle> simulate_cycles(const EnsembleConfig& config,
                                          std::int64_t cycles_per_path,
                                          std::int64_t sample_every) {
  config.validate();
  if (cycles_per_path < 1) {
    throw std::invalid_argument("cycles_per_path must be >= 1");
  }
  const auto n = static_cast<std::size_t>(config.n_paths);
  std::vector<std::vector<RenewalCycle>> per_path(n);
  const std::int64_t max_steps = step_count(config.horizon, config.dt);
  const SystemState start = renewal_state(config.params);

  for_each_path(config.n_paths, config.workers, [&](std::int64_t i) {
    RenewalDetector detector(config.params, config.gap_tol, config.a0,
                             sample_every,
                             config.dt * static_cast<double>(sample_every));
    detector.observe(start);
    NoiseSource noise(
        derive_subseed(config.master_seed, static_cast<std::uint64_t>(i)));
    SystemState st = start;
    // Integrate in chunks so the target count can stop the path early.
    constexpr std::int64_t kChunk = 1 << 16;
    std::int64_t done_steps = 0;
    while (done_steps < max_steps &&
           static_cast<std::int64_t>(detector.cycles().size()) <
               cycles_per_path) {
      const std::int64_t todo = std::min(kChunk, max_steps - done_steps);
      st = integrate(st, config.params, config.dt, todo, noise, config.scheme,
                     [&](std::int64_t, const StepResult& r) {
                       detector.observe(r.state);
                     });
      done_steps += todo;
      // Re-anchor time on the global grid.
      st.t = static_cast<double>(done_steps) * config.dt;
    }
    auto cycles = detector.take_cycles();
    if (static_cast<std::int64_t>(cycles.size()) > cycles_per_path) {
      cycles.resize(static_cast<std::size_t>(cycles_per_path));
    }
    per_path[static_cast<std::size_t>(i)] = std::move(cycles);
  });

  std::vector<RenewalCycle> all;
  for (auto& c : per_path) {
    all.insert(all.end(), std::make_move_iterator(c.begin()),
               std::make_move_iterator(c.end()));
  }
  return all;
}

}  // namespace inert::mc
