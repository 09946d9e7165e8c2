#include "inert/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "inert/analytic.hpp"
#include "inert/empirical.hpp"

namespace inert::mc {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double mean_of(std::span<const double> xs) {
  return std::accumulate(xs.begin(), xs.end(), 0.0) /
         static_cast<double>(xs.size());
}

// Standard error of the grand mean from contiguous batch means taken inside
// each path block.
double batch_means_se(std::span<const double> xs,
                      std::span<const std::size_t> offsets,
                      std::size_t batches_per_path) {
  std::vector<double> means;
  for (std::size_t p = 0; p + 1 < offsets.size(); ++p) {
    const std::size_t lo = offsets[p];
    const std::size_t len = offsets[p + 1] - lo;
    const std::size_t per = len / batches_per_path;
    if (per == 0) continue;
    for (std::size_t k = 0; k < batches_per_path; ++k) {
      means.push_back(mean_of(xs.subspan(lo + k * per, per)));
    }
  }
  if (means.size() < 2) return kNaN;
  const double m = mean_of(means);
  double ss = 0.0;
  for (double b : means) ss += (b - m) * (b - m);
  const double var = ss / static_cast<double>(means.size() - 1);
  return std::sqrt(var / static_cast<double>(means.size()));
}

}  // namespace

StationarySamples pool_stationary_samples(const EnsembleConfig& config) {
  config.validate();
  if (config.horizon - config.burn_in < 10.0 * config.sample_stride) {
    throw std::invalid_argument(
        "need horizon - burn-in >= 10 * stride for stationary sampling");
  }
  const auto paths = run_ensemble(config);
  StationarySamples out;
  out.path_offsets.push_back(0);
  const double cut = config.burn_in * (1.0 - 1e-12);
  for (const TimeSeries& ts : paths) {
    for (const SystemState& st : ts.states) {
      if (st.t < cut) continue;
      out.v.push_back(st.v);
      out.h.push_back(st.gap());
    }
    out.path_offsets.push_back(out.v.size());
  }
  return out;
}

StationaryReport stationary_report(const StationarySamples& samples,
                                   const GravParams& params) {
  if (samples.v.size() < 2 || samples.v.size() != samples.h.size()) {
    throw std::invalid_argument("insufficient stationary samples");
  }
  const analytic::StationaryLaw law(params);
  StationaryReport r;
  r.n_samples = samples.v.size();
  r.mean_v = mean_of(samples.v);
  r.mean_h = mean_of(samples.h);
  double ss = 0.0;
  for (double v : samples.v) ss += (v - r.mean_v) * (v - r.mean_v);
  r.var_v = ss / static_cast<double>(samples.v.size() - 1);

  r.ks_v = ks_distance(EmpiricalDistribution(samples.v),
                       [&](double v) { return law.v_cdf(v); });
  r.ks_h = ks_distance(EmpiricalDistribution(samples.h),
                       [&](double h) { return law.gap_cdf(std::max(h, 0.0)); });

  std::vector<std::size_t> offsets = samples.path_offsets;
  if (offsets.size() < 2) offsets = {0, samples.v.size()};
  r.se_mean_v = batch_means_se(samples.v, offsets, 10);
  r.se_mean_h = batch_means_se(samples.h, offsets, 10);
  return r;
}

StationaryReport stationary_marginal_test(const EnsembleConfig& config) {
  return stationary_report(pool_stationary_samples(config), config.params);
}

PhaseHistogram phase_histogram(const StationarySamples& samples,
                               const GravParams& params, std::size_t v_bins,
                               std::size_t h_bins) {
  if (v_bins == 0 || h_bins == 0) throw std::invalid_argument("need bins");
  if (samples.v.empty()) throw std::invalid_argument("no samples");
  const double g = params.g();
  PhaseHistogram hist;
  hist.v_bins = v_bins;
  hist.h_bins = h_bins;
  hist.v_lo = -g - 4.0;
  hist.v_hi = -g + 4.0;
  hist.h_lo = 0.0;
  hist.h_hi = 4.0 / g;
  const double dv = (hist.v_hi - hist.v_lo) / static_cast<double>(v_bins);
  const double dh = (hist.h_hi - hist.h_lo) / static_cast<double>(h_bins);

  std::vector<std::int64_t> counts(v_bins * h_bins, 0);
  for (std::size_t k = 0; k < samples.v.size(); ++k) {
    const double fv = (samples.v[k] - hist.v_lo) / dv;
    const double fh = (samples.h[k] - hist.h_lo) / dh;
    if (fv < 0.0 || fh < 0.0) continue;
    const auto iv = static_cast<std::size_t>(fv);
    const auto ih = static_cast<std::size_t>(fh);
    if (iv >= v_bins || ih >= h_bins) continue;
    ++counts[iv * h_bins + ih];
  }
  const double norm = static_cast<double>(samples.v.size()) * dv * dh;
  const analytic::StationaryLaw law(params);
  hist.empirical_density.resize(counts.size());
  hist.analytic_density.resize(counts.size());
  for (std::size_t iv = 0; iv < v_bins; ++iv) {
    for (std::size_t ih = 0; ih < h_bins; ++ih) {
      const std::size_t k = iv * h_bins + ih;
      hist.empirical_density[k] = static_cast<double>(counts[k]) / norm;
      hist.analytic_density[k] =
          law.density(hist.v_lo + (static_cast<double>(iv) + 0.5) * dv,
                      hist.h_lo + (static_cast<double>(ih) + 0.5) * dh);
    }
  }
  return hist;
}

StrongLawReport strong_law_estimate(const TimeSeries& series) {
  if (series.states.size() < 2) {
    throw std::invalid_argument("series needs at least two states");
  }
  const double g = series.g;
  const SystemState& first = series.states.front();
  const SystemState& last = series.states.back();
  const double t_end = last.t - first.t;
  if (!(t_end >= 1.0)) throw std::invalid_argument("series horizon must be >= 1");

  StrongLawReport r;
  r.x_over_t = last.x / last.t;
  r.s_over_t = last.s / last.t;
  const double anchor = first.x + first.v;
  for (const SystemState& st : series.states) {
    // X - B and S - B from the compensated pairs, then + g t.
    const double x_minus_b = (st.x - st.b) + (st.lo.x - st.lo.b);
    const double s_minus_b = (st.s - st.b) + (st.lo.s - st.lo.b);
    const double rx = x_minus_b + g * st.t;
    const double rs = s_minus_b + g * st.t;
    r.times.push_back(st.t);
    r.residual_x.push_back(rx);
    r.residual_s.push_back(rs);
    r.identity_error_x =
        std::max(r.identity_error_x, std::abs(rx - (anchor - st.v)));
    r.identity_error_s = std::max(
        r.identity_error_s, std::abs(rs - (anchor - st.v + st.gap())));
  }
  return r;
}

double ols_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("slope fit needs at least two points");
  }
  const double mx = mean_of(x);
  const double my = mean_of(y);
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  if (sxx == 0.0) throw std::invalid_argument("slope fit needs distinct x");
  return sxy / sxx;
}

namespace {

template <class Exceeds>
std::vector<TailPoint> tail_curve(const std::vector<RenewalCycle>& cycles,
                                  std::span<const double> levels,
                                  Exceeds exceeds) {
  std::vector<TailPoint> out;
  for (double level : levels) {
    TailPoint p;
    p.level = level;
    for (const RenewalCycle& c : cycles) p.exceedances += exceeds(c, level);
    p.probability =
        static_cast<double>(p.exceedances) / static_cast<double>(cycles.size());
    p.used_in_fit = p.exceedances >= kMinTailExceedances;
    out.push_back(p);
  }
  return out;
}

template <class Transform>
std::optional<double> fit_tail(const std::vector<TailPoint>& points,
                               Transform transform) {
  std::vector<double> xs;
  std::vector<double> ys;
  for (const TailPoint& p : points) {
    if (!p.used_in_fit) continue;
    xs.push_back(transform(p.level));
    ys.push_back(std::log(p.probability));
  }
  if (xs.size() < 2) return std::nullopt;
  return ols_slope(xs, ys);
}

}  // namespace

TailReport cycle_extreme_tails(const std::vector<RenewalCycle>& cycles,
                               const GravParams& params,
                               std::span<const double> velocity_levels,
                               std::span<const double> gap_levels,
                               std::size_t min_cycles) {
  if (cycles.size() < min_cycles || cycles.empty()) {
    throw std::invalid_argument("too few cycles for tail fits: " +
                                std::to_string(cycles.size()) + " < " +
                                std::to_string(min_cycles));
  }
  const double g = params.g();
  TailReport r;
  r.n_cycles = cycles.size();
  r.upper_v = tail_curve(cycles, velocity_levels,
                         [g](const RenewalCycle& c, double a) {
                           return c.sup_v >= -g + a;
                         });
  r.lower_v = tail_curve(cycles, velocity_levels,
                         [g](const RenewalCycle& c, double a) {
                           return c.inf_v <= -g - a;
                         });
  r.gap = tail_curve(cycles, gap_levels, [](const RenewalCycle& c, double h) {
    return c.sup_h >= h;
  });
  auto square = [](double a) { return a * a; };
  r.slope_upper_v = fit_tail(r.upper_v, square);
  r.slope_lower_v = fit_tail(r.lower_v, square);
  r.slope_gap = fit_tail(r.gap, [](double h) { return h; });
  return r;
}

RunningExtremes::RunningExtremes(std::vector<double> checkpoints)
    : times_(std::move(checkpoints)) {
  if (!std::is_sorted(times_.begin(), times_.end())) {
    throw std::invalid_argument("checkpoints must be increasing");
  }
  max_v_.assign(times_.size(), kNaN);
  max_h_.assign(times_.size(), kNaN);
  min_v_.assign(times_.size(), kNaN);
  min_h_.assign(times_.size(), kNaN);
}

void RunningExtremes::observe(const SystemState& state) {
  const double h = state.gap();
  if (!started_) {
    run_max_v_ = run_min_v_ = state.v;
    run_max_h_ = run_min_h_ = h;
    started_ = true;
  } else {
    run_max_v_ = std::max(run_max_v_, state.v);
    run_min_v_ = std::min(run_min_v_, state.v);
    run_max_h_ = std::max(run_max_h_, h);
    run_min_h_ = std::min(run_min_h_, h);
  }
  while (next_ < times_.size() &&
         state.t >= times_[next_] * (1.0 - 1e-12)) {
    max_v_[next_] = run_max_v_;
    max_h_[next_] = run_max_h_;
    min_v_[next_] = run_min_v_;
    min_h_[next_] = run_min_h_;
    ++next_;
  }
}

RunningExtremes running_extremes(const TimeSeries& series,
                                 std::vector<double> checkpoints) {
  RunningExtremes tracker(std::move(checkpoints));
  for (const SystemState& st : series.states) tracker.observe(st);
  return tracker;
}

double median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median of empty set");
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<long>(mid),
                   values.end());
  const double upper = values[mid];
  if (values.size() % 2 == 1) return upper;
  const double lower =
      *std::max_element(values.begin(), values.begin() + static_cast<long>(mid));
  return 0.5 * (lower + upper);
}

FluctuationReport fluctuation_scaling(const EnsembleConfig& config,
                                      std::vector<double> checkpoints) {
  config.validate();
  if (checkpoints.size() < 2) {
    throw std::invalid_argument("need at least two checkpoints");
  }
  for (std::size_t i = 0; i < checkpoints.size(); ++i) {
    if (!(checkpoints[i] > 1.0)) {
      throw std::invalid_argument("checkpoints must exceed 1");
    }
    if (i > 0 && !(checkpoints[i] > checkpoints[i - 1])) {
      throw std::invalid_argument("checkpoints must be strictly increasing");
    }
  }
  if (checkpoints.back() > config.horizon * (1.0 + 1e-12)) {
    throw std::invalid_argument("last checkpoint exceeds horizon");
  }
  if (checkpoints.back() < 100.0 * checkpoints.front()) {
    throw std::invalid_argument("checkpoints must span two decades");
  }

  const auto n = static_cast<std::size_t>(config.n_paths);
  const std::size_t k = checkpoints.size();
  std::vector<std::vector<double>> max_v(n), max_h(n), min_v(n), min_h(n);
  const SystemState start = renewal_state(config.params);
  const std::int64_t steps =
      step_count(checkpoints.back(), config.dt);

  for_each_path(config.n_paths, config.workers, [&](std::int64_t i) {
    RunningExtremes tracker(checkpoints);
    tracker.observe(start);
    NoiseSource noise(
        derive_subseed(config.master_seed, static_cast<std::uint64_t>(i)));
    integrate(start, config.params, config.dt, steps, noise, config.scheme,
              [&](std::int64_t, const StepResult& r) {
                tracker.observe(r.state);
              });
    const auto slot = static_cast<std::size_t>(i);
    max_v[slot] = tracker.max_v();
    max_h[slot] = tracker.max_h();
    min_v[slot] = tracker.min_v();
    min_h[slot] = tracker.min_h();
  });

  FluctuationReport r;
  r.checkpoints = checkpoints;
  auto column_median = [&](const std::vector<std::vector<double>>& table,
                           std::size_t j) {
    std::vector<double> col;
    col.reserve(n);
    for (const auto& row : table) col.push_back(row[j]);
    return median(std::move(col));
  };
  std::vector<double> sqrt_log_t, log_t;
  for (std::size_t j = 0; j < k; ++j) {
    r.median_max_v.push_back(column_median(max_v, j));
    r.median_max_h.push_back(column_median(max_h, j));
    r.median_min_v.push_back(column_median(min_v, j));
    r.median_min_h.push_back(column_median(min_h, j));
    log_t.push_back(std::log(checkpoints[j]));
    sqrt_log_t.push_back(std::sqrt(log_t.back()));
  }
  r.slope_v = ols_slope(sqrt_log_t, r.median_max_v);
  r.slope_h = ols_slope(log_t, r.median_max_h);
  return r;
}

}  // namespace inert::mc
