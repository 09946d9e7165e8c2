#include "inert/hitting.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/distributions/chi_squared.hpp>

#include "inert/analytic.hpp"
#include "inert/ensemble.hpp"
#include "inert/model.hpp"

namespace inert::mc {

namespace {

// log of the smallest ever-hit probability worth simulating further.
const double kLogGiveUp = std::log(1e-12);
constexpr double kLogBridgeCutoff = -37.0;
constexpr double kMinExpected = 5.0;

}  // namespace

std::string to_string(Detection d) {
  return d == Detection::grid ? "grid" : "bridge";
}

Detection detection_from_string(std::string_view name) {
  if (name == "grid") return Detection::grid;
  if (name == "bridge") return Detection::bridge;
  throw std::invalid_argument("unknown detection '" + std::string(name) +
                              "' (expected grid or bridge)");
}

void HittingConfig::validate() const {
  if (!std::isfinite(a) || a == 0.0) {
    throw std::invalid_argument("a must be finite and nonzero");
  }
  if (!std::isfinite(m)) throw std::invalid_argument("m must be finite");
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw std::invalid_argument("dt must be positive");
  }
  if (!(horizon >= dt) || !std::isfinite(horizon)) {
    throw std::invalid_argument("horizon must be at least dt");
  }
  if (n < 1) throw std::invalid_argument("n must be positive");
  if (!(bin_width >= dt) || !std::isfinite(bin_width)) {
    throw std::invalid_argument("bin width must be at least dt");
  }
}

double simulate_hitting_time(const HittingConfig& config, std::uint64_t seed) {
  NoiseSource noise(seed);
  const double a = config.a;
  const double m = config.m;
  const double dt = config.dt;
  const double sdt = std::sqrt(dt);
  const std::int64_t steps = step_count(config.horizon, config.dt);
  const bool bridge = config.detection == Detection::bridge;
  const double side = a > 0.0 ? 1.0 : -1.0;

  double y = 0.0;
  for (std::int64_t i = 0; i < steps; ++i) {
    const double y1 = y + m * dt + sdt * noise.normal();
    const double d0 = side * (a - y);
    const double d1 = side * (a - y1);
    if (d1 <= 0.0) {
      return bridge ? (static_cast<double>(i) + 0.5) * dt
                    : static_cast<double>(i + 1) * dt;
    }
    if (bridge) {
      const double log_p = -2.0 * d0 * d1 / dt;
      if (log_p > kLogBridgeCutoff &&
          noise.uniform_open() <= std::exp(log_p)) {
        return (static_cast<double>(i) + 0.5) * dt;
      }
    }
    y = y1;
    const double ahead = a - y;
    if (m * ahead < 0.0 && 2.0 * m * ahead < kLogGiveUp) break;
  }
  return -1.0;
}

HittingReport hitting_time_oracle_test(const HittingConfig& config) {
  config.validate();
  const auto n = static_cast<std::size_t>(config.n);
  std::vector<double> times(n);
  for_each_path(config.n, config.workers, [&](std::int64_t i) {
    times[static_cast<std::size_t>(i)] = simulate_hitting_time(
        config, derive_subseed(config.seed, static_cast<std::uint64_t>(i)));
  });

  HittingReport r;
  r.n = config.n;
  r.oracle_prob = analytic::bm_drift_hitting_prob(config.a, config.m);
  r.oracle_mass =
      analytic::bm_drift_hitting_mass(config.a, config.m, 0.0, config.horizon);
  if (config.m * config.a >= 0.0) {
    r.note =
        "m*a >= 0: the level is reached almost surely, so the horizon "
        "truncates a heavy tail and the hit fraction stays below one";
  }

  const auto n_bins = static_cast<std::size_t>(
      std::ceil(config.horizon / config.bin_width * (1.0 - 1e-12)));
  r.bins.resize(n_bins);
  const double total = static_cast<double>(config.n);
  for (std::size_t k = 0; k < n_bins; ++k) {
    HittingBin& b = r.bins[k];
    b.t_lo = static_cast<double>(k) * config.bin_width;
    b.t_hi = std::min(static_cast<double>(k + 1) * config.bin_width,
                      config.horizon);
    b.expected = total * analytic::bm_drift_hitting_mass(config.a, config.m,
                                                         b.t_lo, b.t_hi);
  }
  for (double t : times) {
    if (t < 0.0) continue;
    ++r.hits;
    const auto k = std::min(static_cast<std::size_t>(t / config.bin_width),
                            n_bins - 1);
    ++r.bins[k].observed;
  }
  r.hit_fraction = static_cast<double>(r.hits) / total;

  // Merge adjacent bins until every cell expects at least kMinExpected.
  std::vector<double> obs;
  std::vector<double> exp;
  double o_acc = 0.0;
  double e_acc = 0.0;
  for (const HittingBin& b : r.bins) {
    o_acc += static_cast<double>(b.observed);
    e_acc += b.expected;
    if (e_acc >= kMinExpected) {
      obs.push_back(o_acc);
      exp.push_back(e_acc);
      o_acc = e_acc = 0.0;
    }
  }
  o_acc += static_cast<double>(config.n - r.hits);
  e_acc += total * std::max(0.0, 1.0 - r.oracle_mass);
  if (e_acc >= kMinExpected || exp.empty()) {
    obs.push_back(o_acc);
    exp.push_back(e_acc);
  } else {
    obs.back() += o_acc;
    exp.back() += e_acc;
  }
  for (std::size_t k = 0; k < obs.size(); ++k) {
    if (exp[k] > 0.0) {
      r.chi_square += (obs[k] - exp[k]) * (obs[k] - exp[k]) / exp[k];
    }
  }
  r.chi_square_df = static_cast<std::int64_t>(obs.size()) - 1;
  if (r.chi_square_df >= 1) {
    const boost::math::chi_squared dist(static_cast<double>(r.chi_square_df));
    r.p_value = boost::math::cdf(boost::math::complement(dist, r.chi_square));
  } else {
    r.p_value = 1.0;
  }
  return r;
}

}  // namespace inert::mc
