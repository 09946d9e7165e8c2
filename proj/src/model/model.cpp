#include "inert/model.hpp"

#include <stdexcept>
#include <string>

namespace inert {

namespace {

void require_finite(double value, const char* what) {
  if (!std::isfinite(value)) {
    throw std::invalid_argument(std::string(what) + " must be finite");
  }
}

void check_step_inputs(const SystemState& st, double dt, double dw) {
  require_finite(dt, "dt");
  if (dt <= 0.0) throw std::invalid_argument("dt must be positive");
  require_finite(dw, "dw");
  require_finite(st.x, "x");
  require_finite(st.s, "s");
  require_finite(st.v, "v");
  require_finite(st.l, "l");
  require_finite(st.b, "b");
}

}  // namespace

GravParams::GravParams(double g) : g_(g) {
  if (!(std::isfinite(g) && g > 0.0)) {
    throw std::invalid_argument("g must be a positive finite number");
  }
}

const char* to_string(Scheme scheme) noexcept {
  return scheme == Scheme::projection ? "projection" : "bridge";
}

Scheme scheme_from_string(std::string_view name) {
  if (name == "projection") return Scheme::projection;
  if (name == "bridge") return Scheme::bridge;
  throw std::invalid_argument("unknown scheme '" + std::string(name) + "'");
}

SystemState new_state(double x0, double s0, double v0) {
  require_finite(x0, "x0");
  require_finite(s0, "s0");
  require_finite(v0, "v0");
  if (s0 < x0) {
    throw std::invalid_argument("initial state violates S >= X");
  }
  SystemState st;
  st.x = x0;
  st.s = s0;
  st.v = v0;
  return st;
}

StepResult step(const SystemState& state, const GravParams& params, double dt,
                double dw) {
  check_step_inputs(state, dt, dw);
  return detail::project(state, params.g(), dt, dw);
}

StepResult step_bridge(const SystemState& state, const GravParams& params,
                       double dt, double dw, double u) {
  check_step_inputs(state, dt, dw);
  if (!(u > 0.0 && u <= 1.0)) {
    throw std::invalid_argument("bridge quantile u must lie in (0, 1]");
  }
  return detail::bridge(state, params.g(), dt, dw, std::log(u));
}

std::int64_t step_count(double horizon, double dt) {
  require_finite(horizon, "horizon");
  require_finite(dt, "dt");
  if (dt <= 0.0) throw std::invalid_argument("dt must be positive");
  if (horizon < dt) throw std::invalid_argument("horizon must be >= dt");
  // Tolerate horizon/dt landing a hair below an integer.
  return static_cast<std::int64_t>(std::floor(horizon / dt * (1.0 + 1e-12)));
}

TimeSeries simulate_path(const SystemState& initial, const GravParams& params,
                         double dt, double horizon, std::uint64_t seed,
                         std::int64_t record_stride, Scheme scheme) {
  if (record_stride < 1) {
    throw std::invalid_argument("record_stride must be >= 1");
  }
  check_step_inputs(initial, dt, 0.0);
  if (initial.gap() < 0.0) {
    throw std::invalid_argument("initial state violates S >= X");
  }
  const std::int64_t n = step_count(horizon, dt);

  TimeSeries series;
  series.g = params.g();
  series.dt = dt;
  series.record_stride = record_stride;
  series.seed = seed;
  series.scheme = scheme;
  series.states.reserve(static_cast<std::size_t>(n / record_stride + 1));
  series.states.push_back(initial);

  NoiseSource noise(seed);
  integrate(initial, params, dt, n, noise, scheme,
            [&](std::int64_t i, const StepResult& r) {
              if (i % record_stride == 0) series.states.push_back(r.state);
            });
  return series;
}

TimeSeries simulate_zero_noise(const SystemState& initial,
                               const GravParams& params, double dt,
                               double horizon, std::int64_t record_stride) {
  if (record_stride < 1) {
    throw std::invalid_argument("record_stride must be >= 1");
  }
  check_step_inputs(initial, dt, 0.0);
  const std::int64_t n = step_count(horizon, dt);

  TimeSeries series;
  series.g = params.g();
  series.dt = dt;
  series.record_stride = record_stride;
  series.scheme = Scheme::projection;
  series.states.reserve(static_cast<std::size_t>(n / record_stride + 1));
  series.states.push_back(initial);

  SystemState st = initial;
  const double t0 = initial.t;
  for (std::int64_t i = 1; i <= n; ++i) {
    StepResult r = detail::project(st, params.g(), dt, 0.0);
    r.state.t = t0 + static_cast<double>(i) * dt;
    st = r.state;
    if (i % record_stride == 0) series.states.push_back(st);
  }
  return series;
}

SystemState zero_noise_solution(const SystemState& initial,
                                const GravParams& params, double t) {
  require_finite(t, "t");
  if (t < 0.0) throw std::invalid_argument("t must be nonnegative");
  const double g = params.g();
  const double x0 = initial.x;
  const double s0 = initial.s;
  const double v0 = initial.v;
  const double gap0 = s0 - x0;
  if (gap0 < 0.0) throw std::invalid_argument("initial state violates S >= X");

  double disc = v0 * v0 + 2.0 * g * gap0;
  if (disc < 0.0 && disc >= -1e-12) disc = 0.0;
  const double sigma = (v0 + std::sqrt(disc)) / g;

  SystemState out = initial;
  out.lo = {};
  out.t = initial.t + t;
  if (t < sigma) {
    out.x = x0;
    out.s = s0 + v0 * t - 0.5 * g * t * t;
    out.v = v0 - g * t;
    out.l = initial.l;
    return out;
  }
  const double v_sigma = v0 - g * sigma;
  const double u = t - sigma;
  const double relax = -std::expm1(-u);  // 1 - e^{-u}
  out.v = -g + (v_sigma + g) * std::exp(-u);
  out.s = x0 - g * u + (v_sigma + g) * relax;
  out.x = out.s;
  out.l = initial.l + (x0 - out.s);
  return out;
}

}  // namespace inert
