// Inert particle under gravity impinged by reflected Brownian motion.
//
// State layout and time stepping for
//
//   dX = dB - dL,   dV = dL - g dt,   dS = V dt,   S >= X,
//
// where L is the collision local time (increasing only when S = X).
#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>
#include <vector>

#include <boost/random/mersenne_twister.hpp>
#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_01.hpp>

namespace inert {

/// Constant downward acceleration g > 0. The Brownian scale is fixed to 1.
class GravParams {
 public:
  explicit GravParams(double g);

  double g() const noexcept { return g_; }

 private:
  double g_;
};

/// Instantaneous configuration of the particle pair.
///
/// x, s, l and b are running sums over up to ~1e8 increments; each keeps a
/// low-order residual in `lo` so that the exact bookkeeping identities
/// (v - v0 = l - l0 - g t, X - (B - g t) = X0 + V0 - V) survive long runs.
/// The public fields always hold the best double approximation.
struct SystemState {
  double t = 0.0;
  double x = 0.0;  ///< Brownian particle position X
  double s = 0.0;  ///< inert particle position S
  double v = 0.0;  ///< inert particle velocity V
  double l = 0.0;  ///< accumulated collision local time L
  double b = 0.0;  ///< driving Brownian motion B

  struct Residual {
    double x = 0.0;
    double s = 0.0;
    double l = 0.0;
    double b = 0.0;
  } lo;

  /// Gap H = S - X, evaluated from the compensated pairs.
  double gap() const noexcept { return (s - x) + (lo.s - lo.x); }
};

/// Fresh state at t = 0 with L = B = 0. Throws std::invalid_argument when
/// s0 < x0 or an input is not finite.
SystemState new_state(double x0, double s0, double v0);

struct StepResult {
  SystemState state;
  bool collided = false;
  double dl = 0.0;  ///< local-time increment over the step
  /// Smallest gap reached inside the step after the push. Zero whenever
  /// dl > 0; for the projection scheme it equals the post-step gap.
  double min_gap = 0.0;
};

/// How collisions inside a step are resolved.
enum class Scheme {
  /// End-of-step projection: the overlap x* - s* is moved into L and the
  /// post-step gap is exactly 0. Only grid-point collisions are seen.
  projection,
  /// The tentative gap is treated as a Brownian bridge over the step and its
  /// sampled minimum is pushed back to 0. Removes the O(sqrt(dt)) loss of
  /// local time that projection suffers from unobserved in-step contacts.
  bridge,
};

const char* to_string(Scheme scheme) noexcept;
/// Throws std::invalid_argument for names other than "projection"/"bridge".
Scheme scheme_from_string(std::string_view name);

/// One projection step driven by the Brownian increment dw. S follows its
/// exact free-fall parabola over the step. Throws std::invalid_argument on
/// dt <= 0 or non-finite input.
StepResult step(const SystemState& state, const GravParams& params, double dt,
                double dw);

/// One bridge step. `u` in (0, 1] selects the quantile of the in-step gap
/// minimum; u = 1 reproduces projection whenever the endpoints do not
/// overlap.
StepResult step_bridge(const SystemState& state, const GravParams& params,
                       double dt, double dw, double u);

/// Strided trajectory. Element k of `states` is the state after
/// k * record_stride steps; `b` in each state is the driving-noise record.
struct TimeSeries {
  double g = 0.0;
  double dt = 0.0;
  std::int64_t record_stride = 1;
  std::uint64_t seed = 0;
  Scheme scheme = Scheme::bridge;
  std::vector<SystemState> states;

  double record_interval() const noexcept {
    return dt * static_cast<double>(record_stride);
  }
};

/// Gaussian increments and bridge quantiles from one seeded 64-bit Mersenne
/// twister. The normal variates use Boost's ziggurat sampler, whose output is
/// fixed by the Boost version rather than by the standard library vendor.
class NoiseSource {
 public:
  explicit NoiseSource(std::uint64_t seed) : engine_(seed) {}

  double normal() { return normal_(engine_); }

  /// Uniform on (0, 1].
  double uniform_open() { return 1.0 - uniform_(engine_); }

 private:
  boost::random::mt19937_64 engine_;
  boost::random::normal_distribution<double> normal_;
  boost::random::uniform_01<double> uniform_;
};

/// Number of steps covering [0, horizon] at spacing dt. Throws when
/// horizon < dt.
std::int64_t step_count(double horizon, double dt);

namespace detail {

inline void accumulate(double& hi, double& lo, double delta) noexcept {
  // TwoSum of (hi, delta), folded into lo, then renormalised with TwoSum.
  const double sum = hi + delta;
  const double bp = sum - hi;
  const double err = (hi - (sum - bp)) + (delta - bp);
  const double carry = lo + err;
  const double hi2 = sum + carry;
  const double bp2 = hi2 - sum;
  lo = (sum - (hi2 - bp2)) + (carry - bp2);
  hi = hi2;
}

// Below this log-probability an in-step crossing is not representable by a
// 53-bit uniform, so the bridge quantile is not drawn.
inline constexpr double kBridgeLogCutoff = -37.0;

/// Free flight over dt plus Brownian increment, without resolving contact.
inline SystemState tentative(const SystemState& st, double g, double dt,
                             double dw) noexcept {
  SystemState next = st;
  accumulate(next.s, next.lo.s, st.v * dt - 0.5 * g * dt * dt);
  next.v = st.v - g * dt;
  accumulate(next.x, next.lo.x, dw);
  accumulate(next.b, next.lo.b, dw);
  next.t = st.t + dt;
  return next;
}

inline StepResult project(const SystemState& st, double g, double dt,
                          double dw) noexcept {
  StepResult r;
  r.state = tentative(st, g, dt, dw);
  const double overlap = -r.state.gap();
  if (overlap > 0.0) {
    r.collided = true;
    r.dl = overlap;
    r.state.x = r.state.s;
    r.state.lo.x = r.state.lo.s;
    r.state.v += overlap;
    accumulate(r.state.l, r.state.lo.l, overlap);
    r.min_gap = 0.0;
  } else {
    r.min_gap = -overlap;
  }
  return r;
}

/// Bridge step given log(u); log_u = 0 means "no in-step excursion".
inline StepResult bridge(const SystemState& st, double g, double dt, double dw,
                         double log_u) noexcept {
  StepResult r;
  const double h0 = st.gap();
  r.state = tentative(st, g, dt, dw);
  const double h1 = r.state.gap();
  const double spread = h1 - h0;
  const double minimum =
      0.5 * ((h0 + h1) - std::sqrt(spread * spread - 2.0 * dt * log_u));
  if (minimum < 0.0) {
    double push = -minimum;
    accumulate(r.state.x, r.state.lo.x, -push);
    if (const double left = r.state.gap(); left < 0.0) {
      // Rounding residue when the minimum sits at the endpoint.
      push -= left;
      r.state.x = r.state.s;
      r.state.lo.x = r.state.lo.s;
    }
    r.collided = true;
    r.dl = push;
    r.state.v += push;
    accumulate(r.state.l, r.state.lo.l, push);
    r.min_gap = 0.0;
  } else {
    r.min_gap = minimum;
  }
  return r;
}

/// True when the bridge minimum between gaps h0 >= 0 and h1 can fall below
/// zero with representable probability.
inline bool bridge_may_touch(double h0, double h1, double dt) noexcept {
  return h1 < 0.0 || -2.0 * h0 * h1 / dt > kBridgeLogCutoff;
}

}  // namespace detail

/// Advance `state` by n_steps with Gaussian increments from `noise`, calling
/// `observe(step_index, const StepResult&)` after every step. Time is set to
/// t0 + i * dt rather than accumulated.
template <class Observer>
SystemState integrate(SystemState state, const GravParams& params, double dt,
                      std::int64_t n_steps, NoiseSource& noise, Scheme scheme,
                      Observer&& observe) {
  const double g = params.g();
  const double t0 = state.t;
  const double sqrt_dt = std::sqrt(dt);
  for (std::int64_t i = 1; i <= n_steps; ++i) {
    const double dw = sqrt_dt * noise.normal();
    StepResult r;
    if (scheme == Scheme::projection) {
      r = detail::project(state, g, dt, dw);
    } else {
      const double h0 = state.gap();
      const double h1 =
          h0 + (state.v * dt - 0.5 * g * dt * dt) - dw;  // screening only
      double log_u = 0.0;
      if (detail::bridge_may_touch(h0, h1, dt)) {
        log_u = std::log(noise.uniform_open());
      }
      r = detail::bridge(state, g, dt, dw, log_u);
    }
    r.state.t = t0 + static_cast<double>(i) * dt;
    state = r.state;
    observe(i, r);
  }
  return state;
}

/// Seeded trajectory over [0, horizon], recording every record_stride-th
/// state (the initial state included). Bitwise reproducible for a seed.
TimeSeries simulate_path(const SystemState& initial, const GravParams& params,
                         double dt, double horizon, std::uint64_t seed,
                         std::int64_t record_stride,
                         Scheme scheme = Scheme::bridge);

/// The same driver with dw = 0 throughout (B = 0), using projection.
TimeSeries simulate_zero_noise(const SystemState& initial,
                               const GravParams& params, double dt,
                               double horizon, std::int64_t record_stride);

/// Closed-form solution of the noise-free system at time t.
///
/// The inert particle falls freely (L = 0, X fixed) until it first meets X at
///   sigma = (v0 + sqrt(v0^2 + 2 g (s0 - x0))) / g,
/// which is 0 when s0 = x0 and v0 <= 0. From then on S = X and
///   V_t = -g + (V_sigma + g) exp(-(t - sigma)),   L_t = S_sigma - S_t.
SystemState zero_noise_solution(const SystemState& initial,
                                const GravParams& params, double t);

}  // namespace inert
