#include "inert/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "inert/analytic.hpp"
#include "inert/experiments.hpp"
#include "inert/model.hpp"
#include "inert/renewal.hpp"

namespace inert::cli {

using nlohmann::ordered_json;

std::string to_string(Command command) {
  switch (command) {
    case Command::stationary: return "stationary";
    case Command::strong_law: return "strong-law";
    case Command::fluctuations: return "fluctuations";
    case Command::cycles: return "cycles";
    case Command::hitting: return "hitting";
    case Command::zero_noise: return "zero-noise";
    case Command::trace: return "trace";
  }
  return "?";
}

namespace {

struct RawFlags {
  double g = 1.0;
  double dt = 1e-3;
  double horizon = 0.0;
  std::int64_t paths = 64;
  std::uint64_t seed = 0;
  double burn_in = 0.0;
  double stride = 1.0;
  double gap_tol = 0.0;
  double a0 = 0.0;
  unsigned workers = 0;
  std::string scheme = "bridge";
  double a = 1.0;
  double m = -1.0;
  std::int64_t n = 100000;
  double bin_width = 0.1;
  std::string detection = "bridge";
  double x0 = 0.0;
  double s0 = 0.0;
  double v0 = 0.0;
  std::int64_t cycles = 1000;
  std::vector<double> checkpoints{1e2, 1e3, 1e4};
  double ks_max = 0.02;
  bool no_check = false;
  std::string out = "-";
  std::string format = "csv";
};

struct SubcommandInfo {
  Command command;
  const char* name;
  const char* description;
  double default_horizon;
  double default_stride;
};

const SubcommandInfo kSubcommands[] = {
    {Command::stationary, "stationary",
     "Long-run (V, H) samples pooled over paths against the product law "
     "V ~ N(-g, 1/2), H ~ Exp(2g): KS distances, moments and a 50x50 phase "
     "histogram with the analytic density per bin.",
     1e4, 1.0},
    {Command::strong_law, "strong-law",
     "X_T/T and S_T/T tend to -g, and X_t - (B_t - g t) = (X_0 + V_0) - V_t "
     "holds exactly along every path.",
     1e4, 1.0},
    {Command::fluctuations, "fluctuations",
     "Running maxima grow like sqrt(log t) for V and like log(t)/(2g) for "
     "the gap H: ensemble medians regressed on sqrt(log t) and log t.",
     1e4, 1.0},
    {Command::cycles, "cycles",
     "Renewal cycles and the tails of their extremes: log P(sup V > -g + a) "
     "decays at rate a^2 and log P(sup H > r) at rate 2 g r.",
     1e4, 1.0},
    {Command::hitting, "hitting",
     "First passage of B_t + m t through level a: hit fraction and hit-time "
     "histogram against the closed-form density, with a chi-square test.",
     200.0, 1.0},
    {Command::zero_noise, "zero-noise",
     "Noise-free dynamics: the simulated path against the closed-form "
     "solution (free fall, then exponential relaxation of V to -g).",
     10.0, 0.1},
    {Command::trace, "trace",
     "Raw trajectory t, x, s, v, l, b of one seeded path.", 10.0, 0.1},
};

bool uses_ensemble(Command c) {
  return c == Command::stationary || c == Command::strong_law ||
         c == Command::fluctuations || c == Command::cycles;
}

void add_flags(CLI::App& sub, Command c, RawFlags& f) {
  const bool ens = uses_ensemble(c);
  const bool path = c == Command::trace || c == Command::zero_noise;
  if (c != Command::hitting) {
    sub.add_option("--g", f.g, "gravitational acceleration, > 0")
        ->capture_default_str();
  }
  sub.add_option("--dt", f.dt, "time step")->capture_default_str();
  sub.add_option("--horizon", f.horizon, "simulated time per path");
  if (c != Command::zero_noise) {
    sub.add_option("--seed", f.seed, "master seed")->capture_default_str();
  }
  if (ens) {
    sub.add_option("--paths", f.paths, "number of paths")
        ->capture_default_str();
    sub.add_option("--burn-in", f.burn_in,
                   "discarded initial time (default 100 max(1/g, 1))");
    sub.add_option("--gap-tol", f.gap_tol,
                   "gap accepted as contact at a renewal (default 10 sqrt(dt))");
    sub.add_option("--a0", f.a0,
                   "renewal threshold; cycles need |V + g| >= a0 + 2, "
                   "a0 > g (default g + 1)");
  }
  if (ens || path) {
    sub.add_option("--stride", f.stride, "time between recorded states");
  }
  if (ens || c == Command::trace) {
    sub.add_option("--scheme", f.scheme,
                   "collision scheme: bridge or projection")
        ->capture_default_str();
  }
  if (ens || c == Command::hitting) {
    sub.add_option("--workers", f.workers,
                   "worker threads, 0 = all cores; never changes results")
        ->capture_default_str();
  }
  if (path) {
    sub.add_option("--x0", f.x0, "initial X")->capture_default_str();
    sub.add_option("--s0", f.s0, "initial S, >= x0")->capture_default_str();
    sub.add_option("--v0", f.v0, "initial V")->capture_default_str();
  }
  if (c == Command::hitting) {
    sub.add_option("--a", f.a, "level, nonzero")->capture_default_str();
    sub.add_option("--m", f.m, "drift")->capture_default_str();
    sub.add_option("--n", f.n, "number of paths")->capture_default_str();
    sub.add_option("--bin-width", f.bin_width, "histogram bin width")
        ->capture_default_str();
    sub.add_option("--detection", f.detection,
                   "crossing detection: bridge or grid")
        ->capture_default_str();
  }
  if (c == Command::cycles) {
    sub.add_option("--cycles", f.cycles, "target cycles per path")
        ->capture_default_str();
  }
  if (c == Command::fluctuations) {
    sub.add_option("--checkpoints", f.checkpoints,
                   "checkpoint times, comma separated")
        ->delimiter(',')
        ->capture_default_str();
  }
  if (c == Command::stationary) {
    sub.add_option("--ks-max", f.ks_max, "KS threshold")
        ->capture_default_str();
  }
  sub.add_flag("--no-check", f.no_check,
               "report only; never exit 1 on a threshold");
  sub.add_option("--out", f.out, "output file, '-' for stdout")
      ->capture_default_str();
  sub.add_option("--format", f.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
}

ExperimentSpec to_spec(const SubcommandInfo& info, const CLI::App& sub,
                       const RawFlags& f) {
  ExperimentSpec spec;
  spec.command = info.command;
  const auto given = [&](const char* flag) {
    try {
      return sub.get_option(flag)->count() > 0;
    } catch (const CLI::OptionNotFound&) {
      return false;
    }
  };
  const double horizon = given("--horizon") ? f.horizon : info.default_horizon;
  const double stride = given("--stride") ? f.stride : info.default_stride;

  spec.ensemble = mc::EnsembleConfig::defaults(f.g, f.dt);
  spec.ensemble.horizon = horizon;
  spec.ensemble.n_paths = f.paths;
  spec.ensemble.master_seed = f.seed;
  spec.ensemble.sample_stride = stride;
  if (given("--burn-in")) spec.ensemble.burn_in = f.burn_in;
  if (given("--gap-tol")) spec.ensemble.gap_tol = f.gap_tol;
  if (given("--a0")) spec.ensemble.a0 = f.a0;
  spec.ensemble.workers = f.workers;
  spec.ensemble.scheme = scheme_from_string(f.scheme);

  spec.hitting.a = f.a;
  spec.hitting.m = f.m;
  spec.hitting.dt = f.dt;
  spec.hitting.horizon = horizon;
  spec.hitting.n = f.n;
  spec.hitting.seed = f.seed;
  spec.hitting.detection = mc::detection_from_string(f.detection);
  spec.hitting.bin_width = f.bin_width;
  spec.hitting.workers = f.workers;

  spec.x0 = f.x0;
  spec.s0 = f.s0;
  spec.v0 = f.v0;
  spec.cycles = f.cycles;
  spec.checkpoints = f.checkpoints;
  spec.ks_max = f.ks_max;
  spec.check = !f.no_check;
  spec.output_path = f.out;
  spec.format = f.format == "json" ? Format::json : Format::csv;

  if (info.command == Command::hitting) {
    spec.hitting.validate();
  } else if (uses_ensemble(info.command)) {
    spec.ensemble.validate();
  } else {
    if (!(f.dt > 0.0) || !(horizon >= f.dt)) {
      throw std::invalid_argument("need dt > 0 and horizon >= dt");
    }
    if (!(stride >= f.dt)) throw std::invalid_argument("stride must be >= dt");
    (void)new_state(f.x0, f.s0, f.v0);
  }
  if (info.command == Command::cycles && f.cycles < 1) {
    throw std::invalid_argument("cycles must be positive");
  }
  if (info.command == Command::stationary && !(f.ks_max > 0.0)) {
    throw std::invalid_argument("ks-max must be positive");
  }
  if (info.command == Command::fluctuations) {
    const auto& cp = spec.checkpoints;
    if (cp.size() < 2) throw std::invalid_argument("need >= 2 checkpoints");
    if (!std::is_sorted(cp.begin(), cp.end()) || cp.front() <= 1.0 ||
        cp.back() > horizon || cp.back() < 100.0 * cp.front()) {
      throw std::invalid_argument(
          "checkpoints must increase, exceed 1, stay within the horizon and "
          "span two decades");
    }
  }
  return spec;
}

}  // namespace

ExperimentSpec parse_args(const std::vector<std::string>& args) {
  CLI::App app{
      "Simulation and verification of an inert particle under gravity "
      "pushed by reflected Brownian motion.",
      "inert"};
  app.require_subcommand(1, 1);
  RawFlags flags;
  std::vector<CLI::App*> subs;
  for (const auto& info : kSubcommands) {
    CLI::App* sub = app.add_subcommand(info.name, info.description);
    add_flags(*sub, info.command, flags);
    subs.push_back(sub);
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    std::ostringstream text;
    app.exit(e, text, text);
    throw HelpRequested(text.str());
  } catch (const CLI::CallForAllHelp& e) {
    std::ostringstream text;
    app.exit(e, text, text);
    throw HelpRequested(text.str());
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  for (std::size_t i = 0; i < subs.size(); ++i) {
    if (!subs[i]->parsed()) continue;
    try {
      return to_spec(kSubcommands[i], *subs[i], flags);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  throw UsageError("a subcommand is required");
}

// ---------------------------------------------------------------------------

namespace {

ordered_json ensemble_config_json(const ExperimentSpec& spec) {
  const auto& c = spec.ensemble;
  ordered_json j;
  j["command"] = to_string(spec.command);
  j["g"] = c.params.g();
  j["dt"] = c.dt;
  j["horizon"] = c.horizon;
  j["paths"] = c.n_paths;
  j["seed"] = c.master_seed;
  j["burn-in"] = c.burn_in;
  j["stride"] = c.sample_stride;
  j["gap-tol"] = c.gap_tol;
  j["a0"] = c.a0;
  j["scheme"] = to_string(c.scheme);
  j["workers"] = c.workers;
  return j;
}

void finish_config(ordered_json& j, const ExperimentSpec& spec) {
  j["check"] = spec.check;
  j["format"] = spec.format == Format::json ? "json" : "csv";
}

void require(Report& r, bool ok, const std::string& what) {
  if (!ok) r.failures.push_back(what);
}

Report stationary(const ExperimentSpec& spec) {
  Report r;
  r.config = ensemble_config_json(spec);
  r.config["ks-max"] = spec.ks_max;
  finish_config(r.config, spec);

  const GravParams& params = spec.ensemble.params;
  const double g = params.g();
  const auto samples = mc::pool_stationary_samples(spec.ensemble);
  const auto rep = mc::stationary_report(samples, params);
  r.results["n_samples"] = rep.n_samples;
  r.results["ks_v"] = rep.ks_v;
  r.results["ks_h"] = rep.ks_h;
  r.results["mean_v"] = rep.mean_v;
  r.results["var_v"] = rep.var_v;
  r.results["mean_h"] = rep.mean_h;
  r.results["se_mean_v"] = rep.se_mean_v;
  r.results["se_mean_h"] = rep.se_mean_h;
  r.results["analytic_mean_v"] = -g;
  r.results["analytic_var_v"] = analytic::StationaryLaw::v_variance();
  r.results["analytic_mean_h"] = 1.0 / (2.0 * g);

  require(r, rep.ks_v < spec.ks_max, "ks_v >= ks-max");
  require(r, rep.ks_h < spec.ks_max, "ks_h >= ks-max");
  require(r, std::abs(rep.mean_v + g) <= 0.01, "|mean_v + g| > 0.01");
  require(r, std::abs(rep.var_v - 0.5) <= 0.02, "|var_v - 0.5| > 0.02");
  require(r, std::abs(rep.mean_h - 1.0 / (2.0 * g)) <= 0.01,
          "|mean_h - 1/(2g)| > 0.01");

  const auto hist = mc::phase_histogram(samples, params);
  r.table_name = "histogram";
  r.table.columns = {"v_lo", "v_hi", "h_lo", "h_hi", "empirical_density",
                     "analytic_density"};
  const double dv = (hist.v_hi - hist.v_lo) / static_cast<double>(hist.v_bins);
  const double dh = (hist.h_hi - hist.h_lo) / static_cast<double>(hist.h_bins);
  for (std::size_t iv = 0; iv < hist.v_bins; ++iv) {
    for (std::size_t ih = 0; ih < hist.h_bins; ++ih) {
      const std::size_t k = iv * hist.h_bins + ih;
      const double v0 = hist.v_lo + static_cast<double>(iv) * dv;
      const double h0 = hist.h_lo + static_cast<double>(ih) * dh;
      r.table.rows.push_back({v0, v0 + dv, h0, h0 + dh,
                              hist.empirical_density[k],
                              hist.analytic_density[k]});
    }
  }
  return r;
}

Report strong_law(const ExperimentSpec& spec) {
  Report r;
  r.config = ensemble_config_json(spec);
  finish_config(r.config, spec);
  const double g = spec.ensemble.params.g();
  const auto paths = mc::run_ensemble(spec.ensemble);

  double worst_x = 0.0, worst_s = 0.0, worst_id_x = 0.0, worst_id_s = 0.0;
  std::optional<mc::StrongLawReport> first;
  for (const auto& ts : paths) {
    auto rep = mc::strong_law_estimate(ts);
    worst_x = std::max(worst_x, std::abs(rep.x_over_t + g));
    worst_s = std::max(worst_s, std::abs(rep.s_over_t + g));
    worst_id_x = std::max(worst_id_x, rep.identity_error_x);
    worst_id_s = std::max(worst_id_s, rep.identity_error_s);
    if (!first) first = std::move(rep);
  }
  r.results["x_over_t"] = first->x_over_t;
  r.results["s_over_t"] = first->s_over_t;
  r.results["max_abs_x_over_t_plus_g"] = worst_x;
  r.results["max_abs_s_over_t_plus_g"] = worst_s;
  r.results["identity_error_x"] = worst_id_x;
  r.results["identity_error_s"] = worst_id_s;
  require(r, worst_x < 0.05, "|X_T/T + g| >= 0.05");
  require(r, worst_s < 0.05, "|S_T/T + g| >= 0.05");
  require(r, worst_id_x <= 1e-9, "residual identity error for X > 1e-9");
  require(r, worst_id_s <= 1e-9, "residual identity error for S > 1e-9");

  // Residual processes of the first path.
  r.table_name = "residuals";
  r.table.columns = {"t", "residual_x", "residual_s", "v", "h"};
  const auto& states = paths.front().states;
  for (std::size_t i = 0; i < states.size(); ++i) {
    r.table.rows.push_back({first->times[i], first->residual_x[i],
                            first->residual_s[i], states[i].v,
                            states[i].gap()});
  }
  return r;
}

Report fluctuations(const ExperimentSpec& spec) {
  Report r;
  r.config = ensemble_config_json(spec);
  r.config["checkpoints"] = spec.checkpoints;
  finish_config(r.config, spec);
  const double g = spec.ensemble.params.g();
  const auto rep = mc::fluctuation_scaling(spec.ensemble, spec.checkpoints);
  r.results["slope_v"] = rep.slope_v;
  r.results["slope_h"] = rep.slope_h;
  r.results["expected_slope_v"] = 1.0;
  r.results["expected_slope_h"] = 1.0 / (2.0 * g);
  require(r, std::abs(rep.slope_h - 1.0 / (2.0 * g)) <= 0.2,
          "gap slope outside 1/(2g) +- 0.2");
  require(r, std::abs(rep.slope_v - 1.0) <= 0.3,
          "velocity slope outside 1 +- 0.3");
  r.table_name = "checkpoints";
  r.table.columns = {"t", "median_max_v", "median_max_h", "median_min_v",
                     "median_min_h"};
  for (std::size_t k = 0; k < rep.checkpoints.size(); ++k) {
    r.table.rows.push_back({rep.checkpoints[k], rep.median_max_v[k],
                            rep.median_max_h[k], rep.median_min_v[k],
                            rep.median_min_h[k]});
  }
  return r;
}

std::vector<double> level_grid(double lo, double hi, double step) {
  std::vector<double> out;
  const auto n = static_cast<int>(std::llround((hi - lo) / step));
  for (int i = 0; i <= n; ++i) out.push_back(lo + step * i);
  return out;
}

Report cycles(const ExperimentSpec& spec) {
  Report r;
  r.config = ensemble_config_json(spec);
  r.config["cycles"] = spec.cycles;
  finish_config(r.config, spec);
  const GravParams& params = spec.ensemble.params;
  const double g = params.g();
  const auto found = mc::simulate_cycles(spec.ensemble, spec.cycles);
  r.results["n_cycles"] = found.size();
  r.table_name = "tails";
  r.table.columns = {"tail", "level", "probability", "exceedances",
                     "used_in_fit"};
  if (found.empty()) {
    r.failures.push_back("no complete renewal cycle within the horizon");
    return r;
  }
  double total = 0.0;
  for (const auto& c : found) total += c.duration;
  r.results["mean_duration"] = total / static_cast<double>(found.size());

  const auto v_levels = level_grid(2.0, 3.5, 0.25);
  const auto h_levels = level_grid(1.0, 3.0, 0.25);
  const auto tails =
      mc::cycle_extreme_tails(found, params, v_levels, h_levels, 1);
  auto slope = [](const std::optional<double>& s) -> ordered_json {
    if (s) return *s;
    return nullptr;
  };
  r.results["slope_upper_v"] = slope(tails.slope_upper_v);
  r.results["slope_lower_v"] = slope(tails.slope_lower_v);
  r.results["slope_gap"] = slope(tails.slope_gap);
  r.results["expected_slope_v"] = -1.0;
  r.results["expected_slope_gap"] = -2.0 * g;

  require(r, found.size() >= mc::kMinTailCycles,
          "fewer than " + std::to_string(mc::kMinTailCycles) +
              " cycles for slope fits");
  require(r, tails.slope_gap && std::abs(*tails.slope_gap + 2.0 * g) <= 0.4,
          "gap tail slope missing or outside -2g +- 0.4");
  require(r,
          tails.slope_upper_v && std::abs(*tails.slope_upper_v + 1.0) <= 0.3,
          "velocity tail slope missing or outside -1 +- 0.3");

  auto emit = [&](const char* name, const std::vector<mc::TailPoint>& pts) {
    for (const auto& p : pts) {
      r.table.rows.push_back({std::string(name), p.level, p.probability,
                              p.exceedances,
                              static_cast<std::int64_t>(p.used_in_fit)});
    }
  };
  emit("upper_v", tails.upper_v);
  emit("lower_v", tails.lower_v);
  emit("gap", tails.gap);
  return r;
}

Report hitting(const ExperimentSpec& spec) {
  const auto& c = spec.hitting;
  Report r;
  r.config["command"] = to_string(spec.command);
  r.config["a"] = c.a;
  r.config["m"] = c.m;
  r.config["dt"] = c.dt;
  r.config["horizon"] = c.horizon;
  r.config["n"] = c.n;
  r.config["seed"] = c.seed;
  r.config["detection"] = mc::to_string(c.detection);
  r.config["bin-width"] = c.bin_width;
  r.config["workers"] = c.workers;
  finish_config(r.config, spec);

  const auto rep = mc::hitting_time_oracle_test(c);
  r.results["n"] = rep.n;
  r.results["hits"] = rep.hits;
  r.results["hit_fraction"] = rep.hit_fraction;
  r.results["oracle_mass"] = rep.oracle_mass;
  r.results["oracle_prob"] = rep.oracle_prob;
  r.results["chi_square"] = rep.chi_square;
  r.results["chi_square_df"] = rep.chi_square_df;
  r.results["p_value"] = rep.p_value;
  if (!rep.note.empty()) r.results["note"] = rep.note;
  require(r, std::abs(rep.hit_fraction - rep.oracle_mass) <= 0.005,
          "hit fraction more than 0.005 from the oracle");
  require(r, rep.p_value >= 0.01, "chi-square test rejects at the 1% level");

  r.table_name = "bins";
  r.table.columns = {"t_lo", "t_hi", "observed", "expected"};
  for (const auto& b : rep.bins) {
    r.table.rows.push_back({b.t_lo, b.t_hi, b.observed, b.expected});
  }
  return r;
}

ordered_json path_config_json(const ExperimentSpec& spec, bool noisy) {
  const auto& c = spec.ensemble;
  ordered_json j;
  j["command"] = to_string(spec.command);
  j["g"] = c.params.g();
  j["dt"] = c.dt;
  j["horizon"] = c.horizon;
  j["stride"] = c.sample_stride;
  if (noisy) {
    j["seed"] = c.master_seed;
    j["scheme"] = to_string(c.scheme);
  }
  j["x0"] = spec.x0;
  j["s0"] = spec.s0;
  j["v0"] = spec.v0;
  return j;
}

Report zero_noise(const ExperimentSpec& spec) {
  Report r;
  r.config = path_config_json(spec, false);
  finish_config(r.config, spec);
  const auto& c = spec.ensemble;
  const SystemState start = new_state(spec.x0, spec.s0, spec.v0);
  const auto series =
      simulate_zero_noise(start, c.params, c.dt, c.horizon, 1);
  const std::int64_t every = std::max<std::int64_t>(
      1, std::llround(c.sample_stride / c.dt));

  r.table_name = "errors";
  r.table.columns = {"t", "v_sim", "v_exact", "dv", "s_sim", "s_exact", "ds",
                     "l_sim", "l_exact", "dl"};
  double max_dv = 0.0, max_ds = 0.0, max_dl = 0.0;
  for (std::size_t i = 0; i < series.states.size(); ++i) {
    const SystemState& sim = series.states[i];
    const SystemState ex = zero_noise_solution(start, c.params, sim.t);
    const double dv = sim.v - ex.v;
    const double ds = sim.s - ex.s;
    const double dl = sim.l - ex.l;
    max_dv = std::max(max_dv, std::abs(dv));
    max_ds = std::max(max_ds, std::abs(ds));
    max_dl = std::max(max_dl, std::abs(dl));
    if (static_cast<std::int64_t>(i) % every == 0) {
      r.table.rows.push_back(
          {sim.t, sim.v, ex.v, dv, sim.s, ex.s, ds, sim.l, ex.l, dl});
    }
  }
  r.results["max_abs_dv"] = max_dv;
  r.results["max_abs_ds"] = max_ds;
  r.results["max_abs_dl"] = max_dl;
  r.results["bound_dv"] = 5.0 * c.dt;
  require(r, max_dv < 5.0 * c.dt, "max |dV| >= 5 dt");
  return r;
}

Report trace(const ExperimentSpec& spec) {
  Report r;
  r.config = path_config_json(spec, true);
  finish_config(r.config, spec);
  const auto& c = spec.ensemble;
  const std::int64_t every = std::max<std::int64_t>(
      1, std::llround(c.sample_stride / c.dt));
  const auto series = simulate_path(
      new_state(spec.x0, spec.s0, spec.v0), c.params, c.dt, c.horizon,
      mc::derive_subseed(c.master_seed, 0), every, c.scheme);
  r.results["rows"] = series.states.size();
  r.table_name = "states";
  r.table.columns = {"t", "x", "s", "v", "l", "b"};
  for (const SystemState& st : series.states) {
    r.table.rows.push_back({st.t, st.x, st.s, st.v, st.l, st.b});
  }
  return r;
}

}  // namespace

Report build_report(const ExperimentSpec& spec) {
  switch (spec.command) {
    case Command::stationary: return stationary(spec);
    case Command::strong_law: return strong_law(spec);
    case Command::fluctuations: return fluctuations(spec);
    case Command::cycles: return cycles(spec);
    case Command::hitting: return hitting(spec);
    case Command::zero_noise: return zero_noise(spec);
    case Command::trace: return trace(spec);
  }
  throw std::logic_error("unhandled command");
}

int run_experiment(const ExperimentSpec& spec, std::ostream& out,
                   std::ostream& err) {
  Report report;
  try {
    report = build_report(spec);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }

  std::ofstream file;
  std::ostream* sink = &out;
  if (spec.output_path != "-") {
    file.open(spec.output_path, std::ios::out | std::ios::trunc);
    if (!file) {
      err << "error: cannot open " << spec.output_path << " for writing\n";
      return kExitFailure;
    }
    sink = &file;
  }
  if (spec.format == Format::json) {
    write_json(*sink, report);
  } else {
    write_csv(*sink, report);
  }
  sink->flush();
  if (!*sink) {
    err << "error: failed writing " << spec.output_path << '\n';
    return kExitFailure;
  }

  if (spec.check && !report.failures.empty()) {
    for (const auto& f : report.failures) err << "threshold failed: " << f << '\n';
    return kExitFailure;
  }
  return kExitOk;
}

int main_entry(const std::vector<std::string>& args, std::ostream& out,
               std::ostream& err) {
  ExperimentSpec spec;
  try {
    spec = parse_args(args);
  } catch (const HelpRequested& h) {
    out << h.what();
    return kExitOk;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\nRun with --help for usage.\n";
    return kExitUsage;
  }
  return run_experiment(spec, out, err);
}

}  // namespace inert::cli
