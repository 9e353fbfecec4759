// Copyright 2026 The hawkesq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// hawkesq command-line driver.

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "hawkesq/config.hpp"
#include "hawkesq/constants.hpp"
#include "hawkesq/error.hpp"
#include "hawkesq/experiments.hpp"
#include "hawkesq/goliq.hpp"
#include "hawkesq/queue.hpp"

namespace {

using hawkesq::RunConfig;
using nlohmann::json;

std::string num(double v) {
  char buf[32];
  auto r = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, r.ptr);
}

// Joins values into one CSV row.
template <typename... Ts>
std::string row(const Ts&... values) {
  std::ostringstream out;
  bool first = true;
  auto put = [&](const auto& v) {
    if (!first) out << ',';
    first = false;
    using V = std::decay_t<decltype(v)>;
    if constexpr (std::is_floating_point_v<V>) {
      out << num(v);
    } else {
      out << v;
    }
  };
  (put(values), ...);
  return out.str();
}

class Output {
 public:
  Output(std::string command, const RunConfig& config)
      : command_(std::move(command)), dir_(config.output_dir), resolved_(config.to_json()) {
    // Thread count and output location do not affect results; leaving them
    // out keeps files byte-identical across both.
    resolved_.erase("threads");
    resolved_.erase("output_dir");
    run_id_ = hawkesq::config_hash(resolved_);
    seed_ = config.seed;
    std::filesystem::create_directories(dir_);
  }

  std::ofstream csv(const std::string& name, const std::string& header) const {
    std::ofstream out(dir_ / name, std::ios::binary);
    if (!out) throw hawkesq::ConfigError("cannot write " + (dir_ / name).string());
    out << "# hawkesq " << command_ << '\n';
    out << "# config: " << resolved_.dump() << '\n';
    out << "# seed: " << seed_ << '\n';
    out << "# run_id: " << run_id_ << '\n';
    out << header << '\n';
    return out;
  }

  void summary(const json& result) const {
    json doc;
    doc["command"] = command_;
    doc["run_id"] = run_id_;
    doc["seed"] = seed_;
    doc["config"] = resolved_;
    doc["result"] = result;
    std::ofstream out(dir_ / (file_stem() + ".json"), std::ios::binary);
    out << doc.dump(2) << '\n';
    std::cout << result.dump(2) << '\n';
  }

  std::string file_stem() const {
    std::string s = command_;
    for (char& c : s) {
      if (c == '-') c = '_';
    }
    return s;
  }

 private:
  std::string command_;
  std::filesystem::path dir_;
  json resolved_;
  std::string run_id_;
  std::uint64_t seed_ = 0;
};

json staffing_json(const hawkesq::LearnedStaffing& s) {
  return {{"mean", s.mean}, {"variance", s.variance}};
}

// Regret benchmark: configured value or a fresh NGS run.
std::pair<double, json> benchmark(const RunConfig& c) {
  if (c.f_star) return {*c.f_star, {{"source", "config"}, {"f_star", *c.f_star}}};
  const auto grid = hawkesq::make_grid(c.ngs.grid_lo, c.ngs.grid_hi, c.ngs.grid_step);
  const auto b = hawkesq::run_ngs(grid, c.hawkes_params(), c.goliq.cost, c.ngs_options(),
                                  hawkesq::derive_seed(c.seed, 0xbe7c4));
  return {b.f_star,
          {{"source", "ngs"}, {"mu_star", b.mu_star}, {"f_star", b.f_star},
           {"f_star_stderr", b.f_star_stderr}}};
}

void cmd_simulate(const RunConfig& c, bool dump_path) {
  using namespace hawkesq;
  const HawkesParams params = c.hawkes_params();
  const SimulateSpec& s = c.simulate;
  if (!(params.arrival_rate() < s.mu)) {
    throw Unstable("simulate.mu must exceed the arrival rate lambda0 / (1 - m)");
  }
  Output out("simulate", c);
  auto csv = out.csv("simulate.csv", "rep,arrivals,rate,mean_W,mean_X,idle_fraction,W_end,J0_end,L0_end");
  std::vector<double> mean_w;
  for (int r = 0; r < c.replications; ++r) {
    HawkesStream stream(params, s.warm ? StreamInit::warm(c.warm_tol) : StreamInit::empty(),
                        derive_seed(c.seed, static_cast<std::uint64_t>(r)));
    EvolveOptions ev;
    ev.record_segments = dump_path && r == 0;
    const EvolveResult res = evolve(QueueState::at(0.0, s.w0, s.x0), stream, s.mu, s.horizon, ev);
    const double w = res.path.int_w / s.horizon;
    mean_w.push_back(w);
    csv << row(r, res.path.arrivals, static_cast<double>(res.path.arrivals) / s.horizon, w,
               res.path.int_x / s.horizon, res.path.idle_l / (s.mu * s.horizon),
               res.stats.end_state.workload, res.stats.end_memory.residual_jobs(),
               res.stats.end_memory.residual_life())
        << '\n';
    if (ev.record_segments) {
      auto path = out.csv("path.csv", "# replication 0");
      write_path_csv(path, res.path);
    }
  }
  const MeanEstimate e = estimate_mean(mean_w);
  json result = {{"mean_W", e.mean}, {"mean_W_stderr", e.stderr_},
                 {"arrival_rate_theory", params.arrival_rate()}};
  if (params.kernel.branching_ratio() == 0.0) {
    result["pk_mean_W"] =
        params.lambda0 * params.service.second_moment() / (2.0 * (s.mu - params.lambda0));
  }
  out.summary(result);
}

void cmd_ngs(const RunConfig& c) {
  using namespace hawkesq;
  Output out("ngs", c);
  const auto grid = make_grid(c.ngs.grid_lo, c.ngs.grid_hi, c.ngs.grid_step);
  const BenchmarkResult b = run_ngs(grid, c.hawkes_params(), c.goliq.cost, c.ngs_options(), c.seed);
  auto csv = out.csv("ngs.csv", "mu,f_hat,stderr,mean_W");
  for (const auto& p : b.grid) csv << row(p.mu, p.f_hat, p.stderr_, p.mean_workload) << '\n';
  out.summary({{"mu_star", b.mu_star}, {"f_star", b.f_star}, {"f_star_stderr", b.f_star_stderr}});
}

void cmd_goliq(const RunConfig& c) {
  using namespace hawkesq;
  Output out("goliq", c);
  const auto [f_star, bench] = benchmark(c);
  const GoliqConfig config = c.goliq_config();
  const HawkesParams params = c.hawkes_params();
  const SweepOptions options = c.sweep_options();
  const RegretStudy study = regret_study(config, params, f_star, options, c.seed);
  const GoliqTrace first = run_goliq(config, params, derive_seed(c.seed, 0));
  {
    auto trace = out.csv("goliq.csv", "# replication 0");
    write_trace_csv(trace, first, f_star);
  }
  auto csv = out.csv("goliq_regret.csv", "k,elapsed,regret");
  for (const auto& p : study.curve) csv << row(p.k, p.elapsed, p.regret) << '\n';
  const RegretFit fit = fit_regret(study.curve);
  out.summary({{"mean_mu_L", study.mean_mu_l},
               {"benchmark", bench},
               {"final_regret", study.curve.empty() ? 0.0 : study.curve.back().regret},
               {"sqrt_regret_vs_log_t", {{"r_squared", fit.r_squared}, {"slope", fit.slope}}},
               {"log_log_slope", fit.log_log_slope}});
}

void cmd_sweep_m(const RunConfig& c) {
  using namespace hawkesq;
  Output out("sweep-m", c);
  const auto rows = run_self_excitement_sweep(c.sweep.a_values, c.sweep_options(), c.seed);
  auto csv = out.csv("sweep_m.csv", "m,a,lambda0,mu_H,var_H,mu_GI,var_GI,relative_increase");
  json table = json::array();
  for (const auto& r : rows) {
    csv << row(r.m, r.a, r.lambda0, r.hawkes.mean, r.hawkes.variance, r.renewal.mean,
               r.renewal.variance, r.relative_increase)
        << '\n';
    table.push_back({{"m", r.m}, {"hawkes", staffing_json(r.hawkes)},
                     {"renewal", staffing_json(r.renewal)},
                     {"relative_increase", r.relative_increase}});
  }
  out.summary({{"rows", table}});
}

void cmd_heavy_traffic(const RunConfig& c, bool full) {
  using namespace hawkesq;
  Output out("heavy-traffic", c);
  SweepOptions options = c.sweep_options();
  options.cycles = c.sweep.heavy_traffic_cycles;
  const auto& ns = full ? c.sweep.n_values_full : c.sweep.n_values;
  const auto rows = run_heavy_traffic_sweep(ns, options, c.seed, c.sweep.acf_gaps);
  auto csv = out.csv("heavy_traffic.csv",
                     "lambda,m,acf,acf_stderr,mu_H,rho_H,ratio_H,mu_GI,rho_GI,ratio_GI");
  json table = json::array();
  for (const auto& r : rows) {
    csv << row(r.lambda, r.m, r.acf, r.acf_stderr, r.hawkes.mean, r.rho_hawkes, r.ratio_hawkes,
               r.renewal.mean, r.rho_renewal, r.ratio_renewal)
        << '\n';
    table.push_back({{"lambda", r.lambda}, {"m", r.m}, {"acf", r.acf},
                     {"hawkes", staffing_json(r.hawkes)}, {"ratio_H", r.ratio_hawkes},
                     {"renewal", staffing_json(r.renewal)}, {"ratio_GI", r.ratio_renewal}});
  }
  out.summary({{"rows", table}});
}

void cmd_robustness(const RunConfig& c) {
  using namespace hawkesq;
  Output out("robustness", c);
  const auto [f_star, bench] = benchmark(c);
  const auto rows = run_robustness_sweep(c.goliq_config(), c.hawkes_params(), f_star,
                                         c.sweep.c_eta_values, c.sweep.c_t_values,
                                         c.sweep_options(), c.seed);
  auto csv = out.csv("robustness.csv", "c_eta,c_T,mean_mu_L,final_regret,r_squared,slope,log_log_slope");
  auto curves = out.csv("robustness_curves.csv", "c_eta,c_T,k,elapsed,regret");
  json table = json::array();
  for (const auto& r : rows) {
    csv << row(r.c_eta, r.c_t, r.mean_mu_l, r.final_regret, r.fit.r_squared, r.fit.slope,
               r.fit.log_log_slope)
        << '\n';
    for (const auto& p : r.curve) curves << row(r.c_eta, r.c_t, p.k, p.elapsed, p.regret) << '\n';
    table.push_back({{"c_eta", r.c_eta}, {"c_T", r.c_t}, {"r_squared", r.fit.r_squared},
                     {"mean_mu_L", r.mean_mu_l}});
  }
  out.summary({{"benchmark", bench}, {"rows", table}});
}

void cmd_coupling(const RunConfig& c, std::optional<int> reps) {
  using namespace hawkesq;
  Output out("coupling", c);
  CouplingOptions o;
  o.mu = c.coupling.mu;
  o.horizon = c.coupling.horizon;
  o.grid_points = c.coupling.grid_points;
  o.replications = reps.value_or(100);
  o.threads = c.threads;
  o.warm_tol = c.warm_tol;
  const CouplingResult r =
      run_coupling_lab(c.hawkes_params(), c.coupling.init1, c.coupling.init2, o, c.seed);
  auto csv = out.csv("coupling.csv", "t,mean_abs_dW,mean_abs_dX");
  for (std::size_t j = 0; j < r.grid.size(); ++j) {
    csv << row(r.grid[j], r.mean_abs_dw[j], r.mean_abs_dx[j]) << '\n';
  }
  auto reps_csv = out.csv("coupling_reps.csv", "rep,tau1,tau2,J0_1,J0_2,gap_bound,coupled,identical_after");
  for (std::size_t i = 0; i < r.replications.size(); ++i) {
    const auto& x = r.replications[i];
    reps_csv << row(i, x.tau1, x.tau2, x.j0_1, x.j0_2, int(x.gap_bound_holds), int(x.coupled),
                    int(x.identical_after))
             << '\n';
  }
  json theory = nullptr;
  try {
    const ConstantsBundle b = solve_constants(c.constants_inputs());
    theory = b.eta * o.mu;
  } catch (const Error&) {
  }
  out.summary({{"replications", o.replications},
               {"gap_bound_pass", r.gap_bound_pass},
               {"coupled", r.coupled_count},
               {"identical_after_coupling", r.identical_pass},
               {"decay_slope", r.decay.slope},
               {"decay_slope_p_value", r.decay.slope_p_value},
               {"theory_rate_eta_mu", theory}});
}

void cmd_moments(const RunConfig& c) {
  using namespace hawkesq;
  Output out("moments", c);
  MomentOptions o;
  o.mu = c.moments.mu;
  o.horizon = c.moments.horizon;
  o.burn_in = c.moments.burn_in;
  o.eps = c.moments.eps;
  o.sample_spacing = c.moments.sample_spacing;
  o.replications = c.replications;
  o.threads = c.threads;
  o.warm_tol = c.warm_tol;
  const MomentReport r = moment_suite(c.hawkes_params(), o, c.seed);
  auto csv = out.csv("moments.csv", "quantity,power,value,stderr,value_half_horizon,stable");
  for (const auto& l : r.workload) csv << row("W", l.power, l.value, l.stderr_, l.value_half, int(l.stable)) << '\n';
  for (const auto& l : r.busy) csv << row("X", l.power, l.value, l.stderr_, l.value_half, int(l.stable)) << '\n';
  auto tail = out.csv("moments_tail.csv", "quantity,x,log_survival");
  for (const auto& p : r.workload_tail) tail << row("W", p.x, p.log_survival) << '\n';
  for (const auto& p : r.busy_tail) tail << row("X", p.x, p.log_survival) << '\n';
  out.summary({{"mean_W", r.workload.front().value},
               {"mean_X", r.busy.front().value},
               {"pk_mean_W", std::isnan(r.pk_mean) ? json(nullptr) : json(r.pk_mean)},
               {"mean_W_at_mu_minus_eps", r.mean_w_eps},
               {"busy_bound_W_eps_over_eps", r.busy_bound},
               {"busy_bound_holds", r.busy_bound_holds},
               {"all_moments_stable", r.all_stable}});
}

void cmd_constants(const RunConfig& c) {
  using namespace hawkesq;
  Output out("constants", c);
  const ConstantsBundle b = solve_constants(c.constants_inputs());
  out.summary(to_json(b));
}

void cmd_gradcheck(const RunConfig& c) {
  using namespace hawkesq;
  Output out("gradcheck", c);
  NgsOptions o = c.ngs_options();
  o.horizon = c.gradcheck.horizon;
  const GradientCheck g = gradient_check(c.gradcheck.mu, c.gradcheck.delta, c.hawkes_params(), o, c.seed);
  auto csv = out.csv("gradcheck.csv", "mu,delta,fd_slope,fd_stderr,x_infty,x_stderr,w_minus,w_plus");
  csv << row(c.gradcheck.mu, c.gradcheck.delta, g.fd_slope, g.fd_stderr, g.x_infty, g.x_stderr,
             g.w_minus, g.w_plus)
      << '\n';
  out.summary({{"fd_slope", g.fd_slope},
               {"fd_stderr", g.fd_stderr},
               {"x_infty", g.x_infty},
               {"x_stderr", g.x_stderr},
               {"relative_gap", std::abs(g.fd_slope + g.x_infty) / g.x_infty}});
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hawkes/GI/1 simulation, GOLiQ-Hawkes staffing and verification suites"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> reps;
  std::optional<int> threads;
  std::optional<std::string> out_dir;
  std::optional<double> horizon;
  bool full = false;
  bool dump_path = false;
  app.add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);
  app.add_option("--seed", seed, "master seed (u64)");
  app.add_option("--reps", reps, "replications");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--threads", threads, "worker threads");
  app.add_option("--horizon", horizon, "horizon of the selected command");
  app.add_flag("--full", full, "heavy-traffic: run every n value");
  app.add_flag("--dump-path", dump_path, "simulate: write path.csv for replication 0");

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"simulate", "simulate the Hawkes/GI/1 queue and report path statistics"},
      {"ngs", "naive grid search benchmark"},
      {"goliq", "GOLiQ-Hawkes runs with regret against the benchmark"},
      {"sweep-m", "self-excitement sweep, Hawkes vs shuffled renewal arrivals"},
      {"heavy-traffic", "square-root staffing study"},
      {"robustness", "GOLiQ hyperparameter robustness"},
      {"coupling", "semi-synchronous coupling laboratory"},
      {"moments", "moment, tail and busy-period bound suite"},
      {"constants", "light-tail / ergodicity constants as JSON"},
      {"gradcheck", "finite-difference check of w'(mu) = -E[X]"},
  };
  for (const auto& [name, help] : commands) app.add_subcommand(name, help)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    RunConfig c = config_path.empty() ? RunConfig{} : hawkesq::load_config(config_path);
    if (seed) c.seed = *seed;
    if (reps) c.replications = *reps;
    if (threads) c.threads = *threads;
    if (out_dir) c.output_dir = *out_dir;
    if (horizon) {
      if (command == "simulate") c.simulate.horizon = *horizon;
      else if (command == "ngs") c.ngs.horizon = *horizon;
      else if (command == "coupling") c.coupling.horizon = *horizon;
      else if (command == "moments") c.moments.horizon = *horizon;
      else if (command == "gradcheck") c.gradcheck.horizon = *horizon;
      else throw hawkesq::ConfigError("--horizon does not apply to " + command);
    }
    c.validate();

    if (command == "simulate") cmd_simulate(c, dump_path);
    else if (command == "ngs") cmd_ngs(c);
    else if (command == "goliq") cmd_goliq(c);
    else if (command == "sweep-m") cmd_sweep_m(c);
    else if (command == "heavy-traffic") cmd_heavy_traffic(c, full);
    else if (command == "robustness") cmd_robustness(c);
    else if (command == "coupling") cmd_coupling(c, reps);
    else if (command == "moments") cmd_moments(c);
    else if (command == "constants") cmd_constants(c);
    else if (command == "gradcheck") cmd_gradcheck(c);
  } catch (const hawkesq::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const hawkesq::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
