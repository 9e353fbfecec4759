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

#include "hawkesq/goliq.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>
#include <string>

#include "hawkesq/error.hpp"
#include "hawkesq/parallel.hpp"
#include "hawkesq/stats.hpp"

namespace hawkesq {

double GoliqConfig::cycle_length(int k) const { return a_t + c_t * std::log(static_cast<double>(k)); }

double GoliqConfig::step_size(int k) const { return c_eta / static_cast<double>(k); }

void GoliqConfig::validate(double arrival_rate) const {
  auto fail = [](const std::string& msg) { throw ConfigError(msg); };
  if (cycles < 1) fail("goliq.L must be >= 1");
  if (!(a_t > 0.0)) fail("goliq.a_T must be positive");
  if (!(c_t >= 0.0)) fail("goliq.c_T must be >= 0");
  if (!(c_eta > 0.0)) fail("goliq.c_eta must be positive");
  if (!(xi > 0.0 && xi < 1.0)) fail("goliq.xi must lie in (0, 1)");
  if (!(mu_lo < mu_hi)) fail("stability.mu_lo must be < stability.mu_hi");
  if (!(mu_init >= mu_lo && mu_init <= mu_hi)) fail("goliq.mu_init must lie in [mu_lo, mu_hi]");
  if (!(eps > 0.0)) fail("stability.eps must be positive");
  if (!(cost.h0 >= 0.0)) fail("goliq.cost.h0 must be >= 0");
  if (!(cost.c0 >= 0.0)) fail("goliq.cost.c0 must be >= 0 (convex nondecreasing cost)");
  if (!(arrival_rate < mu_lo - eps)) {
    std::ostringstream msg;
    msg << "stability condition violated: arrival rate " << arrival_rate
        << " >= mu_lo - eps = " << mu_lo - eps;
    throw Unstable(msg.str());
  }
}

double goliq_gradient(const GoliqConfig& config, double mu, double length, double int_x_window) {
  return -config.cost.h0 / ((1.0 - config.xi) * length) * int_x_window +
         config.cost.staffing_derivative(mu);
}

double project(double mu, double mu_lo, double mu_hi) { return std::min(std::max(mu, mu_lo), mu_hi); }

GoliqTrace run_goliq(const GoliqConfig& config, ArrivalSource& source, const QueueState& start) {
  GoliqTrace trace;
  trace.cycles.reserve(static_cast<std::size_t>(config.cycles));
  QueueState state = start;
  double mu = config.mu_init;
  double cum_cost = 0.0;
  double elapsed = 0.0;
  EvolveOptions options;
  options.snapshot_memory = false;
  for (int k = 1; k <= config.cycles; ++k) {
    const double length = config.cycle_length(k);
    options.window = Window{config.xi * length, length};
    const EvolveResult r = evolve(state, source, mu, length, options);
    state = r.stats.end_state;

    GoliqCycle c;
    c.k = k;
    c.mu = mu;
    c.length = length;
    c.eta = config.step_size(k);
    c.int_w = r.stats.int_w_full;
    c.int_x_window = r.stats.int_x_window;
    c.gradient = goliq_gradient(config, mu, length, c.int_x_window);
    c.cost = config.cost.staffing(mu) * length + config.cost.h0 * c.int_w;
    cum_cost += c.cost;
    elapsed += length;
    c.cum_cost = cum_cost;
    c.elapsed = elapsed;
    trace.cycles.push_back(c);

    mu = project(mu - c.eta * c.gradient, config.mu_lo, config.mu_hi);
    if (!(mu >= config.mu_lo && mu <= config.mu_hi)) {
      throw NumericalError("goliq: projected control left [mu_lo, mu_hi]");
    }
  }
  trace.next_mu = mu;
  return trace;
}

GoliqTrace run_goliq(const GoliqConfig& config, const HawkesParams& params, std::uint64_t seed) {
  config.validate(params.arrival_rate());
  HawkesStream stream(params, StreamInit::warm(config.warm_tol), seed);
  return run_goliq(config, stream, QueueState{});
}

std::vector<double> make_grid(double lo, double hi, double step) {
  if (!(step > 0.0) || !(hi >= lo)) throw ConfigError("ngs grid: need step > 0 and hi >= lo");
  std::vector<double> grid;
  const auto n = static_cast<long>(std::floor((hi - lo) / step + 0.5));
  for (long i = 0; i <= n; ++i) grid.push_back(lo + static_cast<double>(i) * step);
  return grid;
}

namespace {

std::vector<Arrival> generate_arrivals(const HawkesParams& params, double horizon,
                                       double warm_tol, std::uint64_t seed) {
  HawkesStream stream(params, StreamInit::warm(warm_tol), seed);
  return stream.next_until(horizon);
}

// Time average of W over [warm_fraction T, T] and, optionally, of X.
struct TimeAverages {
  double w = 0.0;
  double x = 0.0;
};

TimeAverages time_averages(const std::vector<Arrival>& arrivals, double mu,
                           const NgsOptions& options) {
  ReplaySource source(arrivals, 0.0);
  EvolveOptions ev;
  ev.snapshot_memory = false;
  ev.window = Window{options.warm_fraction * options.horizon, options.horizon};
  const EvolveResult r = evolve(QueueState{}, source, mu, options.horizon, ev);
  const double len = (1.0 - options.warm_fraction) * options.horizon;
  return {r.stats.int_w_window / len, r.stats.int_x_window / len};
}

void validate_ngs(const NgsOptions& options) {
  if (!(options.horizon > 0.0)) throw InvalidHorizon("ngs.T must be positive");
  if (!(options.warm_fraction >= 0.0 && options.warm_fraction < 1.0)) {
    throw ConfigError("ngs.warm_fraction must lie in [0, 1)");
  }
  if (options.replications < 1) throw ConfigError("replications must be >= 1");
}

}  // namespace

BenchmarkResult run_ngs(std::span<const double> grid, const HawkesParams& params,
                        const StaffingCost& cost, const NgsOptions& options, std::uint64_t seed) {
  validate_ngs(options);
  if (grid.empty()) throw ConfigError("ngs grid is empty");
  const double rate = params.arrival_rate();
  for (double mu : grid) {
    if (!(mu > rate)) {
      std::ostringstream msg;
      msg << "ngs grid point mu = " << mu << " is not above the arrival rate " << rate;
      throw Unstable(msg.str());
    }
  }

  const auto reps = static_cast<std::size_t>(options.replications);
  // workloads[r][g]
  std::vector<std::vector<double>> workloads(reps, std::vector<double>(grid.size()));
  parallel_for(reps, options.threads, [&](std::size_t r) {
    const auto arrivals = generate_arrivals(params, options.horizon, options.warm_tol,
                                            derive_seed(seed, r));
    for (std::size_t g = 0; g < grid.size(); ++g) {
      workloads[r][g] = time_averages(arrivals, grid[g], options).w;
    }
  });

  BenchmarkResult out;
  std::vector<double> column(reps);
  for (std::size_t g = 0; g < grid.size(); ++g) {
    for (std::size_t r = 0; r < reps; ++r) column[r] = workloads[r][g];
    const MeanEstimate w = estimate_mean(column);
    BenchmarkPoint p{grid[g], cost.objective(grid[g], w.mean), cost.h0 * w.stderr_, w.mean};
    out.grid.push_back(p);
  }
  const auto best = std::min_element(out.grid.begin(), out.grid.end(),
                                     [](const auto& a, const auto& b) { return a.f_hat < b.f_hat; });
  out.mu_star = best->mu;
  out.f_star = best->f_hat;
  out.f_star_stderr = best->stderr_;
  return out;
}

std::vector<RegretPoint> regret_curve(const GoliqTrace& trace, double f_star) {
  std::vector<RegretPoint> out;
  out.reserve(trace.cycles.size());
  double regret = 0.0;
  for (const auto& c : trace.cycles) {
    regret += c.cost - f_star * c.length;
    out.push_back({c.k, c.elapsed, regret});
  }
  return out;
}

std::vector<RegretPoint> average_regret(std::span<const std::vector<RegretPoint>> curves) {
  if (curves.empty()) return {};
  const std::size_t n = curves.front().size();
  std::vector<RegretPoint> out(curves.front().begin(), curves.front().end());
  for (std::size_t i = 0; i < n; ++i) {
    KahanSum sum;
    for (const auto& c : curves) {
      if (c.size() != n) throw ConfigError("average_regret: curves differ in length");
      sum.add(c[i].regret);
    }
    out[i].regret = sum.value() / static_cast<double>(curves.size());
  }
  return out;
}

RegretFit fit_regret(std::span<const RegretPoint> curve) {
  std::vector<double> logt, root, logr;
  for (const auto& p : curve) {
    if (p.regret > 0.0 && p.elapsed > 0.0) {
      logt.push_back(std::log(p.elapsed));
      root.push_back(std::sqrt(p.regret));
      logr.push_back(std::log(p.regret));
    }
  }
  const LinearFit a = linear_fit(logt, root);
  const LinearFit b = linear_fit(logt, logr);
  return {a.r_squared, a.slope, b.slope};
}

GradientCheck gradient_check(double mu, double delta, const HawkesParams& params,
                             const NgsOptions& options, std::uint64_t seed) {
  validate_ngs(options);
  if (!(delta > 0.0)) throw ConfigError("gradcheck.delta must be positive");
  const double rate = params.arrival_rate();
  if (!(mu - delta > rate)) {
    std::ostringstream msg;
    msg << "gradcheck: [mu - delta, mu + delta] = [" << mu - delta << ", " << mu + delta
        << "] leaves the stability region (arrival rate " << rate << ")";
    throw Unstable(msg.str());
  }
  const auto reps = static_cast<std::size_t>(options.replications);
  std::vector<double> slopes(reps), xs(reps), wm(reps), wp(reps);
  parallel_for(reps, options.threads, [&](std::size_t r) {
    const auto arrivals = generate_arrivals(params, options.horizon, options.warm_tol,
                                            derive_seed(seed, r));
    wm[r] = time_averages(arrivals, mu - delta, options).w;
    wp[r] = time_averages(arrivals, mu + delta, options).w;
    xs[r] = time_averages(arrivals, mu, options).x;
    slopes[r] = (wp[r] - wm[r]) / (2.0 * delta);
  });
  const MeanEstimate s = estimate_mean(slopes);
  const MeanEstimate x = estimate_mean(xs);
  return {s.mean, s.stderr_, x.mean, x.stderr_, estimate_mean(wm).mean, estimate_mean(wp).mean};
}

void write_trace_csv(std::ostream& out, const GoliqTrace& trace, double f_star) {
  auto num = [](double v) {
    char buf[32];
    auto r = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, r.ptr);
  };
  out << "k,mu_k,T_k,eta_k,H_k,int_W,cum_cost,elapsed,regret\n";
  const auto regret = regret_curve(trace, f_star);
  for (std::size_t i = 0; i < trace.cycles.size(); ++i) {
    const auto& c = trace.cycles[i];
    out << c.k << ',' << num(c.mu) << ',' << num(c.length) << ',' << num(c.eta) << ','
        << num(c.gradient) << ',' << num(c.int_w) << ',' << num(c.cum_cost) << ','
        << num(c.elapsed) << ',' << num(regret[i].regret) << '\n';
  }
}

}  // namespace hawkesq
