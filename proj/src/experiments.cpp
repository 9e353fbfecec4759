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

#include "hawkesq/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "hawkesq/error.hpp"
#include "hawkesq/parallel.hpp"

namespace hawkesq {

std::vector<double> interarrival_gaps(std::span<const double> times) {
  std::vector<double> gaps;
  if (times.size() < 2) return gaps;
  gaps.reserve(times.size() - 1);
  for (std::size_t i = 1; i < times.size(); ++i) gaps.push_back(times[i] - times[i - 1]);
  return gaps;
}

std::vector<double> shuffle_to_renewal(std::span<const double> times, Rng& rng) {
  if (times.size() < 2) throw InsufficientData("shuffle_to_renewal needs at least 2 arrivals");
  std::vector<double> gaps = interarrival_gaps(times);
  for (std::size_t i = gaps.size() - 1; i > 0; --i) {
    std::swap(gaps[i], gaps[rng.below(i + 1)]);
  }
  std::vector<double> out;
  out.reserve(times.size());
  double t = times.front();
  out.push_back(t);
  for (double g : gaps) {
    t += g;
    out.push_back(t);
  }
  return out;
}

double acf_lag1(std::span<const double> gaps) {
  if (gaps.size() < 100) throw InsufficientData("acf_lag1 needs at least 100 gaps");
  const double n = static_cast<double>(gaps.size());
  KahanSum sum;
  for (double g : gaps) sum.add(g);
  const double mean = sum.value() / n;
  KahanSum num, den;
  for (std::size_t i = 0; i < gaps.size(); ++i) {
    const double d = gaps[i] - mean;
    den.add(d * d);
    if (i + 1 < gaps.size()) num.add(d * (gaps[i + 1] - mean));
  }
  return den.value() > 0.0 ? num.value() / den.value() : 0.0;
}

std::vector<Arrival> renewal_arrivals(const HawkesParams& params, double horizon,
                                      std::uint64_t seed, double warm_tol) {
  if (!(horizon > 0.0)) throw InvalidHorizon("renewal horizon must be positive");
  HawkesStream stream(params, StreamInit::warm(warm_tol), seed);
  if (params.kernel.branching_ratio() == 0.0) return stream.next_until(horizon);

  // The spliced path ends at the last Hawkes arrival, so keep extending the
  // Hawkes path until the shuffled sequence reaches the horizon.
  std::vector<Arrival> hawkes;
  double reach = 1.1 * horizon + 100.0;
  Rng shuffle_rng(derive_seed(seed, 2));
  Rng size_rng(derive_seed(seed, 3));
  for (;;) {
    stream.next_until(reach, hawkes);
    if (hawkes.size() >= 2 && hawkes.back().t >= horizon) break;
    reach *= 2.0;
  }
  std::vector<double> times(hawkes.size());
  for (std::size_t i = 0; i < hawkes.size(); ++i) times[i] = hawkes[i].t;
  const std::vector<double> shuffled = shuffle_to_renewal(times, shuffle_rng);

  std::vector<Arrival> out;
  out.reserve(shuffled.size());
  for (std::size_t i = 0; i < shuffled.size() && shuffled[i] <= horizon; ++i) {
    out.push_back({shuffled[i], params.service.sample(size_rng), static_cast<std::int64_t>(i)});
  }
  return out;
}

double schedule_length(const GoliqConfig& config) {
  KahanSum total;
  for (int k = 1; k <= config.cycles; ++k) total.add(config.cycle_length(k));
  return total.value();
}

namespace {

LearnedStaffing summarize(std::span<const double> values) {
  const MeanEstimate e = estimate_mean(values);
  return {e.mean, e.variance};
}

}  // namespace

StaffingPair learn_staffing_pair(const GoliqConfig& config, const HawkesParams& params,
                                 const SweepOptions& options, std::uint64_t seed) {
  if (options.replications < 1) throw ConfigError("replications must be >= 1");
  config.validate(params.arrival_rate());
  const auto reps = static_cast<std::size_t>(options.replications);
  const double total = schedule_length(config);
  std::vector<double> mu_h(reps), mu_gi(reps);
  parallel_for(reps, options.threads, [&](std::size_t r) {
    const std::uint64_t s = derive_seed(seed, r);
    mu_h[r] = run_goliq(config, params, s).final_mu();
    ReplaySource gi(renewal_arrivals(params, total, s, config.warm_tol), 0.0);
    mu_gi[r] = run_goliq(config, gi).final_mu();
  });
  return {summarize(mu_h), summarize(mu_gi)};
}

GoliqConfig self_excitement_config(int cycles) {
  GoliqConfig c;
  c.cycles = cycles;
  c.a_t = 10.0;
  c.c_t = 20.0;
  c.c_eta = 3.0;
  c.mu_lo = 2.5;
  c.mu_hi = 10.0;
  c.mu_init = 10.0;
  c.cost = StaffingCost::quadratic(0.5, 0.5);
  return c;
}

HawkesParams self_excitement_params(double a) {
  const double m = a / 2.0;
  return {2.0 * (1.0 - m), ExcitationKernel::exponential(a, 2.0),
          ServiceDistribution::exponential()};
}

std::vector<SelfExcitementRow> run_self_excitement_sweep(std::span<const double> a_values,
                                                         const SweepOptions& options,
                                                         std::uint64_t seed) {
  std::vector<SelfExcitementRow> rows;
  const GoliqConfig config = self_excitement_config(options.cycles);
  for (double a : a_values) {
    const HawkesParams params = self_excitement_params(a);
    const StaffingPair pair = learn_staffing_pair(config, params, options, seed);
    SelfExcitementRow row;
    row.a = a;
    row.m = params.kernel.branching_ratio();
    row.lambda0 = params.lambda0;
    row.hawkes = pair.hawkes;
    row.renewal = pair.renewal;
    row.relative_increase = (pair.hawkes.mean - pair.renewal.mean) / pair.renewal.mean;
    rows.push_back(row);
  }
  return rows;
}

GoliqConfig heavy_traffic_config(int n, int cycles) {
  if (n < 2) throw ConfigError("heavy-traffic n must be >= 2");
  const double lambda = static_cast<double>(n);
  const double root = std::sqrt(lambda);
  GoliqConfig c;
  c.cycles = cycles;
  c.a_t = 10.0;
  c.c_t = 20.0;
  c.c_eta = 3.0;
  c.mu_lo = lambda + 0.1 * root;
  c.mu_hi = lambda + 8.0 * root;
  c.mu_init = lambda + root;
  c.eps = 0.05 * root;
  c.cost = StaffingCost::linear(0.1, 2.0);
  return c;
}

HawkesParams heavy_traffic_params(int n) {
  if (n < 2) throw ConfigError("heavy-traffic n must be >= 2");
  return {1.0, ExcitationKernel::exponential(2.0 - 2.0 / n, 2.0),
          ServiceDistribution::exponential()};
}

AcfEstimate hawkes_acf(const HawkesParams& params, std::size_t gaps, std::uint64_t seed,
                       double warm_tol) {
  constexpr std::size_t kBatches = 20;
  if (gaps < 100 * kBatches) throw InsufficientData("hawkes_acf needs at least 2000 gaps");
  HawkesStream stream(params, StreamInit::warm(warm_tol), seed);
  std::vector<Arrival> arrivals;
  const double chunk = static_cast<double>(gaps) / params.arrival_rate() * 0.25 + 1.0;
  double reach = 0.0;
  while (arrivals.size() < gaps + 1) {
    reach += chunk;
    stream.next_until(reach, arrivals);
  }
  std::vector<double> g(gaps);
  for (std::size_t i = 0; i < gaps; ++i) g[i] = arrivals[i + 1].t - arrivals[i].t;

  AcfEstimate out;
  out.acf = acf_lag1(g);
  const std::size_t per = gaps / kBatches;
  std::vector<double> batch(kBatches);
  for (std::size_t b = 0; b < kBatches; ++b) {
    batch[b] = acf_lag1(std::span<const double>(g).subspan(b * per, per));
  }
  out.stderr_ = estimate_mean(batch).stderr_;
  return out;
}

std::vector<HeavyTrafficRow> run_heavy_traffic_sweep(std::span<const int> n_values,
                                                     const SweepOptions& options,
                                                     std::uint64_t seed,
                                                     std::size_t acf_gaps) {
  std::vector<HeavyTrafficRow> rows;
  for (int n : n_values) {
    const HawkesParams params = heavy_traffic_params(n);
    const GoliqConfig config = heavy_traffic_config(n, options.cycles);
    HeavyTrafficRow row;
    row.n = n;
    row.lambda = params.arrival_rate();
    row.m = params.kernel.branching_ratio();
    const AcfEstimate acf = hawkes_acf(params, acf_gaps, derive_seed(seed, 1'000'000), options.warm_tol);
    row.acf = acf.acf;
    row.acf_stderr = acf.stderr_;
    const StaffingPair pair = learn_staffing_pair(config, params, options, seed);
    row.hawkes = pair.hawkes;
    row.renewal = pair.renewal;
    const double root = std::sqrt(row.lambda);
    row.rho_hawkes = row.lambda / row.hawkes.mean;
    row.ratio_hawkes = (row.hawkes.mean - row.lambda) / root;
    row.rho_renewal = row.lambda / row.renewal.mean;
    row.ratio_renewal = (row.renewal.mean - row.lambda) / root;
    rows.push_back(row);
  }
  return rows;
}

RegretStudy regret_study(const GoliqConfig& config, const HawkesParams& params, double f_star,
                         const SweepOptions& options, std::uint64_t seed) {
  if (options.replications < 1) throw ConfigError("replications must be >= 1");
  config.validate(params.arrival_rate());
  const auto reps = static_cast<std::size_t>(options.replications);
  std::vector<std::vector<RegretPoint>> curves(reps);
  std::vector<double> mu_l(reps);
  parallel_for(reps, options.threads, [&](std::size_t r) {
    const GoliqTrace trace = run_goliq(config, params, derive_seed(seed, r));
    curves[r] = regret_curve(trace, f_star);
    mu_l[r] = trace.final_mu();
  });
  return {average_regret(curves), estimate_mean(mu_l).mean};
}

std::vector<RobustnessRow> run_robustness_sweep(const GoliqConfig& base,
                                                const HawkesParams& params, double f_star,
                                                std::span<const double> c_eta_values,
                                                std::span<const double> c_t_values,
                                                const SweepOptions& options,
                                                std::uint64_t seed) {
  std::vector<RobustnessRow> rows;
  auto run = [&](GoliqConfig config) {
    config.cycles = options.cycles;
    const RegretStudy study = regret_study(config, params, f_star, options, seed);
    RobustnessRow row;
    row.c_eta = config.c_eta;
    row.c_t = config.c_t;
    row.mean_mu_l = study.mean_mu_l;
    row.final_regret = study.curve.empty() ? 0.0 : study.curve.back().regret;
    row.fit = fit_regret(study.curve);
    row.curve = study.curve;
    rows.push_back(std::move(row));
  };
  for (double c_eta : c_eta_values) {
    GoliqConfig c = base;
    c.c_eta = c_eta;
    run(c);
  }
  for (double c_t : c_t_values) {
    GoliqConfig c = base;
    c.c_eta = 1.0;
    c.c_t = c_t;
    run(c);
  }
  return rows;
}

namespace {

// First emptying at or after `from`; 0-workload at `from` itself counts.
double first_zero_after(const QueuePath& path, double from) {
  if (from <= path.t_end && workload_at(path, from) == 0.0) return from;
  for (const Segment& s : path.segments) {
    if (s.start == SegmentStart::kEmptied && s.t_start >= from) return s.t_start;
  }
  return std::numeric_limits<double>::infinity();
}

bool same_segment(const Segment& a, const Segment& b) {
  return a.t_start == b.t_start && a.t_end == b.t_end && a.w_start == b.w_start &&
         a.x_start == b.x_start && a.slope == b.slope;
}

// Segments starting strictly after `t`.
std::span<const Segment> segments_after(const QueuePath& path, double t) {
  const auto& segs = path.segments;
  auto it = std::upper_bound(segs.begin(), segs.end(), t,
                             [](double v, const Segment& s) { return v < s.t_start; });
  return {segs.data() + (it - segs.begin()), static_cast<std::size_t>(segs.end() - it)};
}

}  // namespace

CouplingResult run_coupling_lab(const HawkesParams& params, const CouplingInit& init1,
                                const CouplingInit& init2, const CouplingOptions& options,
                                std::uint64_t seed) {
  if (!(options.horizon > 0.0)) throw InvalidHorizon("coupling horizon must be positive");
  if (options.replications < 1) throw ConfigError("replications must be >= 1");
  if (options.grid_points < 2) throw ConfigError("coupling grid needs at least 2 points");
  if (!(params.arrival_rate() < options.mu)) {
    throw Unstable("coupling: arrival rate must be below mu");
  }
  const auto reps = static_cast<std::size_t>(options.replications);
  const auto points = static_cast<std::size_t>(options.grid_points);

  CouplingResult result;
  result.grid.resize(points);
  for (std::size_t j = 0; j < points; ++j) {
    result.grid[j] = options.horizon * static_cast<double>(j) / static_cast<double>(points - 1);
  }
  std::vector<std::vector<double>> dw(reps, std::vector<double>(points));
  std::vector<std::vector<double>> dx(reps, std::vector<double>(points));
  result.replications.resize(reps);

  parallel_for(reps, options.threads, [&](std::size_t r) {
    const std::uint64_t future = derive_seed(seed, r);
    auto make_memory = [&](const CouplingInit& init, std::uint64_t side) {
      if (!init.warm_memory) return HawkesMemory{};
      HawkesStream warm(params, StreamInit::warm(options.warm_tol), derive_seed(future, side));
      return warm.memory();
    };
    const HawkesMemory mem1 = make_memory(init1, 11);
    const HawkesMemory mem2 = make_memory(init2, 12);
    HawkesStream s1(params, mem1, future);
    HawkesStream s2(params, mem2, future);
    EvolveOptions ev;
    ev.record_segments = true;
    ev.snapshot_memory = false;
    const QueueState q1 = QueueState::at(0.0, init1.workload, init1.busy);
    const QueueState q2 = QueueState::at(0.0, init2.workload, init2.busy);
    const QueuePath p1 = evolve(q1, s1, options.mu, options.horizon, ev).path;
    const QueuePath p2 = evolve(q2, s2, options.mu, options.horizon, ev).path;

    CouplingReplication& rep = result.replications[r];
    rep.j0_1 = mem1.residual_jobs();
    rep.j0_2 = mem2.residual_jobs();
    const double bound = std::abs(q1.workload - q2.workload) + std::max(rep.j0_1, rep.j0_2);
    auto check = [&](double t) {
      const double d = std::abs(workload_at(p1, t) - workload_at(p2, t));
      const double dl = std::abs(workload_before(p1, t) - workload_before(p2, t));
      const double excess = std::max(d, dl) - bound;
      rep.gap_bound_worst = std::max(rep.gap_bound_worst, excess);
      if (excess > 1e-9 * std::max(1.0, bound)) rep.gap_bound_holds = false;
    };
    rep.gap_bound_worst = -std::numeric_limits<double>::infinity();
    for (const Segment& s : p1.segments) check(s.t_start);
    for (const Segment& s : p2.segments) check(s.t_start);
    for (double t : result.grid) check(t);

    rep.tau1 = first_zero_after(p1, mem1.residual_life());
    rep.tau2 = first_zero_after(p2, mem2.residual_life());
    const double tau = std::max(rep.tau1, rep.tau2);
    rep.coupled = tau <= options.horizon;
    if (rep.coupled) {
      const auto a = segments_after(p1, tau);
      const auto b = segments_after(p2, tau);
      rep.identical_after =
          a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), same_segment);
      for (double t : result.grid) {
        if (t < tau) continue;
        if (workload_at(p1, t) != workload_at(p2, t) || busy_at(p1, t) != busy_at(p2, t)) {
          rep.identical_after = false;
        }
      }
    }
    for (std::size_t j = 0; j < points; ++j) {
      const double t = result.grid[j];
      dw[r][j] = std::abs(workload_at(p1, t) - workload_at(p2, t));
      dx[r][j] = std::abs(busy_at(p1, t) - busy_at(p2, t));
    }
  });

  result.mean_abs_dw.resize(points);
  result.mean_abs_dx.resize(points);
  for (std::size_t j = 0; j < points; ++j) {
    KahanSum sw, sx;
    for (std::size_t r = 0; r < reps; ++r) {
      sw.add(dw[r][j]);
      sx.add(dx[r][j]);
    }
    result.mean_abs_dw[j] = sw.value() / static_cast<double>(reps);
    result.mean_abs_dx[j] = sx.value() / static_cast<double>(reps);
  }
  for (const auto& rep : result.replications) {
    result.gap_bound_pass += rep.gap_bound_holds ? 1 : 0;
    result.coupled_count += rep.coupled ? 1 : 0;
    result.identical_pass += (rep.coupled && rep.identical_after) ? 1 : 0;
  }
  std::vector<double> xs, ys;
  for (std::size_t j = 0; j < points; ++j) {
    if (result.mean_abs_dw[j] > 0.0) {
      xs.push_back(result.grid[j]);
      ys.push_back(std::log(result.mean_abs_dw[j]));
    }
  }
  if (xs.size() >= 3) result.decay = linear_fit(xs, ys);
  return result;
}

MomentReport moment_suite(const HawkesParams& params, const MomentOptions& options,
                          std::uint64_t seed) {
  const double rate = params.arrival_rate();
  if (!(options.horizon > options.burn_in) || !(options.burn_in >= 0.0)) {
    throw InvalidHorizon("moments: need 0 <= burn_in < horizon");
  }
  if (options.replications < 1) throw ConfigError("replications must be >= 1");
  if (!(rate < options.mu - options.eps)) {
    std::ostringstream msg;
    msg << "moments: arrival rate " << rate << " must be below mu - eps = "
        << options.mu - options.eps;
    throw Unstable(msg.str());
  }
  const auto reps = static_cast<std::size_t>(options.replications);
  const double h = options.horizon;
  const double len_half = h - options.burn_in;
  const double len_full = 2.0 * h - options.burn_in;

  struct Rep {
    std::array<double, kMaxPower + 1> w_half{}, w_full{}, x_half{}, x_full{};
    double w_eps = 0.0;
    std::vector<double> w_samples, x_samples;
  };
  std::vector<Rep> out(reps);

  parallel_for(reps, options.threads, [&](std::size_t r) {
    HawkesStream stream(params, StreamInit::warm(options.warm_tol), derive_seed(seed, r));
    const std::vector<Arrival> arrivals = stream.next_until(2.0 * h);
    Rep& rep = out[r];

    ReplaySource src(arrivals, 0.0);
    EvolveOptions first;
    first.record_segments = true;
    first.snapshot_memory = false;
    first.window = Window{options.burn_in, h};
    const EvolveResult a = evolve(QueueState{}, src, options.mu, h, first);
    EvolveOptions second = first;
    second.window = Window{0.0, h};
    const EvolveResult b = evolve(a.stats.end_state, src, options.mu, h, second);
    for (int p = 1; p <= kMaxPower; ++p) {
      rep.w_half[p] = a.stats.w_power_window[p] / len_half;
      rep.x_half[p] = a.stats.x_power_window[p] / len_half;
      rep.w_full[p] = (a.stats.w_power_window[p] + b.stats.w_power_window[p]) / len_full;
      rep.x_full[p] = (a.stats.x_power_window[p] + b.stats.x_power_window[p]) / len_full;
    }
    for (double t = options.burn_in; t < 2.0 * h; t += options.sample_spacing) {
      const QueuePath& path = t <= h ? a.path : b.path;
      rep.w_samples.push_back(workload_at(path, t));
      rep.x_samples.push_back(busy_at(path, t));
    }

    ReplaySource eps_src(arrivals, 0.0);
    EvolveOptions ev;
    ev.snapshot_memory = false;
    ev.window = Window{options.burn_in, 2.0 * h};
    const EvolveResult c = evolve(QueueState{}, eps_src, options.mu - options.eps, 2.0 * h, ev);
    rep.w_eps = c.stats.int_w_window / len_full;
  });

  MomentReport report;
  auto line = [&](int p, bool workload) {
    std::vector<double> full(reps), half(reps);
    for (std::size_t r = 0; r < reps; ++r) {
      full[r] = workload ? out[r].w_full[p] : out[r].x_full[p];
      half[r] = workload ? out[r].w_half[p] : out[r].x_half[p];
    }
    const MeanEstimate f = estimate_mean(full);
    const MeanEstimate hh = estimate_mean(half);
    MomentLine l;
    l.power = p;
    l.value = f.mean;
    l.stderr_ = f.stderr_;
    l.value_half = hh.mean;
    const double diff = std::abs(f.mean - hh.mean);
    const double noise = 3.0 * std::hypot(f.stderr_, hh.stderr_);
    l.stable = diff <= std::max(noise, options.stability_rtol * std::abs(f.mean));
    return l;
  };
  for (int p = 1; p <= 4; ++p) report.workload.push_back(line(p, true));
  for (int p = 1; p <= 2; ++p) report.busy.push_back(line(p, false));

  std::vector<double> ws, xs, weps(reps);
  for (std::size_t r = 0; r < reps; ++r) {
    ws.insert(ws.end(), out[r].w_samples.begin(), out[r].w_samples.end());
    xs.insert(xs.end(), out[r].x_samples.begin(), out[r].x_samples.end());
    weps[r] = out[r].w_eps;
  }
  if (ws.size() >= 10'000) {
    report.workload_tail = tail_profile(ws);
    report.busy_tail = tail_profile(xs);
  }
  const double m = params.kernel.branching_ratio();
  report.pk_mean = m == 0.0
                       ? params.lambda0 * params.service.second_moment() /
                             (2.0 * (options.mu - params.lambda0))
                       : std::numeric_limits<double>::quiet_NaN();
  report.mean_w_eps = estimate_mean(weps).mean;
  report.busy_bound = report.mean_w_eps / options.eps;
  report.busy_bound_holds = report.busy.front().value <= report.busy_bound;
  report.all_stable = std::all_of(report.workload.begin(), report.workload.end(),
                                  [](const MomentLine& l) { return l.stable; }) &&
                      std::all_of(report.busy.begin(), report.busy.end(),
                                  [](const MomentLine& l) { return l.stable; });
  return report;
}

}  // namespace hawkesq
