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

#ifndef HAWKESQ_GOLIQ_HPP_
#define HAWKESQ_GOLIQ_HPP_

#include <cstdint>
#include <ostream>
#include <span>
#include <vector>

#include "hawkesq/hawkes.hpp"
#include "hawkesq/queue.hpp"

namespace hawkesq {

// Staffing cost c(mu): c0 mu^2 (quadratic) or c0 mu (linear), plus the
// holding-cost rate h0 on the workload.
struct StaffingCost {
  enum class Kind { kQuadratic, kLinear };
  Kind kind = Kind::kQuadratic;
  double h0 = 0.5;
  double c0 = 0.5;

  static StaffingCost quadratic(double h0, double c0) { return {Kind::kQuadratic, h0, c0}; }
  static StaffingCost linear(double h0, double c0) { return {Kind::kLinear, h0, c0}; }

  double staffing(double mu) const { return kind == Kind::kQuadratic ? c0 * mu * mu : c0 * mu; }
  double staffing_derivative(double mu) const {
    return kind == Kind::kQuadratic ? 2.0 * c0 * mu : c0;
  }
  // f(mu) given an estimate of E[W_inf(mu)].
  double objective(double mu, double mean_workload) const {
    return h0 * mean_workload + staffing(mu);
  }
};

struct GoliqConfig {
  int cycles = 100;       // L
  double a_t = 10.0;      // T_k = a_t + c_t log k
  double c_t = 20.0;
  double c_eta = 1.0;     // eta_k = c_eta / k
  double xi = 0.5;        // warm-up fraction of each cycle
  double mu_lo = 2.5;
  double mu_hi = 10.0;
  double mu_init = 10.0;
  double eps = 0.1;       // stability margin
  StaffingCost cost;
  double warm_tol = 1e-3;  // look-back tolerance of the Hawkes warm start

  double cycle_length(int k) const;
  double step_size(int k) const;
  // Throws ConfigError / Unstable on invalid settings for `arrival_rate`.
  void validate(double arrival_rate) const;
};

struct GoliqCycle {
  int k = 0;
  double mu = 0.0;
  double length = 0.0;  // T_k
  double eta = 0.0;
  double gradient = 0.0;  // H_k
  double int_w = 0.0;
  double int_x_window = 0.0;
  double cost = 0.0;  // c(mu_k) T_k + h0 int_w
  double cum_cost = 0.0;
  double elapsed = 0.0;  // sum of T_j for j <= k
};

struct GoliqTrace {
  std::vector<GoliqCycle> cycles;
  double next_mu = 0.0;  // mu_{L+1}, the update after the last cycle

  // mu_L: control used in the last cycle.
  double final_mu() const { return cycles.empty() ? next_mu : cycles.back().mu; }
};

// H_k = -h0 / ((1 - xi) T_k) * int_{xi T_k}^{T_k} X dt + c'(mu_k).
double goliq_gradient(const GoliqConfig& config, double mu, double length, double int_x_window);
// Projection of mu onto [mu_lo, mu_hi].
double project(double mu, double mu_lo, double mu_hi);

// Runs the learning loop on a single continuous system fed by `source`,
// starting from `start` (not reset between cycles).
GoliqTrace run_goliq(const GoliqConfig& config, ArrivalSource& source,
                     const QueueState& start = {});

// Same on a warm-started Hawkes stream: empty queue at time 0 with the
// stream's Hawkes memory.
GoliqTrace run_goliq(const GoliqConfig& config, const HawkesParams& params, std::uint64_t seed);

struct BenchmarkPoint {
  double mu = 0.0;
  double f_hat = 0.0;
  double stderr_ = 0.0;
  double mean_workload = 0.0;
};

struct BenchmarkResult {
  double mu_star = 0.0;
  double f_star = 0.0;
  double f_star_stderr = 0.0;
  std::vector<BenchmarkPoint> grid;
};

struct NgsOptions {
  double horizon = 2e4;
  double warm_fraction = 0.5;  // time average over [warm_fraction T, T]
  int replications = 20;
  double warm_tol = 1e-3;
  int threads = 1;
};

// Naive grid search: per mu, average over replications of the time-average
// workload on [warm_fraction T, T]. Replication r uses the same seed at every
// grid point (common random numbers).
BenchmarkResult run_ngs(std::span<const double> grid, const HawkesParams& params,
                        const StaffingCost& cost, const NgsOptions& options, std::uint64_t seed);

// lo, lo + step, ..., up to hi (inclusive within half a step).
std::vector<double> make_grid(double lo, double hi, double step);

struct RegretPoint {
  int k = 0;
  double elapsed = 0.0;
  double regret = 0.0;
};

// Cumulative regret sum_j (c(mu_j) T_j + h0 int W_j - f_star T_j) after each cycle.
std::vector<RegretPoint> regret_curve(const GoliqTrace& trace, double f_star);

// Pointwise average of regret curves from runs with identical schedules.
std::vector<RegretPoint> average_regret(std::span<const std::vector<RegretPoint>> curves);

struct RegretFit {
  double r_squared = 0.0;   // sqrt(R) against log(elapsed)
  double slope = 0.0;
  double log_log_slope = 0.0;  // log R against log(elapsed)
};
// Fits over points with positive regret.
RegretFit fit_regret(std::span<const RegretPoint> curve);

struct GradientCheck {
  double fd_slope = 0.0;        // (w(mu + d) - w(mu - d)) / (2 d)
  double fd_stderr = 0.0;
  double x_infty = 0.0;         // time average of X at mu
  double x_stderr = 0.0;
  double w_minus = 0.0;
  double w_plus = 0.0;
};

// Finite-difference check of w'(mu) = -E[X_inf(mu)] with common random
// numbers: replication r feeds the same arrivals to mu - delta, mu, mu + delta.
GradientCheck gradient_check(double mu, double delta, const HawkesParams& params,
                             const NgsOptions& options, std::uint64_t seed);

void write_trace_csv(std::ostream& out, const GoliqTrace& trace, double f_star);

}  // namespace hawkesq

#endif  // HAWKESQ_GOLIQ_HPP_
