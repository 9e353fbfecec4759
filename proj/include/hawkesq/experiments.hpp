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

#ifndef HAWKESQ_EXPERIMENTS_HPP_
#define HAWKESQ_EXPERIMENTS_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hawkesq/goliq.hpp"
#include "hawkesq/hawkes.hpp"
#include "hawkesq/queue.hpp"
#include "hawkesq/stats.hpp"

namespace hawkesq {

// Consecutive differences of a sorted time list.
std::vector<double> interarrival_gaps(std::span<const double> times);

// Permutes the interarrival gaps (Fisher-Yates) and splices them back from
// the first arrival. Needs at least two arrivals.
std::vector<double> shuffle_to_renewal(std::span<const double> times, Rng& rng);

// Sample lag-1 autocorrelation. Needs at least 100 gaps.
double acf_lag1(std::span<const double> gaps);

// Renewal arrivals with the interarrival law of the stationary Hawkes
// process: a warm-started Hawkes path long enough to cover `horizon` is
// shuffled and given fresh i.i.d. job sizes. With m = 0 the Hawkes path
// itself (already renewal) is returned, so both sides share every draw.
std::vector<Arrival> renewal_arrivals(const HawkesParams& params, double horizon,
                                      std::uint64_t seed, double warm_tol = 1e-3);

// Total time sum_{k <= L} T_k of a GOLiQ run.
double schedule_length(const GoliqConfig& config);

struct SweepOptions {
  int replications = 20;
  int cycles = 100;
  int threads = 1;
  double warm_tol = 1e-3;
};

struct LearnedStaffing {
  double mean = 0.0;
  double variance = 0.0;  // sample variance of mu_L across replications
};

// GOLiQ on the Hawkes queue and on its shuffled renewal counterpart, with
// replication r seeded by derive_seed(seed, r) on both sides.
struct StaffingPair {
  LearnedStaffing hawkes;
  LearnedStaffing renewal;
};
StaffingPair learn_staffing_pair(const GoliqConfig& config, const HawkesParams& params,
                                 const SweepOptions& options, std::uint64_t seed);

struct SelfExcitementRow {
  double a = 0.0;
  double m = 0.0;
  double lambda0 = 0.0;
  LearnedStaffing hawkes;
  LearnedStaffing renewal;
  double relative_increase = 0.0;  // (mu_H - mu_GI) / mu_GI
};

// Kernel a e^{-2t}, lambda0 = 2 (1 - m), exponential jobs, cost
// 0.5 mu^2 + 0.5 E[W], eta_k = 3/k, T_k = 10 + 20 log k, B = [2.5, 10].
GoliqConfig self_excitement_config(int cycles);
HawkesParams self_excitement_params(double a);
std::vector<SelfExcitementRow> run_self_excitement_sweep(std::span<const double> a_values,
                                                         const SweepOptions& options,
                                                         std::uint64_t seed);

struct HeavyTrafficRow {
  int n = 0;
  double lambda = 0.0;
  double m = 0.0;
  double acf = 0.0;
  double acf_stderr = 0.0;
  LearnedStaffing hawkes;
  LearnedStaffing renewal;
  double rho_hawkes = 0.0;
  double ratio_hawkes = 0.0;  // (mu_H - lambda) / sqrt(lambda)
  double rho_renewal = 0.0;
  double ratio_renewal = 0.0;
};

// lambda0 = 1, kernel (2 - 2/n) e^{-2t}, exponential jobs, cost
// 2 mu + 0.1 E[W], eta_k = 3/k, T_k = 10 + 20 log k,
// B = [lambda + 0.1 sqrt(lambda), lambda + 8 sqrt(lambda)], mu_init = lambda + sqrt(lambda).
GoliqConfig heavy_traffic_config(int n, int cycles);
HawkesParams heavy_traffic_params(int n);

struct AcfEstimate {
  double acf = 0.0;
  double stderr_ = 0.0;  // from 20 batch estimates
};
// Lag-1 ACF of `gaps` interarrival gaps of the warm-started process.
AcfEstimate hawkes_acf(const HawkesParams& params, std::size_t gaps, std::uint64_t seed,
                       double warm_tol = 1e-3);

std::vector<HeavyTrafficRow> run_heavy_traffic_sweep(std::span<const int> n_values,
                                                     const SweepOptions& options,
                                                     std::uint64_t seed,
                                                     std::size_t acf_gaps = 1'000'000);

struct RobustnessRow {
  double c_eta = 0.0;
  double c_t = 0.0;
  double mean_mu_l = 0.0;
  double final_regret = 0.0;
  RegretFit fit;
  std::vector<RegretPoint> curve;
};

// Averaged regret curves of `base` with c_eta swept at the base c_T, then
// c_T swept at c_eta = 1.
std::vector<RobustnessRow> run_robustness_sweep(const GoliqConfig& base,
                                                const HawkesParams& params, double f_star,
                                                std::span<const double> c_eta_values,
                                                std::span<const double> c_t_values,
                                                const SweepOptions& options,
                                                std::uint64_t seed);

// Average regret curve over replications of one configuration, plus the
// mean final control.
struct RegretStudy {
  std::vector<RegretPoint> curve;
  double mean_mu_l = 0.0;
};
RegretStudy regret_study(const GoliqConfig& config, const HawkesParams& params, double f_star,
                         const SweepOptions& options, std::uint64_t seed);

// Initial condition of one side of the coupling: W(0), X(0) and whether the
// Hawkes memory is drawn from a warm start (otherwise empty).
struct CouplingInit {
  double workload = 0.0;
  double busy = 0.0;
  bool warm_memory = true;
};

struct CouplingOptions {
  double mu = 2.84;
  double horizon = 200.0;
  int replications = 100;
  int grid_points = 200;
  int threads = 1;
  double warm_tol = 1e-3;
};

struct CouplingReplication {
  double tau1 = 0.0;  // first emptying of side i at or after L0^i (inf if none)
  double tau2 = 0.0;
  double j0_1 = 0.0;
  double j0_2 = 0.0;
  bool gap_bound_holds = true;
  double gap_bound_worst = 0.0;  // max over epochs of |dW| - bound
  bool coupled = false;        // max(tau1, tau2) <= horizon
  bool identical_after = true;  // bitwise equal paths after max(tau1, tau2)
};

struct CouplingResult {
  std::vector<double> grid;
  std::vector<double> mean_abs_dw;
  std::vector<double> mean_abs_dx;
  std::vector<CouplingReplication> replications;
  LinearFit decay;  // log mean |dW| against t over points with positive mean
  int gap_bound_pass = 0;
  int identical_pass = 0;
  int coupled_count = 0;
};

// Semi-synchronous coupling: both sides share every cluster born after 0
// (same future seed) but start from their own (W, X, memory).
CouplingResult run_coupling_lab(const HawkesParams& params, const CouplingInit& init1,
                                const CouplingInit& init2, const CouplingOptions& options,
                                std::uint64_t seed);

struct MomentOptions {
  double mu = 2.84;
  double horizon = 1e4;    // H; the stability check compares [burn, H] with [burn, 2H]
  double burn_in = 1e3;
  int replications = 20;
  double eps = 0.1;        // for the E[X] <= E[W_eps] / eps check
  double sample_spacing = 1.0;
  int threads = 1;
  double warm_tol = 1e-3;
  double stability_rtol = 0.1;
};

struct MomentLine {
  int power = 0;
  double value = 0.0;          // time average over [burn, 2H], averaged over replications
  double stderr_ = 0.0;
  double value_half = 0.0;     // same over [burn, H]
  bool stable = false;
};

struct MomentReport {
  std::vector<MomentLine> workload;  // powers 1..4
  std::vector<MomentLine> busy;      // powers 1..2
  std::vector<TailPoint> workload_tail;
  std::vector<TailPoint> busy_tail;
  double pk_mean = 0.0;              // PK value when m = 0, else NaN
  double mean_w_eps = 0.0;           // E[W] at mu - eps (same arrivals)
  double busy_bound = 0.0;         // mean_w_eps / eps
  bool busy_bound_holds = false;
  bool all_stable = false;
};

MomentReport moment_suite(const HawkesParams& params, const MomentOptions& options,
                          std::uint64_t seed);

}  // namespace hawkesq

#endif  // HAWKESQ_EXPERIMENTS_HPP_
