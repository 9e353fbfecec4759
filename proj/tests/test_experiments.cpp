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

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "doctest.h"
#include "hawkesq/constants.hpp"
#include "hawkesq/error.hpp"
#include "hawkesq/experiments.hpp"

using namespace hawkesq;

namespace {

HawkesParams hawkes_params() {
  return {1.0, ExcitationKernel::gamma_shape2(2.0, 2.0), ServiceDistribution::erlang(2)};
}

}  // namespace

TEST_CASE("shuffle keeps the gap multiset and the first arrival") {
  const std::vector<double> times = {1.0, 1.5, 3.0, 3.25, 7.0};
  Rng rng(1);
  const auto out = shuffle_to_renewal(times, rng);
  REQUIRE(out.size() == times.size());
  CHECK(out.front() == 1.0);
  CHECK(std::is_sorted(out.begin(), out.end()));
  auto g1 = interarrival_gaps(times), g2 = interarrival_gaps(out);
  std::sort(g1.begin(), g1.end());
  std::sort(g2.begin(), g2.end());
  for (std::size_t i = 0; i < g1.size(); ++i) CHECK(g2[i] == doctest::Approx(g1[i]));
  CHECK(out.back() == doctest::Approx(7.0));

  Rng a(9), b(9);
  CHECK(shuffle_to_renewal(times, a) == shuffle_to_renewal(times, b));
  const std::vector<double> one = {2.0};
  CHECK_THROWS_AS(shuffle_to_renewal(one, rng), InsufficientData);
}

TEST_CASE("lag-1 autocorrelation") {
  Rng rng(2);
  std::vector<double> iid(100000);
  for (auto& x : iid) x = rng.exponential(1.0);
  CHECK(std::abs(acf_lag1(iid)) < 4.0 / std::sqrt(1e5));

  std::vector<double> alt(1000);
  for (std::size_t i = 0; i < alt.size(); ++i) alt[i] = i % 2 ? 2.0 : 1.0;
  CHECK(acf_lag1(alt) == doctest::Approx(-1.0).epsilon(1e-2));

  CHECK_THROWS_AS(acf_lag1(std::vector<double>(99, 1.0)), InsufficientData);

  const auto h = hawkes_acf(heavy_traffic_params(5), 200000, 3);  // m = 0.8
  CHECK(h.acf > 0.0);
  CHECK(h.acf > 3.0 * h.stderr_);
  // Shuffling destroys the correlation.
  HawkesStream s(heavy_traffic_params(5), StreamInit::warm(), 4);
  std::vector<double> t;
  for (const auto& a : s.next_until(5e4)) t.push_back(a.t);
  Rng r(5);
  CHECK(std::abs(acf_lag1(interarrival_gaps(shuffle_to_renewal(t, r)))) <
        4.0 / std::sqrt(static_cast<double>(t.size())));
}

TEST_CASE("renewal counterpart") {
  const auto arr = renewal_arrivals(hawkes_params(), 500.0, 6);
  REQUIRE_FALSE(arr.empty());
  CHECK(arr.back().t <= 500.0);
  CHECK(arr.back().t > 490.0);  // covers the horizon
  for (std::size_t i = 1; i < arr.size(); ++i) CHECK(arr[i].t >= arr[i - 1].t);
  CHECK(arr.size() / 500.0 == doctest::Approx(2.0).epsilon(0.2));
  CHECK(renewal_arrivals(hawkes_params(), 500.0, 6).size() == arr.size());

  // m = 0: the renewal side is the Poisson path itself.
  HawkesParams p{1.0, ExcitationKernel::exponential(0.0, 1.0), ServiceDistribution::exponential()};
  const auto r0 = renewal_arrivals(p, 300.0, 7);
  HawkesStream s(p, StreamInit::warm(), 7);
  const auto h0 = s.next_until(r0.back().t);
  REQUIRE(h0.size() >= r0.size());
  for (std::size_t i = 0; i < r0.size(); ++i) {
    CHECK(r0[i].t == h0[i].t);
    CHECK(r0[i].size == h0[i].size);
  }
}

TEST_CASE("schedule length") {
  GoliqConfig c;
  c.cycles = 7;
  double sum = 0.0;
  for (int k = 1; k <= 7; ++k) sum += c.cycle_length(k);
  CHECK(schedule_length(c) == doctest::Approx(sum));
}

TEST_CASE("self-excitement setup") {
  const auto p = self_excitement_params(1.0);
  CHECK(p.kernel.branching_ratio() == doctest::Approx(0.5));
  CHECK(p.arrival_rate() == doctest::Approx(2.0));
  const auto c = self_excitement_config(100);
  CHECK(c.step_size(3) == doctest::Approx(1.0));
  CHECK(c.mu_lo == 2.5);
  CHECK(c.mu_hi == 10.0);

  // a = 0: both sides see the same Poisson arrivals, so the learned
  // staffing levels agree exactly.
  SweepOptions o;
  o.replications = 3;
  o.cycles = 8;
  const double a0[] = {0.0};
  const auto rows = run_self_excitement_sweep(a0, o, 8);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].hawkes.mean == rows[0].renewal.mean);
  CHECK(rows[0].relative_increase == 0.0);
}

TEST_CASE("heavy-traffic setup") {
  for (int n : {5, 25}) {
    const auto p = heavy_traffic_params(n);
    const double lambda = p.arrival_rate();
    CHECK(lambda == doctest::Approx(n));
    const auto c = heavy_traffic_config(n, 10);
    CHECK(c.mu_lo == doctest::Approx(lambda + 0.1 * std::sqrt(lambda)));
    CHECK(c.mu_hi == doctest::Approx(lambda + 8.0 * std::sqrt(lambda)));
    CHECK(c.mu_init == doctest::Approx(lambda + std::sqrt(lambda)));
    CHECK_NOTHROW(c.validate(lambda));
  }
}

TEST_CASE("coupling: identical starts never separate") {
  CouplingOptions o;
  o.replications = 4;
  o.horizon = 50.0;
  o.grid_points = 50;
  const CouplingInit same{1.0, 0.5, false};
  const auto r = run_coupling_lab(hawkes_params(), same, same, o, 10);
  for (double d : r.mean_abs_dw) CHECK(d == 0.0);
  for (double d : r.mean_abs_dx) CHECK(d == 0.0);
  CHECK(r.gap_bound_pass == 4);
  CHECK(r.identical_pass == 4);
}

TEST_CASE("coupling: distinct starts merge") {
  CouplingOptions o;
  o.replications = 20;
  o.horizon = 200.0;
  const auto r = run_coupling_lab(hawkes_params(), {0.0, 0.0, true}, {10.0, 0.0, true}, o, 11);
  CHECK(r.gap_bound_pass == 20);
  CHECK(r.identical_pass == 20);
  CHECK(r.coupled_count >= 18);
  CHECK(r.mean_abs_dw.front() > 1.0);
  CHECK(r.mean_abs_dw.back() < r.mean_abs_dw.front());
  for (const auto& rep : r.replications) {
    if (rep.coupled) CHECK(std::max(rep.tau1, rep.tau2) <= o.horizon);
  }
  // Observed forgetting is at least the guaranteed rate eta * mu.
  const ConstantsBundle b = solve_constants(ConstantsInputs{});
  CHECK(r.decay.slope < 0.0);
  CHECK(-r.decay.slope >= b.eta * o.mu);
}

TEST_CASE("moment suite: M/M/1 against Pollaczek-Khinchine") {
  MomentOptions o;
  o.mu = 2.0;
  o.horizon = 2e4;
  o.replications = 4;
  HawkesParams p{1.0, ExcitationKernel::exponential(0.0, 1.0), ServiceDistribution::exponential()};
  const auto r = moment_suite(p, o, 12);
  CHECK(r.pk_mean == doctest::Approx(1.0));
  REQUIRE(r.workload.size() == 4);
  REQUIRE(r.busy.size() == 2);
  CHECK(r.workload[0].value == doctest::Approx(1.0).epsilon(0.1));
  CHECK(r.busy_bound_holds);
  CHECK(r.mean_w_eps > r.workload[0].value);
  CHECK(r.all_stable);
}

TEST_CASE("moment suite: Hawkes input") {
  MomentOptions o;
  o.horizon = 5e3;
  o.replications = 4;
  const auto r = moment_suite(hawkes_params(), o, 13);
  CHECK(std::isnan(r.pk_mean));
  for (std::size_t i = 1; i < r.workload.size(); ++i)
    CHECK(r.workload[i].value > 0.0);
  CHECK(r.busy[0].value > 0.0);
  CHECK(r.busy_bound_holds);
  CHECK_FALSE(r.workload_tail.empty());
}
