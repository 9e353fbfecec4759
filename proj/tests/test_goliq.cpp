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

#include <cmath>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "hawkesq/error.hpp"
#include "hawkesq/goliq.hpp"

using namespace hawkesq;

namespace {

HawkesParams poisson_params() {
  return {1.0, ExcitationKernel::exponential(0.0, 1.0), ServiceDistribution::exponential()};
}

// lambda0 = 1, m = 0.5: arrival rate 2.
HawkesParams hawkes_params() {
  return {1.0, ExcitationKernel::gamma_shape2(2.0, 2.0), ServiceDistribution::erlang(2)};
}

// M/M/1 with lambda = 1 and quadratic cost 0.5 mu^2 + 0.5 / (mu - 1).
GoliqConfig mm1_config() {
  GoliqConfig c;
  c.mu_lo = 1.2;
  c.mu_hi = 5.0;
  c.mu_init = 5.0;
  c.eps = 0.1;
  c.cost = StaffingCost::quadratic(0.5, 0.5);
  return c;
}

constexpr double kMm1ArgMin = 1.5651977;
constexpr double kMm1Min = 2.1095681;

}  // namespace

TEST_CASE("schedules and gradient") {
  GoliqConfig c;
  CHECK(c.cycle_length(1) == 10.0);
  CHECK(c.cycle_length(10) == doctest::Approx(10.0 + 20.0 * std::log(10.0)));
  CHECK(c.step_size(4) == 0.25);
  // No busy time: the gradient is the marginal staffing cost.
  CHECK(goliq_gradient(c, 3.0, 20.0, 0.0) == doctest::Approx(3.0));
  // int X over the window of length 10 equals 10 -> mean X = 1 -> H = -0.5 + 3.
  CHECK(goliq_gradient(c, 3.0, 20.0, 10.0) == doctest::Approx(2.5));
  CHECK(project(11.0, 2.5, 10.0) == 10.0);
  CHECK(project(1.0, 2.5, 10.0) == 2.5);
  CHECK(project(4.2, 2.5, 10.0) == 4.2);
}

TEST_CASE("config validation") {
  GoliqConfig c;
  CHECK_NOTHROW(c.validate(2.0));
  CHECK_THROWS_AS(c.validate(2.4), Unstable);  // rate >= mu_lo - eps
  GoliqConfig bad = c;
  bad.cycles = 0;
  CHECK_THROWS_AS(bad.validate(2.0), ConfigError);
  bad = c;
  bad.xi = 1.0;
  CHECK_THROWS_AS(bad.validate(2.0), ConfigError);
  bad = c;
  bad.mu_init = 11.0;
  CHECK_THROWS_AS(bad.validate(2.0), ConfigError);
  bad = c;
  bad.c_eta = 0.0;
  CHECK_THROWS_AS(bad.validate(2.0), ConfigError);
}

TEST_CASE("first update from an empty system without arrivals") {
  GoliqConfig c = mm1_config();
  c.cycles = 1;
  ReplaySource none({}, 0.0);
  const auto tr = run_goliq(c, none);
  REQUIRE(tr.cycles.size() == 1);
  CHECK(tr.cycles[0].gradient == doctest::Approx(5.0));  // c'(5) = 2 * 0.5 * 5
  CHECK(tr.next_mu == doctest::Approx(1.2));             // 5 - 1 * 5, projected up
  CHECK(tr.final_mu() == 5.0);
  CHECK(tr.cycles[0].int_w == 0.0);
  CHECK(tr.cycles[0].cost == doctest::Approx(12.5 * 10.0));
}

TEST_CASE("iterates stay in B and costs accumulate") {
  for (int seed = 0; seed < 5; ++seed) {
    GoliqConfig c;
    c.cycles = 40;
    c.c_eta = 5.0;  // large steps hit both bounds
    const auto tr = run_goliq(c, hawkes_params(), derive_seed(300, seed));
    double prev = 0.0, elapsed = 0.0;
    for (const auto& cy : tr.cycles) {
      CHECK(cy.mu >= c.mu_lo);
      CHECK(cy.mu <= c.mu_hi);
      CHECK(cy.cum_cost >= prev);
      CHECK(cy.cost == doctest::Approx(c.cost.staffing(cy.mu) * cy.length + c.cost.h0 * cy.int_w));
      elapsed += cy.length;
      CHECK(cy.elapsed == doctest::Approx(elapsed));
      prev = cy.cum_cost;
    }
  }
}

TEST_CASE("learning on M/M/1 approaches the analytic optimum") {
  GoliqConfig c = mm1_config();
  c.cycles = 200;
  double sum = 0.0;
  constexpr int reps = 10;
  for (int r = 0; r < reps; ++r) sum += run_goliq(c, poisson_params(), derive_seed(310, r)).final_mu();
  CHECK(sum / reps == doctest::Approx(kMm1ArgMin).epsilon(0.05));
}

TEST_CASE("grid construction") {
  const auto g = make_grid(2.5, 3.5, 0.02);
  CHECK(g.size() == 51);
  CHECK(g.front() == 2.5);
  CHECK(g.back() == doctest::Approx(3.5));
  CHECK(make_grid(1.0, 1.0, 0.1).size() == 1);
  CHECK_THROWS_AS(make_grid(2.0, 1.0, 0.1), ConfigError);
  CHECK_THROWS_AS(make_grid(1.0, 2.0, 0.0), ConfigError);
}

TEST_CASE("NGS on M/M/1 finds the analytic minimizer") {
  const auto grid = make_grid(1.3, 2.0, 0.01);
  NgsOptions o;
  o.horizon = 2e4;
  o.replications = 10;
  const auto r = run_ngs(grid, poisson_params(), StaffingCost::quadratic(0.5, 0.5), o, 320);
  CHECK(r.mu_star == doctest::Approx(kMm1ArgMin).epsilon(0.03));
  CHECK(r.f_star == doctest::Approx(kMm1Min).epsilon(0.02));
  CHECK(r.grid.size() == grid.size());
  for (const auto& p : r.grid) {
    CHECK(p.f_hat == doctest::Approx(0.5 * p.mu * p.mu + 0.5 * p.mean_workload));
    CHECK(p.stderr_ >= 0.0);
  }
}

TEST_CASE("NGS edge cases and thread invariance") {
  NgsOptions o;
  o.horizon = 2000.0;
  o.replications = 6;
  const double one[] = {2.84};
  const auto single = run_ngs(one, hawkes_params(), StaffingCost{}, o, 5);
  CHECK(single.mu_star == 2.84);
  CHECK(single.f_star == single.grid[0].f_hat);
  const double unstable[] = {1.9, 2.84};
  CHECK_THROWS_AS(run_ngs(unstable, hawkes_params(), StaffingCost{}, o, 5), Unstable);

  const auto grid = make_grid(2.6, 3.2, 0.1);
  const auto a = run_ngs(grid, hawkes_params(), StaffingCost{}, o, 6);
  o.threads = 3;
  const auto b = run_ngs(grid, hawkes_params(), StaffingCost{}, o, 6);
  REQUIRE(a.grid.size() == b.grid.size());
  for (std::size_t i = 0; i < a.grid.size(); ++i) {
    CHECK(a.grid[i].f_hat == b.grid[i].f_hat);
    CHECK(a.grid[i].stderr_ == b.grid[i].stderr_);
  }
  // Common random numbers make the estimated curve monotone in the workload.
  for (std::size_t i = 1; i < a.grid.size(); ++i)
    CHECK(a.grid[i].mean_workload <= a.grid[i - 1].mean_workload);
}

TEST_CASE("regret curve and fit") {
  GoliqConfig c;
  c.cycles = 30;
  const auto tr = run_goliq(c, hawkes_params(), 330);
  const double f_star = 6.1;
  const auto curve = regret_curve(tr, f_star);
  REQUIRE(curve.size() == tr.cycles.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < curve.size(); ++i) {
    sum += tr.cycles[i].cost - f_star * tr.cycles[i].length;
    CHECK(curve[i].regret == doctest::Approx(sum));
    CHECK(curve[i].elapsed == tr.cycles[i].elapsed);
  }
  std::vector<std::vector<RegretPoint>> two = {curve, curve};
  const auto avg = average_regret(two);
  CHECK(avg.back().regret == doctest::Approx(curve.back().regret));

  // Exact sqrt(R) = 2 log t + 1 gives R^2 = 1.
  std::vector<RegretPoint> exact;
  for (int k = 1; k <= 50; ++k) {
    const double t = 10.0 * k;
    const double s = 2.0 * std::log(t) + 1.0;
    exact.push_back({k, t, s * s});
  }
  const auto fit = fit_regret(exact);
  CHECK(fit.r_squared == doctest::Approx(1.0));
  CHECK(fit.slope == doctest::Approx(2.0));

  std::ostringstream out;
  write_trace_csv(out, tr, f_star);
  CHECK(out.str().rfind("k,", 0) == 0);
}

TEST_CASE("gradient check on M/M/1") {
  NgsOptions o;
  o.horizon = 2e4;
  o.replications = 10;
  const auto g = gradient_check(2.0, 0.1, poisson_params(), o, 340);
  // w(mu) = 1/(mu - 1): -w'(2) = 1 = E[X_inf(2)]
  CHECK(g.fd_slope < 0.0);
  CHECK(-g.fd_slope == doctest::Approx(1.0 / (1.1 * 0.9)).epsilon(0.1));
  CHECK(g.x_infty == doctest::Approx(1.0).epsilon(0.1));
  CHECK(g.w_minus > g.w_plus);
  CHECK_THROWS_AS(gradient_check(2.0, 1.0, poisson_params(), o, 340), Unstable);
}
