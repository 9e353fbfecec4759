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

#include <boost/math/special_functions/lambert_w.hpp>
#include <cmath>
#include <limits>

#include "doctest.h"
#include "hawkesq/constants.hpp"
#include "hawkesq/error.hpp"
#include "hawkesq/hawkes.hpp"
#include "hawkesq/lambert_w.hpp"

using namespace hawkesq;

namespace {

// Reference values computed with 40-digit arithmetic.
struct WRef {
  double x, w;
  double tol = 1e-13;
};
constexpr WRef kW0[] = {
    {-0.3, -0.48940222718021496904},
    {-0.1, -0.11183255915896296483},
    {0.5, 0.35173371124919582602},
    {1.0, 0.567143290409783873},
    {10.0, 1.7455280027406993831},
    {1e3, 5.2496028524015962271},
    {1e10, 20.028685413304950781},
    {1e300, 684.24720862976084924},
    // Near the branch point dW/dx ~ 6e6, so rounding x to double moves W by ~2e-10.
    {-0.3678794411714, -0.99999952032930613707, 1e-9},
    {1e-6, 9.9999900000149999733e-7},
};

constexpr double kBorelDomainHalf = 0.19314718055994530942;  // 0.5 - 1 - log 0.5

// Monte Carlo E[exp(s |C|)] and E[exp(theta S)] over simulated clusters.
struct ClusterMc {
  double size_mgf, job_mgf;
};
ClusterMc cluster_mc(double m, const ServiceDistribution& v, double s, double theta, int n,
                     std::uint64_t seed) {
  const auto kernel = ExcitationKernel::exponential(m, 1.0);
  Rng rng(seed);
  double a = 0.0, b = 0.0;
  for (int i = 0; i < n; ++i) {
    const Cluster c = simulate_cluster(kernel, v, 0.0, rng);
    a += std::exp(s * static_cast<double>(c.size()));
    b += std::exp(theta * c.total_job);
  }
  return {a / n, b / n};
}

}  // namespace

TEST_CASE("lambert_w0 against reference values") {
  for (const auto& r : kW0) {
    CAPTURE(r.x);
    CHECK(lambert_w0(r.x) == doctest::Approx(r.w).epsilon(r.tol));
  }
  CHECK(lambert_w0(0.0) == 0.0);
  CHECK(lambert_w0(std::exp(1.0)) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(lambert_w0(-std::exp(-1.0)) == doctest::Approx(-1.0).epsilon(1e-6));
  CHECK_THROWS_AS(lambert_w0(-0.5), OutOfDomain);
}

TEST_CASE("lambert_w0 against boost on a sweep") {
  for (double x = -0.367; x < 1e6; x = x < 1.0 ? x + 0.013 : x * 1.37) {
    CAPTURE(x);
    const double w = lambert_w0(x);
    CHECK(w == doctest::Approx(boost::math::lambert_w0(x)).epsilon(1e-12));
    CHECK(w * std::exp(w) == doctest::Approx(x).epsilon(1e-12).scale(1e-300));
  }
}

TEST_CASE("Borel pmf and mgf") {
  constexpr double pmf[] = {0.60653066, 0.18393972, 0.08367381, 0.04511176, 0.02672038, 0.01680314};
  for (int k = 1; k <= 6; ++k) CHECK(borel_pmf(0.5, k) == doctest::Approx(pmf[k - 1]).epsilon(1e-7));
  CHECK(borel_log_domain(0.5) == doctest::Approx(kBorelDomainHalf).epsilon(1e-14));
  CHECK(borel_mgf(0.5, 0.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(borel_mgf(0.5, 0.096573590279972654709) ==
        doctest::Approx(1.2447957666374978405).epsilon(1e-12));
  CHECK(borel_mgf(0.5, 0.17383246250395077848) ==
        doctest::Approx(1.6322325255079017591).epsilon(1e-12));
  CHECK(borel_mgf(0.5, kBorelDomainHalf) == doctest::Approx(2.0).epsilon(1e-6));  // 1/m
  CHECK_THROWS_AS(borel_mgf(0.5, kBorelDomainHalf + 1e-3), OutOfDomain);
  CHECK(borel_mgf(0.0, 0.3) == doctest::Approx(std::exp(0.3)));

  // d/ds at 0 is E|C| = 1/(1-m).
  for (double m : {0.1, 0.5, 0.8}) {
    const double h = 1e-6;
    const double d = (borel_mgf(m, h) - borel_mgf(m, -h)) / (2 * h);
    CHECK(d == doctest::Approx(1.0 / (1.0 - m)).epsilon(1e-6));
  }
}

TEST_CASE("Borel mgf: Lambert route equals fixed point") {
  for (double m : {0.2, 0.5, 0.9}) {
    for (double frac : {0.1, 0.5, 0.9}) {
      const double s = frac * borel_log_domain(m);
      CAPTURE(m);
      CAPTURE(frac);
      CHECK(borel_mgf(m, s) == doctest::Approx(borel_mgf_fixed_point(m, s)).epsilon(1e-9));
    }
  }
}

TEST_CASE("Borel mgf against simulated cluster sizes") {
  const auto v = ServiceDistribution::exponential();
  // Half-way into the domain: finite variance, tight check.
  const auto half = cluster_mc(0.5, v, 0.5 * kBorelDomainHalf, 0.05, 1'000'000, 101);
  CHECK(half.size_mgf == doctest::Approx(borel_mgf(0.5, 0.5 * kBorelDomainHalf)).epsilon(0.005));
  // psi_S for exponential jobs.
  CHECK(psi_cluster_job(0.5, v, 0.05) == doctest::Approx(1.1148460393122587949).epsilon(1e-10));
  CHECK(half.job_mgf == doctest::Approx(1.1148460393122587949).epsilon(0.005));
  // At 90% the estimator has infinite variance; only a loose check.
  const auto far = cluster_mc(0.5, v, 0.9 * kBorelDomainHalf, 0.0, 1'000'000, 102);
  CHECK(far.size_mgf == doctest::Approx(1.6322325255079017591).epsilon(0.05));
}

TEST_CASE("psi_S domain") {
  const auto v = ServiceDistribution::exponential();
  const double sup = psi_cluster_job_sup(0.5, v);
  CHECK(sup > 0.0);
  CHECK(sup < 1.0);
  CHECK(std::isfinite(psi_cluster_job(0.5, v, 0.999 * sup)));
  // at the supremum psi_V(theta) = e^B, psi_S = 1/m
  CHECK(v.log_mgf(sup) == doctest::Approx(kBorelDomainHalf).epsilon(1e-9));
  CHECK(psi_cluster_job_sup(0.5, ServiceDistribution::lognormal(0.5)) == 0.0);
}

TEST_CASE("solve constants: defaults") {
  const ConstantsBundle b = solve_constants(ConstantsInputs{});
  const auto& in = b.inputs;
  CHECK(b.theta0 > 0.0);
  CHECK(b.theta_bar > 0.0);
  CHECK(b.theta1 <= b.theta0_prime);
  CHECK(b.theta1 <= b.theta_bar / 2.0);
  CHECK(b.eta1 > 0.0);
  CHECK(b.theta > 0.0);
  CHECK(b.eta > 0.0);
  CHECK(b.theta <= b.theta1 / 6.0);
  CHECK(b.eta <= b.eta1 / 6.0);
  // theta_bar is a root: h(0) = 0 and h(theta_bar) = 0, h < 0 between.
  CHECK(theta_bar_function(in, 0.0) == doctest::Approx(0.0).scale(1.0));
  CHECK(std::abs(theta_bar_function(in, b.theta_bar)) < 1e-9);
  CHECK(theta_bar_function(in, b.theta_bar / 2.0) < 0.0);
  // h'(0) = lambda0 E[S] / (mu_lo - eps) - 1 with E[S] = 1/(1-m)
  const double m = in.kernel.branching_ratio();
  const double slope = (theta_bar_function(in, 1e-7) - theta_bar_function(in, -1e-7)) / 2e-7;
  CHECK(slope == doctest::Approx(in.lambda0 / ((1 - m) * (in.mu_lo - in.eps)) - 1.0).epsilon(1e-5));
  for (const auto& c : verify_constants(b)) {
    CAPTURE(c.name);
    CHECK(c.holds);
  }
  const auto j = to_json(b);
  CHECK(j.at("theta").get<double>() == b.theta);
  CHECK(j.at("eta").get<double>() == b.eta);
}

TEST_CASE("solve constants: other settings") {
  for (int svc = 0; svc < 3; ++svc) {
    ConstantsInputs in;
    in.service = svc == 0 ? ServiceDistribution::exponential()
                 : svc == 1 ? ServiceDistribution::erlang(3)
                            : ServiceDistribution::deterministic();
    in.kernel = ExcitationKernel::exponential(1.0, 2.0);  // E[S] = 2
    in.mu_lo = 2.2;
    in.eps = 0.1;
    CAPTURE(in.service.name());
    const auto b = solve_constants(in);
    for (const auto& c : verify_constants(b)) CHECK(c.holds);
  }
}

TEST_CASE("solve constants: errors") {
  ConstantsInputs unstable;
  unstable.mu_lo = 2.0;  // 1/(1-0.5) = 2 >= 2 - 0.1
  CHECK_THROWS_AS(solve_constants(unstable), Unstable);

  ConstantsInputs noroot;
  noroot.lambda0 = 0.1;
  noroot.kernel = ExcitationKernel::exponential(0.5, 1.0);
  noroot.service = ServiceDistribution::exponential();
  noroot.mu_lo = 10.0;
  noroot.mu_hi = 20.0;
  CHECK_THROWS_AS(solve_constants(noroot), NoRoot);

  ConstantsInputs zero;
  zero.kernel = ExcitationKernel::exponential(0.0, 1.0);
  CHECK_THROWS_AS(solve_constants(zero), OutOfDomain);

  ConstantsInputs heavy;
  heavy.service = ServiceDistribution::lognormal(0.5);
  CHECK_THROWS_AS(solve_constants(heavy), OutOfDomain);
}
