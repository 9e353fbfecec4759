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
#include <map>
#include <vector>

#include "doctest.h"
#include "hawkesq/constants.hpp"
#include "hawkesq/error.hpp"
#include "hawkesq/hawkes.hpp"
#include "hawkesq/stats.hpp"

using namespace hawkesq;

namespace {

HawkesParams base_params() {
  return {1.0, ExcitationKernel::gamma_shape2(2.0, 2.0), ServiceDistribution::erlang(2)};
}

std::vector<double> times_of(const std::vector<Arrival>& a) {
  std::vector<double> t;
  for (const auto& x : a) t.push_back(x.t);
  return t;
}

}  // namespace

TEST_CASE("seed mixing is splitmix64 of master xor splitmix64(index)") {
  // splitmix64(0) from the reference implementation.
  CHECK(splitmix64(0) == 0xe220a8397b1dcdafULL);
  CHECK(derive_seed(7, 3) == splitmix64(7 ^ splitmix64(3)));
  CHECK(derive_seed(7, 3) != derive_seed(7, 4));
  Rng a(5), b(5);
  for (int i = 0; i < 10; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("kernel branching ratios and validation") {
  CHECK(ExcitationKernel::exponential(1.0, 2.0).branching_ratio() == doctest::Approx(0.5));
  CHECK(ExcitationKernel::gamma_shape2(2.0, 2.0).branching_ratio() == doctest::Approx(0.5));
  CHECK(ExcitationKernel::exponential(0.0, 2.0).branching_ratio() == 0.0);
  CHECK_THROWS_AS(ExcitationKernel::exponential(2.0, 2.0), ConfigError);
  CHECK_THROWS_AS(ExcitationKernel::gamma_shape2(5.0, 2.0), ConfigError);
  CHECK_THROWS_AS(ExcitationKernel::exponential(0.5, 0.0), ConfigError);
  CHECK_THROWS_AS(ExcitationKernel::exponential(-0.5, 1.0), ConfigError);
}

TEST_CASE("kernel MGF closed form and domain") {
  const auto g = ExcitationKernel::gamma_shape2(2.0, 2.0);
  CHECK(g.birth_mgf(1.0) == doctest::Approx(4.0));  // (2 / (2 - 1))^2
  CHECK(std::isinf(g.birth_mgf(2.0)));
  CHECK(std::isinf(g.log_birth_mgf(3.0)));
  const auto e = ExcitationKernel::exponential(1.0, 4.0);
  CHECK(e.birth_mgf(2.0) == doctest::Approx(2.0));
  CHECK(e.birth_mean() == doctest::Approx(0.25));
  // Monte Carlo mean of the birth density.
  Rng rng(3);
  KahanSum s;
  for (int i = 0; i < 200000; ++i) s.add(g.sample_birth(rng));
  CHECK(s.value() / 200000 == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("service distributions have unit mean") {
  const std::vector<ServiceDistribution> laws = {
      ServiceDistribution::exponential(), ServiceDistribution::erlang(2),
      ServiceDistribution::erlang(5), ServiceDistribution::deterministic(),
      ServiceDistribution::lognormal(0.5)};
  for (const auto& v : laws) {
    CAPTURE(v.name());
    Rng rng(11);
    KahanSum s, s2;
    constexpr int n = 1'000'000;
    for (int i = 0; i < n; ++i) {
      const double x = v.sample(rng);
      s.add(x);
      s2.add(x * x);
    }
    CHECK(v.mean() == 1.0);
    CHECK(s.value() / n == doctest::Approx(1.0).epsilon(0.01));
    CHECK(s2.value() / n == doctest::Approx(v.second_moment()).epsilon(0.02));
  }
  CHECK(ServiceDistribution::exponential().second_moment() == 2.0);
  CHECK(ServiceDistribution::erlang(2).second_moment() == doctest::Approx(1.5));
  CHECK(ServiceDistribution::deterministic().second_moment() == 1.0);
}

TEST_CASE("m = 0 cluster is a single event") {
  Rng rng(1);
  const auto k = ExcitationKernel::exponential(0.0, 2.0);
  for (int i = 0; i < 100; ++i) {
    const Cluster c = simulate_cluster(k, ServiceDistribution::exponential(), 3.5, rng, i);
    REQUIRE(c.size() == 1);
    CHECK(c.total_birth_time == 0.0);
    CHECK(c.departure_time == 3.5);
    CHECK(c.total_job == c.events[0].size);
  }
}

TEST_CASE("cluster structure invariants") {
  Rng rng(2);
  const auto k = ExcitationKernel::gamma_shape2(2.0, 2.0);
  for (int i = 0; i < 2000; ++i) {
    const Cluster c = simulate_cluster(k, ServiceDistribution::exponential(), 1.0, rng, i);
    CHECK(c.events[0].k == 1);
    CHECK(c.events[0].parent == 0);
    double job = 0.0;
    for (const auto& e : c.events) {
      job += e.size;
      if (e.k == 1) continue;
      REQUIRE(e.parent >= 1);
      REQUIRE(e.parent < e.k);
      CHECK(c.events[static_cast<std::size_t>(e.parent - 1)].t < e.t);
    }
    CHECK(c.departure_time >= c.arrival_time());
    CHECK(c.total_birth_time >= c.departure_time - c.arrival_time() - 1e-12);
    CHECK(c.total_job == doctest::Approx(job));
  }
}

TEST_CASE("Borel mean and pmf for m = 0.5") {
  // Exact Borel probabilities.
  CHECK(borel_pmf(0.5, 1) == doctest::Approx(0.6065306597126334).epsilon(1e-12));
  CHECK(borel_pmf(0.5, 2) == doctest::Approx(0.1839397205857212).epsilon(1e-12));
  CHECK(borel_pmf(0.5, 6) == doctest::Approx(0.01680313557415408).epsilon(1e-12));

  Rng rng(20);
  const auto k = ExcitationKernel::exponential(1.0, 2.0);
  constexpr int n = 100000;
  std::map<std::size_t, double> counts;
  KahanSum size_sum;
  for (int i = 0; i < n; ++i) {
    const auto c = simulate_cluster(k, ServiceDistribution::exponential(), 0.0, rng, i);
    size_sum.add(static_cast<double>(c.size()));
    counts[std::min<std::size_t>(c.size(), 7)] += 1.0;
  }
  CHECK(size_sum.value() / n == doctest::Approx(2.0).epsilon(0.02));
  std::vector<double> obs, exp;
  double tail = 1.0;
  for (int s = 1; s <= 6; ++s) {
    obs.push_back(counts[static_cast<std::size_t>(s)]);
    exp.push_back(n * borel_pmf(0.5, s));
    tail -= borel_pmf(0.5, s);
  }
  obs.push_back(counts[7]);
  exp.push_back(n * tail);
  CHECK(chi_square_test(obs, exp).p_value > 0.01);
}

TEST_CASE("m = 0 stream is a Poisson process") {
  HawkesParams p{1.0, ExcitationKernel::exponential(0.0, 1.0), ServiceDistribution::exponential()};
  HawkesStream s(p, StreamInit::empty(), 4);
  std::vector<Arrival> a;
  while (a.size() < 1'000'001) s.next_until(s.now() + 1e5, a);
  CHECK(a[1'000'000].t / 1'000'000 == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("lambda0 = 0 stream is empty") {
  HawkesParams p{0.0, ExcitationKernel::exponential(0.5, 1.0), ServiceDistribution::exponential()};
  HawkesStream s(p, StreamInit::empty(), 4);
  CHECK(s.next_until(100.0).empty());
  CHECK(s.memory().empty());
}

TEST_CASE("rate identity lambda0 / (1 - m)") {
  for (double m : {0.0, 0.3, 0.5, 0.8}) {
    CAPTURE(m);
    HawkesParams p{1.0, ExcitationKernel::exponential(2.0 * m, 2.0),
                   ServiceDistribution::exponential()};
    HawkesStream s(p, StreamInit::warm(), 9);
    const auto a = s.next_until(1e5);
    CHECK(a.size() / 1e5 == doctest::Approx(1.0 / (1.0 - m)).epsilon(0.02));
  }
  HawkesStream s(base_params(), StreamInit::empty(), 10);
  CHECK(s.next_until(1e5).size() / 1e5 == doctest::Approx(2.0).epsilon(0.01));
}

TEST_CASE("warm start reaches the stationary rate immediately") {
  const auto p = base_params();
  CHECK(warm_up_length(p, 1e-3) == doctest::Approx(2000.0));
  KahanSum total;
  for (int r = 0; r < 10; ++r) {
    HawkesStream s(p, StreamInit::warm(1e-3), derive_seed(77, r));
    total.add(static_cast<double>(s.next_until(1e3).size()));
  }
  CHECK(total.value() / 1e4 == doctest::Approx(2.0).epsilon(0.02));
}

TEST_CASE("stream splitting identity and determinism") {
  const auto p = base_params();
  HawkesStream a(p, StreamInit::warm(), 123);
  HawkesStream b(p, StreamInit::warm(), 123);
  auto first = a.next_until(5.0);
  const auto second = a.next_until(10.0);
  first.insert(first.end(), second.begin(), second.end());
  const auto whole = b.next_until(10.0);
  REQUIRE(first.size() == whole.size());
  for (std::size_t i = 0; i < whole.size(); ++i) {
    CHECK(first[i].t == whole[i].t);
    CHECK(first[i].size == whole[i].size);
    CHECK(first[i].cluster_id == whole[i].cluster_id);
  }
  CHECK_THROWS_AS(a.next_until(9.0), ConfigError);
}

TEST_CASE("stream output is strictly increasing") {
  HawkesStream s(base_params(), StreamInit::warm(), 5);
  const auto t = times_of(s.next_until(1e4));
  CHECK(std::adjacent_find(t.begin(), t.end(), std::greater_equal<>()) == t.end());
}

TEST_CASE("memory snapshot") {
  HawkesStream fresh(base_params(), StreamInit::empty(), 1);
  CHECK(fresh.memory().residual_jobs() == 0.0);
  CHECK(fresh.memory().residual_life() == 0.0);
  CHECK(fresh.memory().empty());

  HawkesStream s(base_params(), StreamInit::warm(), 6, {.record_clusters = true});
  s.next_until(50.0);
  const HawkesMemory mem = s.memory();
  CHECK(mem.time == 50.0);
  double j0 = 0.0, last = 50.0;
  for (const auto& e : mem.pending) {
    CHECK(e.t > 50.0);
    j0 += e.size;
    last = std::max(last, e.t);
  }
  CHECK(mem.residual_jobs() == doctest::Approx(j0));
  CHECK(mem.residual_life() == doctest::Approx(last - 50.0));
  CHECK(mem.empty() == (mem.residual_jobs() == 0.0));

  // Brute force: pending = events after 50 of clusters started before 50.
  std::vector<HawkesEvent> brute;
  for (const auto& c : s.clusters()) {
    if (c.arrival_time() >= 50.0) continue;
    for (const auto& e : c.events) {
      if (e.t > 50.0) brute.push_back(e);
    }
  }
  std::sort(brute.begin(), brute.end(), event_before);
  REQUIRE(brute.size() == mem.pending.size());
  for (std::size_t i = 0; i < brute.size(); ++i) {
    CHECK(brute[i].t == mem.pending[i].t);
    CHECK(brute[i].cluster_id == mem.pending[i].cluster_id);
  }
}

TEST_CASE("warm memory has positive mean residual work") {
  KahanSum j0;
  int nonempty = 0;
  for (int r = 0; r < 200; ++r) {
    HawkesStream s(base_params(), StreamInit::warm(), derive_seed(8, r), {.record_clusters = true});
    const HawkesMemory mem = s.memory();
    j0.add(mem.residual_jobs());
    nonempty += mem.empty() ? 0 : 1;
    // Memory at 0 equals the retained events of the recorded warm clusters.
    std::size_t brute = 0;
    for (const auto& c : s.clusters()) {
      for (const auto& e : c.events) brute += e.t >= 0.0 ? 1 : 0;
    }
    CHECK(brute == mem.pending.size());
  }
  CHECK(j0.value() / 200 > 0.0);
  CHECK(nonempty > 0);
}

TEST_CASE("memory JSON round trip and resumed stream") {
  HawkesStream s(base_params(), StreamInit::warm(), 15);
  const HawkesMemory mem = s.memory();
  const auto j = mem.to_json();
  REQUIRE(j.is_array());
  if (!mem.empty()) {
    CHECK(j[0].contains("cluster_id"));
    CHECK(j[0].contains("p"));
    CHECK(j[0].contains("V"));
  }
  const HawkesMemory back = HawkesMemory::from_json(j, mem.time);
  REQUIRE(back.pending.size() == mem.pending.size());
  CHECK(back.residual_jobs() == mem.residual_jobs());

  // A stream resumed from the memory with the same future seed reproduces
  // the original stream's arrivals.
  HawkesStream resumed(base_params(), back, 15);
  const auto a = s.next_until(200.0);
  const auto b = resumed.next_until(200.0);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].t == b[i].t);
}

TEST_CASE("replay source") {
  std::vector<Arrival> a = {{1.0, 1.0, 0}, {2.0, 1.0, 1}, {3.0, 1.0, 2}};
  ReplaySource r(a, 0.0);
  CHECK(r.next_until(1.5).size() == 1);
  CHECK(r.remaining() == 2);
  CHECK(r.next_until(3.0).size() == 2);
  std::vector<Arrival> unsorted = {{2.0, 1.0, 0}, {1.0, 1.0, 1}};
  CHECK_THROWS_AS(ReplaySource(unsorted, 0.0), ConfigError);
}
