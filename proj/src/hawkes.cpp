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

#include "hawkesq/hawkes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "hawkesq/error.hpp"

namespace hawkesq {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Min-heap comparator for std::push_heap / std::pop_heap.
bool heap_after(const HawkesEvent& a, const HawkesEvent& b) { return event_before(b, a); }

}  // namespace

Cluster simulate_cluster(const ExcitationKernel& kernel, const ServiceDistribution& service,
                         double root_time, Rng& rng, std::int64_t cluster_id) {
  const double m = kernel.branching_ratio();
  Cluster cluster;
  cluster.id = cluster_id;
  cluster.events.push_back({cluster_id, 1, root_time, 0, service.sample(rng)});
  cluster.departure_time = root_time;
  cluster.total_job = cluster.events.front().size;

  for (std::size_t i = 0; i < cluster.events.size(); ++i) {
    const int children = rng.poisson(m);
    if (children == 0) continue;
    if (cluster.events.size() + children > kMaxClusterEvents) {
      throw ClusterExplosion("cluster exceeded 10^7 events (branching ratio " +
                             std::to_string(m) + ")");
    }
    const double parent_time = cluster.events[i].t;
    const int parent_k = cluster.events[i].k;
    for (int c = 0; c < children; ++c) {
      const double birth = kernel.sample_birth(rng);
      HawkesEvent child{cluster_id, static_cast<int>(cluster.events.size()) + 1,
                        parent_time + birth, parent_k, service.sample(rng)};
      cluster.total_birth_time += birth;
      cluster.total_job += child.size;
      cluster.departure_time = std::max(cluster.departure_time, child.t);
      cluster.events.push_back(child);
    }
  }
  return cluster;
}

double HawkesMemory::residual_jobs() const {
  double total = 0.0;
  for (const auto& e : pending) total += e.size;
  return total;
}

double HawkesMemory::residual_life() const {
  if (pending.empty()) return 0.0;
  double last = time;
  for (const auto& e : pending) last = std::max(last, e.t);
  return last - time;
}

nlohmann::json HawkesMemory::to_json() const {
  auto out = nlohmann::json::array();
  for (const auto& e : pending) {
    out.push_back({{"cluster_id", e.cluster_id}, {"k", e.k}, {"t", e.t}, {"p", e.parent},
                   {"V", e.size}});
  }
  return out;
}

HawkesMemory HawkesMemory::from_json(const nlohmann::json& events, double time) {
  HawkesMemory memory{time, {}};
  for (const auto& e : events) {
    memory.pending.push_back({e.at("cluster_id").get<std::int64_t>(), e.at("k").get<int>(),
                              e.at("t").get<double>(), e.at("p").get<int>(),
                              e.at("V").get<double>()});
  }
  std::sort(memory.pending.begin(), memory.pending.end(), event_before);
  return memory;
}

double warm_up_length(const HawkesParams& params, double tol) {
  if (!(tol > 0.0)) throw ConfigError("warm-up tolerance must be positive");
  const double m = params.kernel.branching_ratio();
  return params.lambda0 * params.kernel.birth_mean() / ((1.0 - m) * tol);
}

HawkesStream::HawkesStream(const HawkesParams& params, const StreamInit& init,
                           std::uint64_t seed, Options options)
    : params_(params), options_(options), rng_(derive_seed(seed, 0)) {
  if (!(params.lambda0 >= 0.0)) throw ConfigError("hawkes.lambda0 must be >= 0");
  if (init.kind == StreamInit::Kind::kWarm) {
    const double t_warm = init.t_warm > 0.0 ? init.t_warm : warm_up_length(params, init.tol);
    if (!(t_warm > 0.0)) throw ConfigError("warm-up length must be positive");
    Rng warm_rng(derive_seed(seed, 1));
    seed_warm_up(t_warm, warm_rng);
  }
  next_immigrant_ = params_.lambda0 > 0.0 ? rng_.exponential(params_.lambda0) : kInf;
}

HawkesStream::HawkesStream(const HawkesParams& params, HawkesMemory memory,
                           std::uint64_t future_seed, Options options)
    : params_(params), options_(options), rng_(derive_seed(future_seed, 0)), now_(memory.time) {
  if (!(params.lambda0 >= 0.0)) throw ConfigError("hawkes.lambda0 must be >= 0");
  for (const auto& e : memory.pending) {
    if (!(e.t > now_)) throw ConfigError("memory event not after the memory time");
    push_pending(e);
  }
  next_immigrant_ = params_.lambda0 > 0.0 ? now_ + rng_.exponential(params_.lambda0) : kInf;
}

void HawkesStream::seed_warm_up(double t_warm, Rng& rng) {
  if (params_.lambda0 <= 0.0) return;
  // Immigrants on [-t_warm, 0); ids -1, -2, ... in order of arrival.
  std::int64_t id = -1;
  for (double t = -t_warm + rng.exponential(params_.lambda0); t < 0.0;
       t += rng.exponential(params_.lambda0)) {
    Cluster cluster = simulate_cluster(params_.kernel, params_.service, t, rng, id--);
    if (cluster.departure_time < 0.0) continue;
    for (const auto& e : cluster.events) {
      if (e.t >= 0.0) push_pending(e);
    }
    if (options_.record_clusters) clusters_.push_back(std::move(cluster));
  }
}

void HawkesStream::push_pending(const HawkesEvent& e) {
  heap_.push_back(e);
  std::push_heap(heap_.begin(), heap_.end(), heap_after);
}

HawkesEvent HawkesStream::pop_pending() {
  std::pop_heap(heap_.begin(), heap_.end(), heap_after);
  HawkesEvent e = heap_.back();
  heap_.pop_back();
  return e;
}

void HawkesStream::next_until(double up_to, std::vector<Arrival>& out) {
  if (up_to < now_) throw ConfigError("stream_next: up_to is before the stream time");
  for (;;) {
    const double pending_time = heap_.empty() ? kInf : heap_.front().t;
    // New clusters take the next id, so on a time tie the pending event wins.
    if (next_immigrant_ < pending_time) {
      if (next_immigrant_ > up_to) break;
      Cluster cluster = simulate_cluster(params_.kernel, params_.service, next_immigrant_, rng_,
                                         next_cluster_id_++);
      const HawkesEvent& root = cluster.events.front();
      out.push_back({root.t, root.size, root.cluster_id});
      for (std::size_t i = 1; i < cluster.events.size(); ++i) push_pending(cluster.events[i]);
      if (options_.record_clusters) clusters_.push_back(std::move(cluster));
      next_immigrant_ += rng_.exponential(params_.lambda0);
    } else {
      if (pending_time > up_to) break;
      const HawkesEvent e = pop_pending();
      out.push_back({e.t, e.size, e.cluster_id});
    }
    ++emitted_;
  }
  now_ = up_to;
}

HawkesMemory HawkesStream::memory() const {
  HawkesMemory memory{now_, heap_};
  std::sort(memory.pending.begin(), memory.pending.end(), event_before);
  return memory;
}

ReplaySource::ReplaySource(std::vector<Arrival> arrivals, double start)
    : arrivals_(std::move(arrivals)), now_(start) {
  if (!std::is_sorted(arrivals_.begin(), arrivals_.end(),
                      [](const Arrival& a, const Arrival& b) { return a.t < b.t; })) {
    throw ConfigError("replay arrivals must be time-sorted");
  }
  while (cursor_ < arrivals_.size() && arrivals_[cursor_].t <= start) ++cursor_;
}

void ReplaySource::next_until(double up_to, std::vector<Arrival>& out) {
  if (up_to < now_) throw ConfigError("stream_next: up_to is before the stream time");
  while (cursor_ < arrivals_.size() && arrivals_[cursor_].t <= up_to) {
    out.push_back(arrivals_[cursor_++]);
  }
  now_ = up_to;
}

}  // namespace hawkesq
