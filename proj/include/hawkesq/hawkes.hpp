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

#ifndef HAWKESQ_HAWKES_HPP_
#define HAWKESQ_HAWKES_HPP_

#include <cstddef>
#include <cstdint>
#include "json.hpp"
#include <vector>

#include "hawkesq/kernel.hpp"
#include "hawkesq/random.hpp"
#include "hawkesq/service.hpp"

namespace hawkesq {

// One event of a cluster. `k` is 1-based within the cluster; `parent` is the
// k of the parent event, 0 for the immigrant.
struct HawkesEvent {
  std::int64_t cluster_id = 0;
  int k = 1;
  double t = 0.0;
  int parent = 0;
  double size = 1.0;
};

// Stable event order: (time, cluster_id, k).
inline bool event_before(const HawkesEvent& a, const HawkesEvent& b) {
  if (a.t != b.t) return a.t < b.t;
  if (a.cluster_id != b.cluster_id) return a.cluster_id < b.cluster_id;
  return a.k < b.k;
}

// Realized branching tree rooted at an immigrant. `events` is in generation
// (breadth-first) order, events[0] is the immigrant.
struct Cluster {
  std::int64_t id = 0;
  std::vector<HawkesEvent> events;
  double departure_time = 0.0;    // delta: latest event time
  double total_birth_time = 0.0;  // TB: sum of birth times of non-immigrants
  double total_job = 0.0;         // S: sum of job sizes

  double arrival_time() const { return events.front().t; }
  std::size_t size() const { return events.size(); }
};

inline constexpr std::size_t kMaxClusterEvents = 10'000'000;

// Breadth-first Poisson(m) branching with i.i.d. birth times from the kernel
// density and i.i.d. job sizes. Throws ClusterExplosion past
// kMaxClusterEvents events.
Cluster simulate_cluster(const ExcitationKernel& kernel, const ServiceDistribution& service,
                         double root_time, Rng& rng, std::int64_t cluster_id = 0);

// Events of clusters that started before `time` and arrive after it.
struct HawkesMemory {
  double time = 0.0;
  std::vector<HawkesEvent> pending;  // sorted by event_before

  // J0: total size of pending jobs.
  double residual_jobs() const;
  // L0: time from `time` to the last pending event, 0 if none.
  double residual_life() const;
  bool empty() const { return pending.empty(); }

  // JSON array of {cluster_id, k, t, p, V}.
  nlohmann::json to_json() const;
  static HawkesMemory from_json(const nlohmann::json& events, double time = 0.0);
};

struct HawkesParams {
  double lambda0 = 1.0;
  ExcitationKernel kernel = ExcitationKernel::exponential(0.0, 1.0);
  ServiceDistribution service = ServiceDistribution::exponential();

  // lambda0 / (1 - m).
  double arrival_rate() const { return lambda0 / (1.0 - kernel.branching_ratio()); }
};

// Look-back length that makes the expected mass of clusters older than the
// window still alive at time 0 at most `tol`:
//   T_warm = lambda0 E[b] / ((1 - m) tol).
double warm_up_length(const HawkesParams& params, double tol);

struct StreamInit {
  enum class Kind { kEmpty, kWarm };
  Kind kind = Kind::kEmpty;
  double t_warm = 0.0;  // used when > 0, otherwise derived from tol
  double tol = 1e-3;

  static StreamInit empty() { return {}; }
  static StreamInit warm(double tol = 1e-3) { return {Kind::kWarm, 0.0, tol}; }
  static StreamInit warm_for(double t_warm) { return {Kind::kWarm, t_warm, 0.0}; }
};

struct Arrival {
  double t = 0.0;
  double size = 0.0;
  std::int64_t cluster_id = 0;
};

// Time-ordered source of arrivals consumed by the queue.
class ArrivalSource {
 public:
  virtual ~ArrivalSource() = default;
  virtual double now() const = 0;
  // Appends all arrivals in (now(), up_to] to `out` and advances to up_to.
  virtual void next_until(double up_to, std::vector<Arrival>& out) = 0;
  virtual HawkesMemory memory() const = 0;

  std::vector<Arrival> next_until(double up_to) {
    std::vector<Arrival> out;
    next_until(up_to, out);
    return out;
  }
};

// Hawkes arrivals generated cluster by cluster. Immigrants follow a lazy
// Poisson(lambda0) clock; when an immigrant is emitted its whole cluster is
// simulated and the descendants wait in a min-heap. The heap therefore holds
// exactly the Hawkes memory at the current time.
//
// Clusters seeded during warm-up get negative ids, clusters born after time
// 0 get ids 0, 1, 2, ... Two streams built with the same future seed share
// every cluster born after time 0 whatever their memories are.
struct StreamOptions {
  bool record_clusters = false;
};

class HawkesStream final : public ArrivalSource {
 public:
  using Options = StreamOptions;

  // Future clusters draw from derive_seed(seed, 0), warm-up from
  // derive_seed(seed, 1).
  HawkesStream(const HawkesParams& params, const StreamInit& init, std::uint64_t seed,
               Options options);
  HawkesStream(const HawkesParams& params, const StreamInit& init, std::uint64_t seed)
      : HawkesStream(params, init, seed, Options{}) {}

  // Starts at memory.time with the given memory; future clusters from
  // derive_seed(future_seed, 0).
  HawkesStream(const HawkesParams& params, HawkesMemory memory, std::uint64_t future_seed,
               Options options = {});

  double now() const override { return now_; }
  using ArrivalSource::next_until;
  void next_until(double up_to, std::vector<Arrival>& out) override;
  HawkesMemory memory() const override;

  const HawkesParams& params() const { return params_; }
  // Recorded clusters in creation order (Options::record_clusters).
  const std::vector<Cluster>& clusters() const { return clusters_; }
  std::size_t emitted() const { return emitted_; }

 private:
  void push_pending(const HawkesEvent& e);
  HawkesEvent pop_pending();
  void seed_warm_up(double t_warm, Rng& rng);

  HawkesParams params_;
  Options options_;
  Rng rng_;
  double now_ = 0.0;
  double next_immigrant_ = 0.0;
  std::int64_t next_cluster_id_ = 0;
  std::vector<HawkesEvent> heap_;
  std::vector<Cluster> clusters_;
  std::size_t emitted_ = 0;
};

// Replays a fixed, time-sorted list of arrivals.
class ReplaySource final : public ArrivalSource {
 public:
  explicit ReplaySource(std::vector<Arrival> arrivals, double start = 0.0);

  double now() const override { return now_; }
  using ArrivalSource::next_until;
  void next_until(double up_to, std::vector<Arrival>& out) override;
  HawkesMemory memory() const override { return HawkesMemory{now_, {}}; }

  std::size_t remaining() const { return arrivals_.size() - cursor_; }
  // Time of the last arrival held (start time when empty).
  double last_time() const { return arrivals_.empty() ? now_ : arrivals_.back().t; }

 private:
  std::vector<Arrival> arrivals_;
  std::size_t cursor_ = 0;
  double now_ = 0.0;
};

}  // namespace hawkesq

#endif  // HAWKESQ_HAWKES_HPP_
