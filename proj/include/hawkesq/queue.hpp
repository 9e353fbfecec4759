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

#ifndef HAWKESQ_QUEUE_HPP_
#define HAWKESQ_QUEUE_HPP_

#include <array>
#include <cstddef>
#include <optional>
#include <ostream>
#include <span>
#include <utility>
#include <vector>

#include "hawkesq/hawkes.hpp"

namespace hawkesq {

// Workload W and start of the current observed busy period. While the
// server is idle last_idle == t, so X = t - last_idle is the observed busy
// period in both cases.
struct QueueState {
  double t = 0.0;
  double workload = 0.0;
  double last_idle = 0.0;

  double busy_time() const { return t - last_idle; }

  // Fresh state with W(t) = workload and X(t) = busy (ignored when idle).
  static QueueState at(double t, double workload, double busy = 0.0);
};

enum class SegmentStart { kStart, kArrival, kEmptied };

// Workload on [t_start, t_end] is w_start + slope (t - t_start) with slope in
// {-mu, 0}. Drain segments never cross zero; the queue is split at the
// emptying instant and an idle segment (w_start = 0, slope 0) follows.
struct Segment {
  double t_start = 0.0;
  double t_end = 0.0;
  double w_start = 0.0;
  double x_start = 0.0;
  double slope = 0.0;
  SegmentStart start = SegmentStart::kStart;

  bool busy() const { return slope != 0.0; }
  double workload_at(double t) const;
  double busy_at(double t) const;
  double w_end() const { return workload_at(t_end); }
};

struct QueuePath {
  double mu = 0.0;
  double t_begin = 0.0;
  double t_end = 0.0;
  QueueState begin_state;
  std::vector<Segment> segments;  // only with EvolveOptions::record_segments
  double int_w = 0.0;             // integral of W over the call
  double int_x = 0.0;             // integral of X over the call
  double idle_l = 0.0;            // mu * idle time
  std::size_t arrivals = 0;
};

// Cycle-local window [begin, end], offsets from the start of the call.
struct Window {
  double begin = 0.0;
  double end = 0.0;
};

inline constexpr int kMaxPower = 4;

struct CycleStats {
  double int_w_full = 0.0;
  Window window;
  double int_w_window = 0.0;
  double int_x_window = 0.0;
  // Integrals of W^p and X^p over the window for p = 1..kMaxPower (index p).
  std::array<double, kMaxPower + 1> w_power_window{};
  std::array<double, kMaxPower + 1> x_power_window{};
  QueueState end_state;
  HawkesMemory end_memory;
};

struct EvolveOptions {
  bool record_segments = false;
  bool snapshot_memory = true;
  std::optional<Window> window;  // default: the whole call
};

struct EvolveResult {
  QueuePath path;
  CycleStats stats;
};

// Runs the fluid queue for `horizon` time units from `state`, pulling all
// arrivals in (state.t, state.t + horizon] from `source`. Between arrivals
// the workload drains at rate mu, reflected at 0; an arrival exactly at the
// emptying instant is processed after the emptying.
EvolveResult evolve(const QueueState& state, ArrivalSource& source, double mu, double horizon,
                    const EvolveOptions& options = {});

// Values on a recorded path. Right-continuous at arrivals; the *_before
// variants return left limits.
double workload_at(const QueuePath& path, double t);
double workload_before(const QueuePath& path, double t);
double busy_at(const QueuePath& path, double t);

// Integral of W over [a, b] from the recorded segments.
double integrate_workload(const QueuePath& path, double a, double b);

// Workload of the M/GI/1 queue fed at cluster departure times delta_l with
// job sizes S_l, started empty at time 0 and run to `horizon`. Clusters that
// departed before 0 are ignored.
QueuePath dominant_mg1_path(std::span<const Cluster> clusters, double mu, double horizon);

// J0<-(t): jobs already arrived (before t) from clusters with t1 < t <= delta.
double backward_residual(std::span<const Cluster> clusters, double t);

struct TailPoint {
  double x = 0.0;
  double log_survival = 0.0;  // log of the empirical P(W >= x)
};

// Empirical log-survival curve at up to `max_points` distinct sample values
// (evenly spaced in rank). Needs at least 10^4 samples.
std::vector<TailPoint> tail_profile(std::span<const double> samples,
                                    std::size_t max_points = 200);

// Least-squares slope of log_survival against x over points with x in [lo, hi].
double tail_slope(std::span<const TailPoint> profile, double lo, double hi);

// `t,W,X,event` rows at every segment start, plus a final `end` row.
void write_path_csv(std::ostream& out, const QueuePath& path);

}  // namespace hawkesq

#endif  // HAWKESQ_QUEUE_HPP_
