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

#include "hawkesq/queue.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <string>

#include "hawkesq/error.hpp"
#include "hawkesq/stats.hpp"

namespace hawkesq {

namespace {

// Integral over an interval of length `len` of a linear function going from
// a to b, raised to the power p: len / (p + 1) * sum_j a^(p-j) b^j.
double linear_power_integral(double a, double b, double len, int p) {
  std::array<double, kMaxPower + 1> a_pow{1.0};
  std::array<double, kMaxPower + 1> b_pow{1.0};
  for (int j = 1; j <= p; ++j) {
    a_pow[j] = a_pow[j - 1] * a;
    b_pow[j] = b_pow[j - 1] * b;
  }
  double sum = 0.0;
  for (int j = 0; j <= p; ++j) sum += a_pow[p - j] * b_pow[j];
  return len * sum / (p + 1);
}

class Accumulator {
 public:
  Accumulator(double window_begin, double window_end, bool record)
      : wb_(window_begin), we_(window_end), record_(record) {}

  void add(const Segment& seg, CycleStats& stats, QueuePath& path) {
    const double len = seg.t_end - seg.t_start;
    if (len > 0.0 && seg.busy()) {
      const double w1 = seg.w_end();
      int_w_.add(0.5 * (seg.w_start + w1) * len);
      int_x_.add((seg.x_start + 0.5 * len) * len);
      const double a = std::max(seg.t_start, wb_);
      const double b = std::min(seg.t_end, we_);
      if (b > a) {
        const double wa = seg.workload_at(a);
        const double wbv = seg.workload_at(b);
        const double xa = seg.busy_at(a);
        const double xb = seg.busy_at(b);
        for (int p = 1; p <= kMaxPower; ++p) {
          stats.w_power_window[p] += linear_power_integral(wa, wbv, b - a, p);
          stats.x_power_window[p] += linear_power_integral(xa, xb, b - a, p);
        }
      }
    }
    if (record_) path.segments.push_back(seg);
  }

  double int_w() const { return int_w_.value(); }
  double int_x() const { return int_x_.value(); }

 private:
  double wb_;
  double we_;
  bool record_;
  KahanSum int_w_;
  KahanSum int_x_;
};

}  // namespace

QueueState QueueState::at(double t, double workload, double busy) {
  if (!(workload >= 0.0)) throw ConfigError("initial workload must be >= 0");
  if (!(busy >= 0.0)) throw ConfigError("initial busy period must be >= 0");
  QueueState s;
  s.t = t;
  s.workload = workload;
  s.last_idle = workload > 0.0 ? t - busy : t;
  return s;
}

double Segment::workload_at(double t) const {
  return std::max(w_start + slope * (t - t_start), 0.0);
}

double Segment::busy_at(double t) const { return busy() ? x_start + (t - t_start) : 0.0; }

EvolveResult evolve(const QueueState& state, ArrivalSource& source, double mu, double horizon,
                    const EvolveOptions& options) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw InvalidHorizon("horizon must be a positive finite number");
  }
  if (!(mu > 0.0) || !std::isfinite(mu)) throw ConfigError("service rate mu must be positive");
  if (!(state.workload >= 0.0) || state.last_idle > state.t) {
    throw ConfigError("invalid queue state");
  }

  const double t0 = state.t;
  const double t_end = t0 + horizon;
  const Window window = options.window.value_or(Window{0.0, horizon});
  if (window.begin < 0.0 || window.end > horizon || window.begin > window.end) {
    throw ConfigError("statistics window must lie within [0, horizon]");
  }

  EvolveResult result;
  QueuePath& path = result.path;
  CycleStats& stats = result.stats;
  path.mu = mu;
  path.t_begin = t0;
  path.t_end = t_end;
  path.begin_state = state;
  stats.window = window;

  std::vector<Arrival> arrivals;
  source.next_until(t_end, arrivals);
  path.arrivals = arrivals.size();
  if (options.record_segments) path.segments.reserve(2 * arrivals.size() + 2);

  Accumulator acc(t0 + window.begin, t0 + window.end, options.record_segments);
  double t = t0;
  double w = state.workload;
  double last_idle = w > 0.0 ? state.last_idle : t0;
  SegmentStart reason = SegmentStart::kStart;
  double idle_time = 0.0;

  // Moves the queue from t to `target` with no arrival in between.
  auto advance = [&](double target) {
    if (w > 0.0) {
      const double empty_at = t + w / mu;
      if (empty_at <= target) {
        acc.add({t, empty_at, w, t - last_idle, -mu, reason}, stats, path);
        t = empty_at;
        w = 0.0;
        last_idle = t;
        reason = SegmentStart::kEmptied;
      } else {
        acc.add({t, target, w, t - last_idle, -mu, reason}, stats, path);
        w = std::max(w - mu * (target - t), 0.0);
        t = target;
        return;
      }
    }
    if (target > t) {
      acc.add({t, target, 0.0, 0.0, 0.0, reason}, stats, path);
      idle_time += target - t;
      t = target;
    }
    last_idle = t;
  };

  for (const Arrival& a : arrivals) {
    advance(a.t);
    if (w == 0.0) last_idle = a.t;
    w += a.size;
    reason = SegmentStart::kArrival;
  }
  advance(t_end);

  path.int_w = acc.int_w();
  path.int_x = acc.int_x();
  path.idle_l = mu * idle_time;
  stats.int_w_full = path.int_w;
  stats.int_w_window = stats.w_power_window[1];
  stats.int_x_window = stats.x_power_window[1];
  stats.end_state.t = t_end;
  stats.end_state.workload = w;
  stats.end_state.last_idle = w > 0.0 ? last_idle : t_end;
  if (options.snapshot_memory) stats.end_memory = source.memory();
  return result;
}

namespace {

// Index of the segment with t_start <= t < t_end (right-continuous lookup).
std::ptrdiff_t segment_index(const QueuePath& path, double t) {
  const auto& segs = path.segments;
  auto it = std::upper_bound(segs.begin(), segs.end(), t,
                             [](double v, const Segment& s) { return v < s.t_start; });
  return static_cast<std::ptrdiff_t>(it - segs.begin()) - 1;
}

}  // namespace

double workload_at(const QueuePath& path, double t) {
  if (path.segments.empty() || t < path.t_begin || t > path.t_end) {
    throw ConfigError("workload_at: time outside the recorded path");
  }
  const auto i = segment_index(path, t);
  if (i < 0) return path.begin_state.workload;
  const Segment& s = path.segments[static_cast<std::size_t>(i)];
  return s.workload_at(std::min(t, s.t_end));
}

double workload_before(const QueuePath& path, double t) {
  if (path.segments.empty() || t < path.t_begin || t > path.t_end) {
    throw ConfigError("workload_before: time outside the recorded path");
  }
  const auto& segs = path.segments;
  auto it = std::lower_bound(segs.begin(), segs.end(), t,
                             [](const Segment& s, double v) { return s.t_start < v; });
  if (it == segs.begin()) return path.begin_state.workload;
  --it;
  return it->workload_at(std::min(t, it->t_end));
}

double busy_at(const QueuePath& path, double t) {
  if (path.segments.empty() || t < path.t_begin || t > path.t_end) {
    throw ConfigError("busy_at: time outside the recorded path");
  }
  const auto i = segment_index(path, t);
  if (i < 0) return path.begin_state.busy_time();
  const Segment& s = path.segments[static_cast<std::size_t>(i)];
  return s.busy_at(std::min(t, s.t_end));
}

double integrate_workload(const QueuePath& path, double a, double b) {
  double total = 0.0;
  for (const Segment& s : path.segments) {
    const double lo = std::max(a, s.t_start);
    const double hi = std::min(b, s.t_end);
    if (hi <= lo || !s.busy()) continue;
    total += 0.5 * (s.workload_at(lo) + s.workload_at(hi)) * (hi - lo);
  }
  return total;
}

QueuePath dominant_mg1_path(std::span<const Cluster> clusters, double mu, double horizon) {
  std::vector<Arrival> arrivals;
  for (const Cluster& c : clusters) {
    if (c.departure_time > 0.0 && c.departure_time <= horizon) {
      arrivals.push_back({c.departure_time, c.total_job, c.id});
    }
  }
  std::sort(arrivals.begin(), arrivals.end(), [](const Arrival& a, const Arrival& b) {
    return a.t != b.t ? a.t < b.t : a.cluster_id < b.cluster_id;
  });
  ReplaySource source(std::move(arrivals), 0.0);
  EvolveOptions options;
  options.record_segments = true;
  options.snapshot_memory = false;
  return evolve(QueueState{}, source, mu, horizon, options).path;
}

double backward_residual(std::span<const Cluster> clusters, double t) {
  double total = 0.0;
  for (const Cluster& c : clusters) {
    if (!(c.arrival_time() < t && t <= c.departure_time)) continue;
    for (const HawkesEvent& e : c.events) {
      if (e.t < t) total += e.size;
    }
  }
  return total;
}

std::vector<TailPoint> tail_profile(std::span<const double> samples, std::size_t max_points) {
  if (samples.size() < 10'000) {
    throw InsufficientData("tail_profile needs at least 10^4 samples, got " +
                           std::to_string(samples.size()));
  }
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());

  // Start index of every run of equal values.
  std::vector<std::size_t> starts;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (i == 0 || sorted[i] != sorted[i - 1]) starts.push_back(i);
  }
  const std::size_t points = std::max<std::size_t>(1, std::min(max_points, starts.size()));
  std::vector<TailPoint> out;
  out.reserve(points);
  for (std::size_t j = 0; j < points; ++j) {
    const std::size_t pick =
        points == 1 ? 0 : j * (starts.size() - 1) / (points - 1);
    const std::size_t i = starts[pick];
    out.push_back({sorted[i], std::log((n - static_cast<double>(i)) / n)});
  }
  return out;
}

double tail_slope(std::span<const TailPoint> profile, double lo, double hi) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::size_t n = 0;
  for (const TailPoint& p : profile) {
    if (p.x < lo || p.x > hi) continue;
    sx += p.x;
    sy += p.log_survival;
    sxx += p.x * p.x;
    sxy += p.x * p.log_survival;
    ++n;
  }
  if (n < 2) throw InsufficientData("tail_slope needs at least two points in range");
  const double dn = static_cast<double>(n);
  return (dn * sxy - sx * sy) / (dn * sxx - sx * sx);
}

void write_path_csv(std::ostream& out, const QueuePath& path) {
  auto num = [](double v) {
    char buf[32];
    auto r = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, r.ptr);
  };
  out << "t,W,X,event\n";
  for (const Segment& s : path.segments) {
    const char* event = s.start == SegmentStart::kArrival   ? "arrival"
                        : s.start == SegmentStart::kEmptied ? "empty"
                                                            : "start";
    out << num(s.t_start) << ',' << num(s.w_start) << ',' << num(s.x_start) << ',' << event
        << '\n';
  }
  if (!path.segments.empty()) {
    const Segment& s = path.segments.back();
    out << num(s.t_end) << ',' << num(s.w_end()) << ',' << num(s.busy_at(s.t_end)) << ",end\n";
  }
}

}  // namespace hawkesq
