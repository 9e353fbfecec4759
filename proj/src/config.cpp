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

#include "hawkesq/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "hawkesq/error.hpp"

namespace hawkesq {

using nlohmann::json;

namespace {

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

// Walks one JSON object, recording which keys were read.
class Reader {
 public:
  Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(label() + " must be an object");
  }

  void read(const char* key, double& out) {
    if (const json* v = take(key)) {
      if (!v->is_number()) fail(key, "must be a number");
      out = v->get<double>();
      if (!std::isfinite(out)) fail(key, "must be finite");
    }
  }
  void read(const char* key, int& out) {
    if (const json* v = take(key)) {
      if (!v->is_number_integer()) fail(key, "must be an integer");
      const auto x = v->get<std::int64_t>();
      if (x < -2'000'000'000 || x > 2'000'000'000) fail(key, "is out of range");
      out = static_cast<int>(x);
    }
  }
  void read(const char* key, std::size_t& out) {
    if (const json* v = take(key)) {
      if (!v->is_number_integer() || v->get<std::int64_t>() < 0) {
        fail(key, "must be a non-negative integer");
      }
      out = v->get<std::size_t>();
    }
  }
  void read(const char* key, std::uint64_t& out, bool) {
    if (const json* v = take(key)) {
      if (!v->is_number_unsigned()) fail(key, "must be a non-negative integer");
      out = v->get<std::uint64_t>();
    }
  }
  void read(const char* key, bool& out) {
    if (const json* v = take(key)) {
      if (!v->is_boolean()) fail(key, "must be true or false");
      out = v->get<bool>();
    }
  }
  void read(const char* key, std::string& out) {
    if (const json* v = take(key)) {
      if (!v->is_string()) fail(key, "must be a string");
      out = v->get<std::string>();
    }
  }
  void read(const char* key, std::optional<double>& out) {
    if (const json* v = take(key)) {
      if (v->is_null()) {
        out.reset();
        return;
      }
      if (!v->is_number()) fail(key, "must be a number or null");
      out = v->get<double>();
    }
  }
  template <typename T>
  void read(const char* key, std::vector<T>& out) {
    if (const json* v = take(key)) {
      if (!v->is_array() || v->empty()) fail(key, "must be a non-empty array");
      out.clear();
      for (const json& e : *v) {
        if constexpr (std::is_integral_v<T>) {
          if (!e.is_number_integer()) fail(key, "must contain integers");
        } else {
          if (!e.is_number()) fail(key, "must contain numbers");
        }
        out.push_back(e.get<T>());
      }
    }
  }
  void object(const char* key, const std::function<void(Reader&)>& fn) {
    if (const json* v = take(key)) {
      Reader child(*v, join(path_, key));
      fn(child);
      child.finish();
    }
  }

  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      if (!seen_.count(key)) throw ConfigError("unknown config key: " + join(path_, key));
    }
  }

 private:
  const json* take(const char* key) {
    seen_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }
  [[noreturn]] void fail(const char* key, const char* what) const {
    throw ConfigError("config key " + join(path_, key) + " " + what);
  }
  std::string label() const { return path_.empty() ? "config" : "config key " + path_; }

  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

void read_cost(Reader& r, StaffingCost& cost) {
  std::string kind = cost.kind == StaffingCost::Kind::kQuadratic ? "quadratic" : "linear";
  r.read("kind", kind);
  if (kind == "quadratic") {
    cost.kind = StaffingCost::Kind::kQuadratic;
  } else if (kind == "linear") {
    cost.kind = StaffingCost::Kind::kLinear;
  } else {
    throw ConfigError("config key goliq.cost.kind must be \"quadratic\" or \"linear\"");
  }
  r.read("h0", cost.h0);
  r.read("c0", cost.c0);
}

void read_init(Reader& r, CouplingInit& init) {
  r.read("W", init.workload);
  r.read("X", init.busy);
  r.read("warm_memory", init.warm_memory);
}

json init_json(const CouplingInit& i) {
  return {{"W", i.workload}, {"X", i.busy}, {"warm_memory", i.warm_memory}};
}

void require(bool ok, const std::string& key, const std::string& what) {
  if (!ok) throw ConfigError("config key " + key + " " + what);
}

}  // namespace

HawkesParams RunConfig::hawkes_params() const {
  ExcitationKernel k = [&] {
    if (kernel.kind == "exponential") return ExcitationKernel::exponential(kernel.alpha, kernel.beta);
    if (kernel.kind == "gamma2") return ExcitationKernel::gamma_shape2(kernel.alpha, kernel.beta);
    throw ConfigError("config key hawkes.kernel.kind must be \"exponential\" or \"gamma2\"");
  }();
  ServiceDistribution v = [&] {
    if (service.kind == "exponential") return ServiceDistribution::exponential();
    if (service.kind == "deterministic") return ServiceDistribution::deterministic();
    if (service.kind == "lognormal") return ServiceDistribution::lognormal(service.param);
    if (service.kind == "erlang") {
      require(service.param >= 1.0 && service.param == std::floor(service.param) &&
                  service.param <= 1e6,
              "service.param", "must be a positive integer for erlang");
      return ServiceDistribution::erlang(static_cast<int>(service.param));
    }
    throw ConfigError(
        "config key service.kind must be one of exponential, erlang, deterministic, lognormal");
  }();
  return {lambda0, k, v};
}

ConstantsInputs RunConfig::constants_inputs() const {
  const HawkesParams p = hawkes_params();
  return {lambda0, p.kernel, p.service, mu_lo, eps, mu_hi};
}

GoliqConfig RunConfig::goliq_config() const {
  GoliqConfig c = goliq;
  c.mu_lo = mu_lo;
  c.mu_hi = mu_hi;
  c.eps = eps;
  c.warm_tol = warm_tol;
  return c;
}

NgsOptions RunConfig::ngs_options() const {
  NgsOptions o;
  o.horizon = ngs.horizon;
  o.warm_fraction = ngs.warm_fraction;
  o.replications = replications;
  o.warm_tol = warm_tol;
  o.threads = threads;
  return o;
}

SweepOptions RunConfig::sweep_options() const {
  SweepOptions o;
  o.replications = replications;
  o.cycles = goliq.cycles;
  o.threads = threads;
  o.warm_tol = warm_tol;
  return o;
}

void RunConfig::validate() const {
  require(lambda0 > 0.0, "hawkes.lambda0", "must be positive");
  require(kernel.beta > 0.0, "hawkes.kernel.beta", "must be positive");
  require(kernel.alpha >= 0.0, "hawkes.kernel.alpha", "must be >= 0");
  require(warm_tol > 0.0 && warm_tol < 1.0, "warm_tol", "must lie in (0, 1)");
  require(replications >= 1, "replications", "must be >= 1");
  require(threads >= 1, "threads", "must be >= 1");
  require(eps > 0.0, "stability.eps", "must be positive");
  require(mu_lo < mu_hi, "stability.mu_lo", "must be below stability.mu_hi");
  require(simulate.horizon > 0.0, "simulate.horizon", "must be positive");
  require(simulate.mu > 0.0, "simulate.mu", "must be positive");
  require(ngs.horizon > 0.0, "ngs.T", "must be positive");
  require(ngs.grid_step > 0.0, "ngs.grid.step", "must be positive");
  require(ngs.grid_lo <= ngs.grid_hi, "ngs.grid.lo", "must be <= ngs.grid.hi");
  require(coupling.horizon > 0.0, "coupling.horizon", "must be positive");
  require(moments.horizon > 0.0, "moments.horizon", "must be positive");
  require(gradcheck.horizon > 0.0, "gradcheck.T", "must be positive");
  require(gradcheck.delta > 0.0, "gradcheck.delta", "must be positive");
  require(sweep.heavy_traffic_cycles >= 1, "sweep.heavy_traffic_L", "must be >= 1");
  require(coupling.grid_points >= 2, "coupling.grid_points", "must be >= 2");

  const HawkesParams p = hawkes_params();  // kernel checks (m < 1, density)
  const double rate = p.arrival_rate();
  if (!(rate < mu_lo - eps)) {
    std::ostringstream msg;
    msg << "stability condition violated: lambda0 / (1 - m) = " << rate
        << " is not below stability.mu_lo - stability.eps = " << mu_lo - eps;
    throw Unstable(msg.str());
  }
  goliq_config().validate(rate);
}

json RunConfig::to_json() const {
  const char* cost_kind = goliq.cost.kind == StaffingCost::Kind::kQuadratic ? "quadratic" : "linear";
  json j;
  j["hawkes"] = {{"lambda0", lambda0},
                 {"kernel", {{"kind", kernel.kind}, {"alpha", kernel.alpha}, {"beta", kernel.beta}}}};
  j["service"] = {{"kind", service.kind}, {"param", service.param}};
  j["stability"] = {{"mu_lo", mu_lo}, {"mu_hi", mu_hi}, {"eps", eps}};
  j["goliq"] = {{"L", goliq.cycles},
                {"a_T", goliq.a_t},
                {"c_T", goliq.c_t},
                {"c_eta", goliq.c_eta},
                {"xi", goliq.xi},
                {"mu_init", goliq.mu_init},
                {"cost", {{"kind", cost_kind}, {"h0", goliq.cost.h0}, {"c0", goliq.cost.c0}}},
                {"f_star", f_star ? json(*f_star) : json(nullptr)}};
  j["ngs"] = {{"T", ngs.horizon},
              {"warm_fraction", ngs.warm_fraction},
              {"grid", {{"lo", ngs.grid_lo}, {"hi", ngs.grid_hi}, {"step", ngs.grid_step}}}};
  j["simulate"] = {{"mu", simulate.mu},
                   {"horizon", simulate.horizon},
                   {"warm", simulate.warm},
                   {"W0", simulate.w0},
                   {"X0", simulate.x0}};
  j["coupling"] = {{"mu", coupling.mu},
                   {"horizon", coupling.horizon},
                   {"grid_points", coupling.grid_points},
                   {"init1", init_json(coupling.init1)},
                   {"init2", init_json(coupling.init2)}};
  j["moments"] = {{"mu", moments.mu},
                  {"horizon", moments.horizon},
                  {"burn_in", moments.burn_in},
                  {"eps", moments.eps},
                  {"sample_spacing", moments.sample_spacing}};
  j["gradcheck"] = {{"mu", gradcheck.mu}, {"delta", gradcheck.delta}, {"T", gradcheck.horizon}};
  j["sweep"] = {{"a_values", sweep.a_values},
                {"n_values", sweep.n_values},
                {"n_values_full", sweep.n_values_full},
                {"heavy_traffic_L", sweep.heavy_traffic_cycles},
                {"acf_gaps", sweep.acf_gaps},
                {"c_eta_values", sweep.c_eta_values},
                {"c_T_values", sweep.c_t_values}};
  j["warm_tol"] = warm_tol;
  j["seed"] = seed;
  j["replications"] = replications;
  j["threads"] = threads;
  j["output_dir"] = output_dir;
  return j;
}

RunConfig parse_config(const json& doc) {
  RunConfig c;
  Reader root(doc, "");
  root.object("hawkes", [&](Reader& r) {
    r.read("lambda0", c.lambda0);
    r.object("kernel", [&](Reader& k) {
      k.read("kind", c.kernel.kind);
      k.read("alpha", c.kernel.alpha);
      k.read("beta", c.kernel.beta);
    });
  });
  root.object("service", [&](Reader& r) {
    r.read("kind", c.service.kind);
    r.read("param", c.service.param);
  });
  root.object("stability", [&](Reader& r) {
    r.read("mu_lo", c.mu_lo);
    r.read("mu_hi", c.mu_hi);
    r.read("eps", c.eps);
  });
  root.object("goliq", [&](Reader& r) {
    r.read("L", c.goliq.cycles);
    r.read("a_T", c.goliq.a_t);
    r.read("c_T", c.goliq.c_t);
    r.read("c_eta", c.goliq.c_eta);
    r.read("xi", c.goliq.xi);
    r.read("mu_init", c.goliq.mu_init);
    r.read("f_star", c.f_star);
    r.object("cost", [&](Reader& k) { read_cost(k, c.goliq.cost); });
  });
  root.object("ngs", [&](Reader& r) {
    r.read("T", c.ngs.horizon);
    r.read("warm_fraction", c.ngs.warm_fraction);
    r.object("grid", [&](Reader& g) {
      g.read("lo", c.ngs.grid_lo);
      g.read("hi", c.ngs.grid_hi);
      g.read("step", c.ngs.grid_step);
    });
  });
  root.object("simulate", [&](Reader& r) {
    r.read("mu", c.simulate.mu);
    r.read("horizon", c.simulate.horizon);
    r.read("warm", c.simulate.warm);
    r.read("W0", c.simulate.w0);
    r.read("X0", c.simulate.x0);
  });
  root.object("coupling", [&](Reader& r) {
    r.read("mu", c.coupling.mu);
    r.read("horizon", c.coupling.horizon);
    r.read("grid_points", c.coupling.grid_points);
    r.object("init1", [&](Reader& i) { read_init(i, c.coupling.init1); });
    r.object("init2", [&](Reader& i) { read_init(i, c.coupling.init2); });
  });
  root.object("moments", [&](Reader& r) {
    r.read("mu", c.moments.mu);
    r.read("horizon", c.moments.horizon);
    r.read("burn_in", c.moments.burn_in);
    r.read("eps", c.moments.eps);
    r.read("sample_spacing", c.moments.sample_spacing);
  });
  root.object("gradcheck", [&](Reader& r) {
    r.read("mu", c.gradcheck.mu);
    r.read("delta", c.gradcheck.delta);
    r.read("T", c.gradcheck.horizon);
  });
  root.object("sweep", [&](Reader& r) {
    r.read("a_values", c.sweep.a_values);
    r.read("n_values", c.sweep.n_values);
    r.read("n_values_full", c.sweep.n_values_full);
    r.read("heavy_traffic_L", c.sweep.heavy_traffic_cycles);
    r.read("acf_gaps", c.sweep.acf_gaps);
    r.read("c_eta_values", c.sweep.c_eta_values);
    r.read("c_T_values", c.sweep.c_t_values);
  });
  root.read("warm_tol", c.warm_tol);
  root.read("seed", c.seed, true);
  root.read("replications", c.replications);
  root.read("threads", c.threads);
  root.read("output_dir", c.output_dir);
  root.finish();
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  json doc;
  try {
    doc = json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ConfigError("config file " + path + " is not valid JSON: " + e.what());
  }
  return parse_config(doc);
}

std::string config_hash(const json& resolved) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : resolved.dump()) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace hawkesq
