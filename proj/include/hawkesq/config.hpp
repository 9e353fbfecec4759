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

#ifndef HAWKESQ_CONFIG_HPP_
#define HAWKESQ_CONFIG_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hawkesq/constants.hpp"
#include "hawkesq/experiments.hpp"
#include "hawkesq/goliq.hpp"
#include "hawkesq/hawkes.hpp"
#include "json.hpp"

namespace hawkesq {

struct KernelSpec {
  std::string kind = "gamma2";  // "exponential" | "gamma2"
  double alpha = 2.0;
  double beta = 2.0;
};

struct ServiceSpec {
  std::string kind = "erlang";  // "exponential" | "erlang" | "deterministic" | "lognormal"
  double param = 2.0;           // Erlang phases or log-normal sigma
};

struct SimulateSpec {
  double mu = 2.84;
  double horizon = 1e4;
  bool warm = true;
  double w0 = 0.0;
  double x0 = 0.0;
};

struct NgsSpec {
  double horizon = 2e4;
  double warm_fraction = 0.5;
  double grid_lo = 2.5;
  double grid_hi = 3.5;
  double grid_step = 0.02;
};

struct CouplingSpec {
  double mu = 2.84;
  double horizon = 200.0;
  int grid_points = 200;
  CouplingInit init1{0.0, 0.0, true};
  CouplingInit init2{10.0, 0.0, true};
};

struct MomentSpec {
  double mu = 2.84;
  double horizon = 1e4;
  double burn_in = 1e3;
  double eps = 0.1;
  double sample_spacing = 1.0;
};

struct GradcheckSpec {
  double mu = 2.84;
  double delta = 0.1;
  double horizon = 2e4;
};

struct SweepSpec {
  std::vector<double> a_values{0.0, 0.2, 0.4, 0.6, 0.8, 1.0, 1.2, 1.4, 1.6, 1.8};
  std::vector<int> n_values{5, 25};
  std::vector<int> n_values_full{5, 25, 45, 65, 85, 105};
  int heavy_traffic_cycles = 300;  // linear cost converges slowly at L = 100
  std::size_t acf_gaps = 1'000'000;
  std::vector<double> c_eta_values{0.5, 1.0, 3.0, 5.0};
  std::vector<double> c_t_values{10.0, 20.0, 30.0};
};

// Resolved run configuration. Defaults are the base Hawkes/GI/1 example:
// lambda0 = 1, kernel 2 t e^{-2t}, Erlang-2 jobs, cost 0.5 mu^2 + 0.5 E[W].
struct RunConfig {
  double lambda0 = 1.0;
  KernelSpec kernel;
  ServiceSpec service;
  double mu_lo = 2.5;
  double mu_hi = 10.0;
  double eps = 0.1;
  GoliqConfig goliq;
  std::optional<double> f_star;  // regret benchmark; computed by NGS when absent
  NgsSpec ngs;
  SimulateSpec simulate;
  CouplingSpec coupling;
  MomentSpec moments;
  GradcheckSpec gradcheck;
  SweepSpec sweep;
  double warm_tol = 1e-3;
  std::uint64_t seed = 1;
  int replications = 20;
  int threads = 1;
  std::string output_dir = "out";

  HawkesParams hawkes_params() const;
  ConstantsInputs constants_inputs() const;
  // GoliqConfig with the stability block and warm_tol folded in.
  GoliqConfig goliq_config() const;
  NgsOptions ngs_options() const;
  SweepOptions sweep_options() const;

  // Rejects invalid values (ConfigError naming the key) and checks the
  // stability condition lambda0 / (1 - m) < mu_lo - eps (Unstable).
  void validate() const;

  nlohmann::json to_json() const;
};

// Overlays `doc` on the defaults. Unknown keys and type mismatches throw
// ConfigError naming the key path, e.g. "goliq.cost.h0".
RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::string& path);

// 64-bit FNV-1a of the canonical JSON dump, as 16 hex digits.
std::string config_hash(const nlohmann::json& resolved);

}  // namespace hawkesq

#endif  // HAWKESQ_CONFIG_HPP_
