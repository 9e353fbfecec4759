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

#ifndef HAWKESQ_SERVICE_HPP_
#define HAWKESQ_SERVICE_HPP_

#include <string>

#include "hawkesq/random.hpp"

namespace hawkesq {

enum class ServiceKind { kExponential, kErlang, kDeterministic, kLogNormal };

// Job-size law V, always normalized to E[V] = 1. The server drains work at
// rate mu, so a job of size V takes V / mu time units.
class ServiceDistribution {
 public:
  static ServiceDistribution exponential() { return {ServiceKind::kExponential, 1.0}; }
  // Erlang with `phases` phases of rate `phases` each.
  static ServiceDistribution erlang(int phases);
  static ServiceDistribution deterministic() { return {ServiceKind::kDeterministic, 0.0}; }
  // exp(N(-sigma^2/2, sigma^2)).
  static ServiceDistribution lognormal(double sigma);

  ServiceKind kind() const { return kind_; }
  // Erlang phase count or log-normal sigma; unused otherwise.
  double parameter() const { return param_; }

  double sample(Rng& rng) const;
  double mean() const { return 1.0; }
  double second_moment() const;

  // psi_V(theta); +inf outside the domain. The log-normal MGF is infinite
  // for every theta > 0.
  double mgf(double theta) const;
  double log_mgf(double theta) const;
  // Supremum of the MGF domain (+inf for deterministic, 0 for log-normal).
  double mgf_sup() const;

  std::string name() const;

 private:
  ServiceDistribution(ServiceKind kind, double param) : kind_(kind), param_(param) {}

  ServiceKind kind_;
  double param_;
};

}  // namespace hawkesq

#endif  // HAWKESQ_SERVICE_HPP_
