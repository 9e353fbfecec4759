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

#ifndef HAWKESQ_CONSTANTS_HPP_
#define HAWKESQ_CONSTANTS_HPP_

#include "json.hpp"
#include <string>
#include <vector>

#include "hawkesq/kernel.hpp"
#include "hawkesq/service.hpp"

namespace hawkesq {

// Right end of the Borel MGF domain in the log variable: m - 1 - log m.
double borel_log_domain(double m);

// E[exp(s |C|)] for |C| ~ Borel(m): the smallest root G of
// G = e^s exp(m (G - 1)), i.e. -W0(-m e^(s - m)) / m.
// m = 0 gives e^s. Throws OutOfDomain for s beyond borel_log_domain(m).
double borel_mgf(double m, double s);

// Same quantity by damped fixed-point iteration G <- e^s exp(m (G - 1)) from
// G = 0, which climbs monotonically to the smallest root. Independent of the
// Lambert W route; slow near the domain boundary.
double borel_mgf_fixed_point(double m, double s, double damping = 1.0, int max_iter = 1'000'000);

// Borel pmf (m k)^(k-1) e^(-m k) / k!.
double borel_pmf(double m, int k);

// MGF of the total cluster job S = sum of |C| i.i.d. job sizes:
// psi_S(theta) = borel_mgf(m, log psi_V(theta)).
double psi_cluster_job(double m, const ServiceDistribution& service, double theta);

// Largest theta with psi_S(theta) finite.
double psi_cluster_job_sup(double m, const ServiceDistribution& service);

struct ConstantsInputs {
  double lambda0 = 1.0;
  ExcitationKernel kernel = ExcitationKernel::gamma_shape2(2.0, 2.0);
  ServiceDistribution service = ServiceDistribution::erlang(2);
  double mu_lo = 2.5;
  double eps = 0.1;
  double mu_hi = 10.0;
};

struct ConstantsBundle {
  ConstantsInputs inputs;
  double theta0 = 0.0;
  double theta0_prime = 0.0;
  double theta_bar = 0.0;
  double theta1 = 0.0;
  double eta1 = 0.0;
  double theta = 0.0;
  double eta = 0.0;
};

struct ConstantsCheck {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

// Light-tail / ergodicity constants, chosen constructively:
//   theta0 : log psi_b(theta0) = (m - 1 - log m) / 2
//   theta0': psi_V(theta0') = psi_b(theta0 / 2) (lower bisection end)
//   theta_bar: positive root of h(theta) = lambda0/(mu_lo-eps) (psi_S(theta)-1) - theta
//   theta1 = min(theta0', theta_bar / 2)
//   eta1 = -h(theta1) / 2
//   (theta, eta) = min(theta0/2, theta1) / (6 max(mu_hi,1) (eta1 + 2 theta1)) (theta1, eta1)
// Throws Unstable if lambda0/(1-m) >= mu_lo - eps, NoRoot if theta_bar is not
// inside the MGF domain, OutOfDomain for m = 0 or a service law without a
// finite MGF near 0. Every defining relation is re-checked before returning.
ConstantsBundle solve_constants(const ConstantsInputs& inputs);

// h(theta) above.
double theta_bar_function(const ConstantsInputs& inputs, double theta);

// The five defining (in)equalities evaluated by substitution.
std::vector<ConstantsCheck> verify_constants(const ConstantsBundle& bundle);

nlohmann::json to_json(const ConstantsBundle& bundle);

}  // namespace hawkesq

#endif  // HAWKESQ_CONSTANTS_HPP_
