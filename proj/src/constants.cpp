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

#include "hawkesq/constants.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "hawkesq/error.hpp"
#include "hawkesq/lambert_w.hpp"

namespace hawkesq {

namespace detail {
double lambert_w0_with_offset(double x, double q);
}  // namespace detail

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Bisection for an increasing-crossing predicate: `below(theta)` is true on
// (lo, root) and false on (root, hi). Returns the final lower end, which
// still satisfies `below`.
double bisect_lower(const std::function<bool(double)>& below, double lo, double hi) {
  for (int i = 0; i < 400 && hi - lo > 1e-14 * std::max(1.0, hi); ++i) {
    const double mid = 0.5 * (lo + hi);
    if (below(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

void require_m(double m, const char* what) {
  if (!(m > 0.0 && m < 1.0)) {
    std::ostringstream msg;
    msg << what << ": branching ratio must satisfy 0 < m < 1, got " << m;
    throw OutOfDomain(msg.str());
  }
}

}  // namespace

double borel_log_domain(double m) {
  if (m == 0.0) return kInf;
  require_m(m, "borel_log_domain");
  return m - 1.0 - std::log(m);
}

double borel_mgf(double m, double s) {
  if (m == 0.0) return std::exp(s);
  require_m(m, "borel_mgf");
  const double bound = borel_log_domain(m);
  if (s > bound) {
    if (s - bound > 1e-12 * std::max(1.0, bound)) {
      std::ostringstream msg;
      msg << "borel_mgf: s = " << s << " exceeds the domain boundary " << bound;
      throw OutOfDomain(msg.str());
    }
    s = bound;
  }
  // 1 + e x = 1 - exp(s - bound), exact near the branch point.
  const double x = -m * std::exp(s - m);
  const double q = -std::expm1(s - bound);
  return -detail::lambert_w0_with_offset(x, q) / m;
}

double borel_mgf_fixed_point(double m, double s, double damping, int max_iter) {
  if (m == 0.0) return std::exp(s);
  require_m(m, "borel_mgf_fixed_point");
  if (s > borel_log_domain(m)) throw OutOfDomain("borel_mgf_fixed_point: s outside domain");
  const double z = std::exp(s);
  double g = 0.0;
  for (int i = 0; i < max_iter; ++i) {
    const double next = (1.0 - damping) * g + damping * z * std::exp(m * (g - 1.0));
    if (std::abs(next - g) <= 1e-16 * next) return next;
    g = next;
  }
  return g;
}

double borel_pmf(double m, int k) {
  if (k < 1) return 0.0;
  if (m == 0.0) return k == 1 ? 1.0 : 0.0;
  const double dk = k;
  return std::exp((dk - 1.0) * std::log(m * dk) - m * dk - std::lgamma(dk + 1.0));
}

double psi_cluster_job(double m, const ServiceDistribution& service, double theta) {
  if (theta == 0.0) return 1.0;
  const double log_v = service.log_mgf(theta);
  if (!std::isfinite(log_v)) {
    std::ostringstream msg;
    msg << "psi_S1: job-size MGF infinite at theta = " << theta;
    throw OutOfDomain(msg.str());
  }
  return borel_mgf(m, log_v);
}

double psi_cluster_job_sup(double m, const ServiceDistribution& service) {
  const double bound = borel_log_domain(m);
  if (!std::isfinite(bound)) return service.mgf_sup();
  switch (service.kind()) {
    case ServiceKind::kExponential:
      return -std::expm1(-bound);
    case ServiceKind::kErlang: {
      const double k = service.parameter();
      return -k * std::expm1(-bound / k);
    }
    case ServiceKind::kDeterministic:
      return bound;
    case ServiceKind::kLogNormal:
      return 0.0;
  }
  return 0.0;
}

double theta_bar_function(const ConstantsInputs& in, double theta) {
  const double scale = in.lambda0 / (in.mu_lo - in.eps);
  return scale * (psi_cluster_job(in.kernel.branching_ratio(), in.service, theta) - 1.0) - theta;
}

ConstantsBundle solve_constants(const ConstantsInputs& in) {
  const double m = in.kernel.branching_ratio();
  if (!(in.lambda0 > 0.0)) throw ConfigError("constants: lambda0 must be positive");
  if (!(in.eps > 0.0)) throw ConfigError("stability.eps must be positive");
  if (!(in.mu_lo < in.mu_hi)) throw ConfigError("stability: mu_lo must be < mu_hi");
  if (!(in.lambda0 / (1.0 - m) < in.mu_lo - in.eps)) {
    std::ostringstream msg;
    msg << "stability condition violated: lambda0/(1-m) = " << in.lambda0 / (1.0 - m)
        << " >= mu_lo - eps = " << in.mu_lo - in.eps;
    throw Unstable(msg.str());
  }
  require_m(m, "solve_constants");
  if (!(in.service.mgf_sup() > 0.0)) {
    throw OutOfDomain("solve_constants: job-size law has no finite MGF to the right of 0");
  }

  ConstantsBundle out;
  out.inputs = in;
  const double bound = borel_log_domain(m);

  out.theta0 = bisect_lower(
      [&](double th) { return in.kernel.log_birth_mgf(th) < 0.5 * bound; }, 0.0,
      in.kernel.birth_mgf_sup());

  const double target = in.kernel.birth_mgf(0.5 * out.theta0);
  double hi = in.service.mgf_sup();
  if (!std::isfinite(hi)) {
    hi = 1.0;
    while (in.service.mgf(hi) < target) hi *= 2.0;
  }
  out.theta0_prime = bisect_lower([&](double th) { return in.service.mgf(th) < target; }, 0.0, hi);

  const double sup = psi_cluster_job_sup(m, in.service);
  if (!(sup > 0.0)) throw OutOfDomain("solve_constants: cluster-job MGF domain is empty");
  const double h_sup = theta_bar_function(in, sup);
  if (!(h_sup > 0.0)) {
    std::ostringstream msg;
    msg << "theta_bar: h stays negative up to the MGF domain boundary " << sup
        << " (h = " << h_sup << ")";
    throw NoRoot(msg.str());
  }
  out.theta_bar =
      bisect_lower([&](double th) { return theta_bar_function(in, th) < 0.0; }, 0.0, sup);

  out.theta1 = std::min(out.theta0_prime, 0.5 * out.theta_bar);
  out.eta1 = -0.5 * theta_bar_function(in, out.theta1);
  const double scale = std::min(0.5 * out.theta0, out.theta1) /
                       (6.0 * std::max(in.mu_hi, 1.0) * (out.eta1 + 2.0 * out.theta1));
  out.theta = scale * out.theta1;
  out.eta = scale * out.eta1;

  for (const auto& check : verify_constants(out)) {
    if (!check.holds) throw NumericalError("constants check failed: " + check.name);
  }
  return out;
}

std::vector<ConstantsCheck> verify_constants(const ConstantsBundle& b) {
  const auto& in = b.inputs;
  const double m = in.kernel.branching_ratio();
  const double scale_in = in.lambda0 / (in.mu_lo - in.eps);
  const double psi_s = psi_cluster_job(m, in.service, b.theta1);
  auto close = [](double a, double c) {
    return std::abs(a - c) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(c)});
  };

  std::vector<ConstantsCheck> checks;
  {
    const double lhs = in.kernel.log_birth_mgf(b.theta0);
    const double rhs = borel_log_domain(m);
    checks.push_back({"log psi_b(theta0) < m - 1 - log m", lhs, rhs, b.theta0 > 0 && lhs < rhs});
  }
  {
    const double lhs = in.service.mgf(b.theta1);
    const double rhs = in.kernel.birth_mgf(0.5 * b.theta0);
    checks.push_back({"psi_V(theta1) < psi_b(theta0 / 2)", lhs, rhs, b.theta1 > 0 && lhs < rhs});
  }
  {
    const double lhs = scale_in * (psi_s - 1.0) - b.theta1;
    checks.push_back(
        {"lambda0 / (mu_lo - eps) (psi_S(theta1) - 1) - theta1 < 0", lhs, 0.0, lhs < 0.0});
  }
  {
    const double rhs = 0.5 * (b.theta1 - scale_in * (psi_s - 1.0));
    checks.push_back({"eta1 = (theta1 - lambda0 / (mu_lo - eps) (psi_S(theta1) - 1)) / 2 > 0",
                      b.eta1, rhs, b.eta1 > 0.0 && close(b.eta1, rhs)});
  }
  {
    const double scale = std::min(0.5 * b.theta0, b.theta1) /
                         (6.0 * std::max(in.mu_hi, 1.0) * (b.eta1 + 2.0 * b.theta1));
    const bool holds = b.theta > 0.0 && b.eta > 0.0 && close(b.theta, scale * b.theta1) &&
                       close(b.eta, scale * b.eta1);
    checks.push_back({"(theta, eta) = min(theta0/2, theta1) / (6 max(mu_hi,1) (eta1 + 2 theta1)) "
                      "(theta1, eta1)",
                      b.theta, scale * b.theta1, holds});
  }
  return checks;
}

nlohmann::json to_json(const ConstantsBundle& b) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : verify_constants(b)) {
    checks.push_back({{"name", c.name}, {"lhs", c.lhs}, {"rhs", c.rhs}, {"holds", c.holds}});
  }
  return {
      {"inputs",
       {{"lambda0", b.inputs.lambda0},
        {"kernel", b.inputs.kernel.name()},
        {"m", b.inputs.kernel.branching_ratio()},
        {"service", b.inputs.service.name()},
        {"mu_lo", b.inputs.mu_lo},
        {"eps", b.inputs.eps},
        {"mu_hi", b.inputs.mu_hi}}},
      {"theta0", b.theta0},
      {"theta0_prime", b.theta0_prime},
      {"theta_bar", b.theta_bar},
      {"theta1", b.theta1},
      {"eta1", b.eta1},
      {"theta", b.theta},
      {"eta", b.eta},
      {"checks", checks},
  };
}

}  // namespace hawkesq
