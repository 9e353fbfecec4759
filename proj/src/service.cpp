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

#include "hawkesq/service.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "hawkesq/error.hpp"

namespace hawkesq {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}  // namespace

ServiceDistribution ServiceDistribution::erlang(int phases) {
  if (phases < 1) throw ConfigError("service.param: Erlang phase count must be >= 1");
  return {ServiceKind::kErlang, static_cast<double>(phases)};
}

ServiceDistribution ServiceDistribution::lognormal(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw ConfigError("service.param: log-normal sigma must be positive");
  }
  return {ServiceKind::kLogNormal, sigma};
}

double ServiceDistribution::sample(Rng& rng) const {
  switch (kind_) {
    case ServiceKind::kExponential:
      return rng.exponential(1.0);
    case ServiceKind::kErlang: {
      const int k = static_cast<int>(param_);
      double v = 0.0;
      for (int i = 0; i < k; ++i) v += rng.exponential(param_);
      return v;
    }
    case ServiceKind::kDeterministic:
      return 1.0;
    case ServiceKind::kLogNormal:
      return std::exp(param_ * rng.normal() - 0.5 * param_ * param_);
  }
  return 1.0;
}

double ServiceDistribution::second_moment() const {
  switch (kind_) {
    case ServiceKind::kExponential:
      return 2.0;
    case ServiceKind::kErlang:
      return 1.0 + 1.0 / param_;
    case ServiceKind::kDeterministic:
      return 1.0;
    case ServiceKind::kLogNormal:
      return std::exp(param_ * param_);
  }
  return 1.0;
}

double ServiceDistribution::mgf_sup() const {
  switch (kind_) {
    case ServiceKind::kExponential:
      return 1.0;
    case ServiceKind::kErlang:
      return param_;
    case ServiceKind::kDeterministic:
      return kInf;
    case ServiceKind::kLogNormal:
      return 0.0;
  }
  return 0.0;
}

double ServiceDistribution::log_mgf(double theta) const {
  if (theta == 0.0) return 0.0;
  switch (kind_) {
    case ServiceKind::kExponential:
      return theta < 1.0 ? -std::log1p(-theta) : kInf;
    case ServiceKind::kErlang:
      return theta < param_ ? -param_ * std::log1p(-theta / param_) : kInf;
    case ServiceKind::kDeterministic:
      return theta;
    case ServiceKind::kLogNormal:
      // finite only for theta <= 0; not needed for the light-tail machinery
      return theta < 0.0 ? std::numeric_limits<double>::quiet_NaN() : kInf;
  }
  return kInf;
}

double ServiceDistribution::mgf(double theta) const { return std::exp(log_mgf(theta)); }

std::string ServiceDistribution::name() const {
  std::ostringstream out;
  switch (kind_) {
    case ServiceKind::kExponential:
      out << "exponential";
      break;
    case ServiceKind::kErlang:
      out << "erlang(" << static_cast<int>(param_) << ")";
      break;
    case ServiceKind::kDeterministic:
      out << "deterministic";
      break;
    case ServiceKind::kLogNormal:
      out << "lognormal(" << param_ << ")";
      break;
  }
  return out.str();
}

}  // namespace hawkesq
