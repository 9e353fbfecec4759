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

#include "hawkesq/kernel.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <cmath>
#include <limits>
#include <sstream>

#include "hawkesq/error.hpp"

namespace hawkesq {

ExcitationKernel::ExcitationKernel(KernelKind kind, double alpha, double beta)
    : kind_(kind), alpha_(alpha), beta_(beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw ConfigError("kernel.beta must be a positive finite number");
  }
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
    throw ConfigError("kernel.alpha must be a non-negative finite number");
  }
  m_ = kind == KernelKind::kExponential ? alpha / beta : alpha / (beta * beta);
  if (!(m_ < 1.0)) {
    std::ostringstream msg;
    msg << "kernel: branching ratio m = " << m_ << " must be < 1";
    throw ConfigError(msg.str());
  }

  boost::math::quadrature::exp_sinh<double> integrator;
  const double mass = integrator.integrate(
      [this](double t) { return birth_pdf(t); }, 0.0,
      std::numeric_limits<double>::infinity());
  if (std::abs(mass - 1.0) > 1e-9) {
    std::ostringstream msg;
    msg << "kernel: birth density integrates to " << mass;
    throw ConfigError(msg.str());
  }
}

double ExcitationKernel::excitation(double t) const {
  if (t < 0.0) return 0.0;
  const double decay = alpha_ * std::exp(-beta_ * t);
  return kind_ == KernelKind::kExponential ? decay : decay * t;
}

double ExcitationKernel::birth_pdf(double t) const {
  if (t < 0.0) return 0.0;
  const double decay = beta_ * std::exp(-beta_ * t);
  return kind_ == KernelKind::kExponential ? decay : beta_ * t * decay;
}

double ExcitationKernel::sample_birth(Rng& rng) const {
  double b = rng.exponential(beta_);
  if (kind_ == KernelKind::kGammaShape2) b += rng.exponential(beta_);
  return b;
}

double ExcitationKernel::log_birth_mgf(double theta) const {
  if (theta >= beta_) return std::numeric_limits<double>::infinity();
  return -shape() * std::log1p(-theta / beta_);
}

double ExcitationKernel::birth_mgf(double theta) const {
  return std::exp(log_birth_mgf(theta));
}

std::string ExcitationKernel::name() const {
  std::ostringstream out;
  out << (kind_ == KernelKind::kExponential ? "exponential" : "gamma2") << "(" << alpha_
      << "," << beta_ << ")";
  return out.str();
}

}  // namespace hawkesq
