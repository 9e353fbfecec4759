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

#ifndef HAWKESQ_KERNEL_HPP_
#define HAWKESQ_KERNEL_HPP_

#include <string>

#include "hawkesq/random.hpp"

namespace hawkesq {

enum class KernelKind { kExponential, kGammaShape2 };

// Excitation function h of a Hawkes process.
//
//   Exponential(alpha, beta):  h(t) = alpha * exp(-beta t),    m = alpha / beta
//   GammaShape2(alpha, beta):  h(t) = alpha * t * exp(-beta t), m = alpha / beta^2
//
// The birth-time density f = h / m is Exp(beta) resp. Gamma(2, beta). The
// constructor rejects m >= 1 and checks numerically that f integrates to 1.
class ExcitationKernel {
 public:
  ExcitationKernel(KernelKind kind, double alpha, double beta);

  static ExcitationKernel exponential(double alpha, double beta) {
    return {KernelKind::kExponential, alpha, beta};
  }
  static ExcitationKernel gamma_shape2(double alpha, double beta) {
    return {KernelKind::kGammaShape2, alpha, beta};
  }

  KernelKind kind() const { return kind_; }
  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  int shape() const { return kind_ == KernelKind::kExponential ? 1 : 2; }

  // Branching ratio m = integral of h.
  double branching_ratio() const { return m_; }

  double excitation(double t) const;
  double birth_pdf(double t) const;
  double birth_mean() const { return shape() / beta_; }
  double sample_birth(Rng& rng) const;

  // psi_b(theta) = (beta / (beta - theta))^shape; +inf for theta >= beta.
  double birth_mgf(double theta) const;
  double log_birth_mgf(double theta) const;
  double birth_mgf_sup() const { return beta_; }

  std::string name() const;

 private:
  KernelKind kind_;
  double alpha_;
  double beta_;
  double m_;
};

}  // namespace hawkesq

#endif  // HAWKESQ_KERNEL_HPP_
