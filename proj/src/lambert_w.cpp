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

#include "hawkesq/lambert_w.hpp"

#include <cmath>
#include <numbers>

#include "hawkesq/error.hpp"

namespace hawkesq {

namespace detail {

// W0(x) given q = 1 + e x >= 0 computed by the caller (possibly more
// accurately than from x itself).
double lambert_w0_with_offset(double x, double q) {
  if (q < 0.0) q = 0.0;
  if (x == 0.0) return 0.0;
  const double p = std::sqrt(2.0 * q);
  // Puiseux series around the branch point x = -1/e.
  auto branch_series = [p] {
    return -1.0 +
           p * (1.0 + p * (-1.0 / 3.0 +
                           p * (11.0 / 72.0 + p * (-43.0 / 540.0 + p * (769.0 / 17280.0)))));
  };
  if (p < 1e-3) return branch_series();

  double w;
  if (x < -0.25) {
    w = branch_series();
  } else if (x < 3.0) {
    const double l = std::log1p(x);
    w = l * (1.0 - std::log1p(l) / (2.0 + l));
  } else {
    const double l = std::log(x);
    const double ll = std::log(l);
    w = l - ll + ll / l;
  }

  for (int i = 0; i < 64; ++i) {
    const double ew = std::exp(w);
    const double f = w * ew - x;
    const double wp1 = w + 1.0;
    const double denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
    const double dw = f / denom;
    w -= dw;
    if (std::abs(dw) <= 4e-16 * (1.0 + std::abs(w))) break;
  }
  return w;
}

}  // namespace detail

double lambert_w0(double x) {
  constexpr double kE = std::numbers::e;
  const double q = 1.0 + kE * x;
  if (q < -8e-16) throw OutOfDomain("lambert_w0: argument below -1/e");
  return detail::lambert_w0_with_offset(x, q);
}

}  // namespace hawkesq
