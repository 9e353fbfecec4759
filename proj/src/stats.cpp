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

#include "hawkesq/stats.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/students_t.hpp>
#include <limits>

#include "hawkesq/error.hpp"

namespace hawkesq {

MeanEstimate estimate_mean(std::span<const double> values) {
  MeanEstimate out;
  out.n = values.size();
  if (values.empty()) return out;
  KahanSum sum;
  for (double v : values) sum.add(v);
  out.mean = sum.value() / static_cast<double>(out.n);
  if (out.n > 1) {
    KahanSum sq;
    for (double v : values) sq.add((v - out.mean) * (v - out.mean));
    out.variance = sq.value() / static_cast<double>(out.n - 1);
    out.stderr_ = std::sqrt(out.variance / static_cast<double>(out.n));
  }
  return out;
}

LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 3) {
    throw InsufficientData("linear_fit needs at least three (x, y) pairs");
  }
  LinearFit fit;
  fit.n = x.size();
  const double n = static_cast<double>(fit.n);
  const double mx = estimate_mean(x).mean;
  const double my = estimate_mean(y).mean;
  KahanSum sxx, sxy, syy;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx.add((x[i] - mx) * (x[i] - mx));
    sxy.add((x[i] - mx) * (y[i] - my));
    syy.add((y[i] - my) * (y[i] - my));
  }
  if (sxx.value() <= 0.0) throw InsufficientData("linear_fit: x has no spread");
  fit.slope = sxy.value() / sxx.value();
  fit.intercept = my - fit.slope * mx;
  const double sse = std::max(syy.value() - fit.slope * sxy.value(), 0.0);
  fit.r_squared = syy.value() > 0.0 ? 1.0 - sse / syy.value() : 1.0;
  fit.slope_stderr = std::sqrt(sse / (n - 2.0) / sxx.value());
  if (fit.slope_stderr > 0.0) {
    const boost::math::students_t dist(n - 2.0);
    const double t = std::abs(fit.slope / fit.slope_stderr);
    fit.slope_p_value = 2.0 * boost::math::cdf(boost::math::complement(dist, t));
  } else {
    fit.slope_p_value = fit.slope != 0.0 ? 0.0 : 1.0;
  }
  return fit;
}

ChiSquareResult chi_square_test(std::span<const double> observed, std::span<const double> expected,
                                int fitted_parameters) {
  if (observed.size() != expected.size() || observed.size() < 2) {
    throw InsufficientData("chi_square_test needs at least two matching cells");
  }
  ChiSquareResult out;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    if (!(expected[i] > 0.0)) throw InsufficientData("chi_square_test: empty expected cell");
    const double d = observed[i] - expected[i];
    out.statistic += d * d / expected[i];
  }
  out.dof = static_cast<int>(observed.size()) - 1 - fitted_parameters;
  if (out.dof < 1) throw InsufficientData("chi_square_test: no degrees of freedom left");
  const boost::math::chi_squared dist(out.dof);
  out.p_value = boost::math::cdf(boost::math::complement(dist, out.statistic));
  return out;
}

}  // namespace hawkesq
