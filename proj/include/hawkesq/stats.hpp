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

#ifndef HAWKESQ_STATS_HPP_
#define HAWKESQ_STATS_HPP_

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace hawkesq {

// Compensated (Kahan) summation.
class KahanSum {
 public:
  void add(double v) {
    const double y = v - carry_;
    const double t = sum_ + y;
    carry_ = (t - sum_) - y;
    sum_ = t;
  }
  double value() const { return sum_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

struct MeanEstimate {
  double mean = 0.0;
  double variance = 0.0;  // sample variance (n - 1 denominator)
  double stderr_ = 0.0;   // standard error of the mean
  std::size_t n = 0;
};

// Mean / variance / standard error, summed in index order.
MeanEstimate estimate_mean(std::span<const double> values);

struct LinearFit {
  double intercept = 0.0;
  double slope = 0.0;
  double r_squared = 0.0;
  double slope_stderr = 0.0;
  double slope_p_value = 1.0;  // two-sided t-test of slope = 0
  std::size_t n = 0;
};

LinearFit linear_fit(std::span<const double> x, std::span<const double> y);

// Pearson chi-square goodness of fit. `observed` and `expected` are counts
// over the same cells (the caller lumps the tail into a last cell).
struct ChiSquareResult {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 0.0;
};
ChiSquareResult chi_square_test(std::span<const double> observed, std::span<const double> expected,
                                int fitted_parameters = 0);

}  // namespace hawkesq

#endif  // HAWKESQ_STATS_HPP_
