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

#ifndef HAWKESQ_RANDOM_HPP_
#define HAWKESQ_RANDOM_HPP_

#include <cmath>
#include <cstdint>
#include <random>

namespace hawkesq {

// SplitMix64 finalizer.
constexpr std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Seed of child stream `index` of `master`:
//   splitmix64(master ^ splitmix64(index))
// Used for every replication / sub-stream split in the project.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(master ^ splitmix64(index));
}

// Seeded random stream. All samplers are written out explicitly (inversion
// or sums of exponentials) so that draws do not depend on the standard
// library's distribution implementations; only the normal sampler used by
// the log-normal service law goes through <random>.
__extension__ typedef unsigned __int128 Wide;  // 128-bit product for below()

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }
  Rng child(std::uint64_t index) const { return Rng(derive_seed(seed_, index)); }

  std::uint64_t next_u64() { return engine_(); }


  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform integer on [0, n), n > 0 (Lemire's multiply-shift with rejection).
  std::uint64_t below(std::uint64_t n) {
    Wide prod = static_cast<Wide>(engine_()) * n;
    auto low = static_cast<std::uint64_t>(prod);
    if (low < n) {
      const std::uint64_t threshold = (0 - n) % n;
      while (low < threshold) {
        prod = static_cast<Wide>(engine_()) * n;
        low = static_cast<std::uint64_t>(prod);
      }
    }
    return static_cast<std::uint64_t>(prod >> 64);
  }

  // Exp(rate), rate > 0.
  double exponential(double rate) { return -std::log1p(-uniform()) / rate; }

  // Poisson(mean) by sequential inversion; intended for small means (< ~30).
  int poisson(double mean) {
    if (mean <= 0.0) return 0;
    const double u = uniform();
    double p = std::exp(-mean);
    double cdf = p;
    int k = 0;
    while (u >= cdf) {
      ++k;
      p *= mean / k;
      const double next = cdf + p;
      if (next == cdf) break;  // multiplied past the representable tail
      cdf = next;
    }
    return k;
  }

  double normal() { return normal_(engine_); }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace hawkesq

#endif  // HAWKESQ_RANDOM_HPP_
