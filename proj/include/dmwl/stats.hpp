// Copyright 2026 The dmwl Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace dmwl::stats {

// Population of N items with K successes, n drawn without replacement.
struct HypergeomParams {
  std::uint64_t population = 0;  // N
  std::uint64_t successes = 0;   // K
  std::uint64_t draws = 0;       // n

  // Throws InvalidParams unless K <= N and n <= N.
  void validate() const;
  std::uint64_t support_min() const;
  std::uint64_t support_max() const;
};

// P(X >= k). Terms are built by the pmf ratio recurrence in log space around
// the mode, so no factorials or lgamma calls are involved.
double hypergeom_sf(std::uint64_t k, const HypergeomParams& params);
double hypergeom_sf(std::uint64_t k, std::uint64_t N, std::uint64_t K, std::uint64_t n);
double hypergeom_pmf(std::uint64_t k, const HypergeomParams& params);

// min(1, p * m).
double bonferroni(double p, std::uint64_t m);

// Nonnegative weights with a positive sum; normalized on construction.
class CategoricalDist {
 public:
  explicit CategoricalDist(std::span<const double> weights);
  static CategoricalDist from_counts(std::span<const std::uint64_t> counts);

  const std::vector<double>& probabilities() const { return probs_; }
  std::size_t size() const { return probs_.size(); }

 private:
  std::vector<double> probs_;
};

// Entropy in nats; zero-probability categories contribute 0. The sum runs
// over sorted probabilities, so the result is exactly permutation-invariant.
double shannon_entropy(const CategoricalDist& dist);

// Exact two-sided McNemar test on discordant counts b and c:
// min(1, 2 * P(X <= min(b, c))) with X ~ Binomial(b + c, 1/2).
double mcnemar_exact(std::uint64_t b, std::uint64_t c);

}  // namespace dmwl::stats
