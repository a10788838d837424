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

#include "dmwl/stats.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dmwl/error.hpp"

namespace dmwl::stats {
namespace {

using Real = long double;

// Terms this far below the running maximum (in natural log) cannot change a
// long double sum.
constexpr Real kNegligible = 80.0L;

Real log_add(Real a, Real b) {
  if (a == -INFINITY) return b;
  if (b == -INFINITY) return a;
  const Real hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

// Log of the pmf ratio t(i+1)/t(i).
Real log_ratio_up(std::uint64_t i, const HypergeomParams& p) {
  const Real N = static_cast<Real>(p.population);
  const Real K = static_cast<Real>(p.successes);
  const Real n = static_cast<Real>(p.draws);
  const Real x = static_cast<Real>(i);
  return std::log((K - x) * (n - x)) - std::log((x + 1) * (N - K - n + x + 1));
}

std::uint64_t mode(const HypergeomParams& p) {
  const Real m = std::floor((static_cast<Real>(p.draws) + 1) * (static_cast<Real>(p.successes) + 1) /
                            (static_cast<Real>(p.population) + 2));
  return std::clamp(static_cast<std::uint64_t>(m), p.support_min(), p.support_max());
}

// Log of sum_{i=from}^{hi} t(i) relative to t(mode), given log t(from).
Real log_upper_sum(std::uint64_t from, Real log_t_from, const HypergeomParams& p) {
  const std::uint64_t hi = p.support_max();
  Real acc = log_t_from;
  Real lt = log_t_from;
  Real peak = log_t_from;
  for (std::uint64_t i = from; i < hi; ++i) {
    lt += log_ratio_up(i, p);
    peak = std::max(peak, lt);
    acc = log_add(acc, lt);
    if (lt < peak - kNegligible) break;
  }
  return acc;
}

// Log of sum_{i=lo}^{to} t(i) relative to t(mode), given log t(to).
Real log_lower_sum(std::uint64_t to, Real log_t_to, const HypergeomParams& p) {
  const std::uint64_t lo = p.support_min();
  Real acc = log_t_to;
  Real lt = log_t_to;
  Real peak = log_t_to;
  for (std::uint64_t i = to; i > lo; --i) {
    lt -= log_ratio_up(i - 1, p);
    peak = std::max(peak, lt);
    acc = log_add(acc, lt);
    if (lt < peak - kNegligible) break;
  }
  return acc;
}

Real log_choose(std::uint64_t n, std::uint64_t k) {
  return std::lgamma(static_cast<Real>(n) + 1) - std::lgamma(static_cast<Real>(k) + 1) -
         std::lgamma(static_cast<Real>(n - k) + 1);
}

// Unnormalized log pmf.
Real log_weight(std::uint64_t k, const HypergeomParams& p) {
  return log_choose(p.successes, k) + log_choose(p.population - p.successes, p.draws - k);
}

// Beyond this distance from the mode the closed form is cheaper than the ratio walk.
constexpr std::uint64_t kWalkLimit = 64;

// log t(k) - log t(mode).
Real log_term(std::uint64_t k, const HypergeomParams& p, std::uint64_t m) {
  const std::uint64_t dist = k >= m ? k - m : m - k;
  if (dist > kWalkLimit) return log_weight(k, p) - log_weight(m, p);
  Real lt = 0;
  if (k >= m) {
    for (std::uint64_t i = m; i < k; ++i) lt += log_ratio_up(i, p);
  } else {
    for (std::uint64_t i = m; i > k; --i) lt -= log_ratio_up(i - 1, p);
  }
  return lt;
}

Real log_total(const HypergeomParams& p, std::uint64_t m) {
  Real total = log_upper_sum(m, 0, p);
  if (m > p.support_min()) total = log_add(total, log_lower_sum(m - 1, -log_ratio_up(m - 1, p), p));
  return total;
}

}  // namespace

void HypergeomParams::validate() const {
  if (successes > population || draws > population) {
    throw data_error("InvalidParams", "hypergeometric parameters need K <= N and n <= N (N=" +
                                          std::to_string(population) + ", K=" +
                                          std::to_string(successes) + ", n=" +
                                          std::to_string(draws) + ")");
  }
}

std::uint64_t HypergeomParams::support_min() const {
  return draws + successes > population ? draws + successes - population : 0;
}

std::uint64_t HypergeomParams::support_max() const { return std::min(draws, successes); }

double hypergeom_sf(std::uint64_t k, const HypergeomParams& params) {
  params.validate();
  const std::uint64_t lo = params.support_min();
  const std::uint64_t hi = params.support_max();
  if (k <= lo) return 1.0;
  if (k > hi) return 0.0;

  const std::uint64_t m = mode(params);
  const Real total = log_total(params, m);
  Real upper;
  if (k <= m) {
    // Sum whichever side is the minority to keep the ratio well conditioned.
    const Real lower = log_lower_sum(k - 1, log_term(k - 1, params, m), params);
    const Real lower_share = std::exp(lower - total);
    if (lower_share < 0.5L) return static_cast<double>(1.0L - lower_share);
    upper = log_upper_sum(k, log_term(k, params, m), params);
  } else {
    upper = log_upper_sum(k, log_term(k, params, m), params);
  }
  return static_cast<double>(std::min<Real>(1.0L, std::exp(upper - total)));
}

double hypergeom_sf(std::uint64_t k, std::uint64_t N, std::uint64_t K, std::uint64_t n) {
  return hypergeom_sf(k, HypergeomParams{N, K, n});
}

double hypergeom_pmf(std::uint64_t k, const HypergeomParams& params) {
  params.validate();
  if (k < params.support_min() || k > params.support_max()) return 0.0;
  return static_cast<double>(
      std::exp(log_weight(k, params) - log_choose(params.population, params.draws)));
}

double bonferroni(double p, std::uint64_t m) {
  if (!(p >= 0.0 && p <= 1.0)) throw data_error("InvalidParams", "p-value must lie in [0, 1]");
  if (m < 1) throw data_error("InvalidParams", "number of tests must be >= 1");
  return std::min(1.0, p * static_cast<double>(m));
}

CategoricalDist::CategoricalDist(std::span<const double> weights) {
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw data_error("InvalidDistribution", "weights must be finite and nonnegative");
    }
  }
  // Summing in sorted order keeps the normalizer independent of category order.
  std::vector<double> sorted(weights.begin(), weights.end());
  std::sort(sorted.begin(), sorted.end());
  double sum = 0.0;
  for (double w : sorted) sum += w;
  if (!(sum > 0.0)) throw data_error("InvalidDistribution", "weights must have a positive sum");
  probs_.reserve(weights.size());
  for (double w : weights) probs_.push_back(w / sum);
}

CategoricalDist CategoricalDist::from_counts(std::span<const std::uint64_t> counts) {
  std::vector<double> w(counts.begin(), counts.end());
  return CategoricalDist(w);
}

double shannon_entropy(const CategoricalDist& dist) {
  std::vector<double> p = dist.probabilities();
  std::sort(p.begin(), p.end());
  double h = 0.0;
  for (double x : p) {
    if (x > 0.0) h -= x * std::log(x);
  }
  return std::max(0.0, h);
}

double mcnemar_exact(std::uint64_t b, std::uint64_t c) {
  const std::uint64_t n = b + c;
  if (n == 0) return 1.0;
  const std::uint64_t lo = std::min(b, c);
  // log C(n, i) - n log 2, walked up from i = 0.
  const Real log_half_n = -static_cast<Real>(n) * std::log(2.0L);
  Real lt = log_half_n;
  Real acc = lt;
  for (std::uint64_t i = 0; i < lo; ++i) {
    lt += std::log(static_cast<Real>(n - i)) - std::log(static_cast<Real>(i + 1));
    acc = log_add(acc, lt);
  }
  return static_cast<double>(std::min<Real>(1.0L, 2.0L * std::exp(acc)));
}

}  // namespace dmwl::stats
