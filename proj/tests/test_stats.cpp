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

#include <doctest.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <vector>

#include "dmwl/rng.hpp"
#include "dmwl/stats.hpp"
#include "test_util.hpp"

using namespace dmwl;
using namespace dmwl::stats;
using dmwl::testing::error_code_of;

namespace {

// P(X >= k) by enumerating every n-subset of N items whose first K are successes.
double enumerated_sf(unsigned k, unsigned N, unsigned K, unsigned n) {
  std::uint64_t hits = 0;
  std::uint64_t total = 0;
  const std::uint32_t success_mask = (1u << K) - 1u;
  for (std::uint32_t mask = 0; mask < (1u << N); ++mask) {
    if (static_cast<unsigned>(std::popcount(mask)) != n) continue;
    ++total;
    if (static_cast<unsigned>(std::popcount(mask & success_mask)) >= k) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(total);
}

}  // namespace

TEST_CASE("hypergeometric sf matches exhaustive enumeration") {
  for (unsigned N = 1; N <= 12; ++N) {
    for (unsigned K = 0; K <= N; ++K) {
      for (unsigned n = 0; n <= N; ++n) {
        for (unsigned k = 0; k <= n + 1; ++k) {
          const double got = hypergeom_sf(k, N, K, n);
          const double want = enumerated_sf(k, N, K, n);
          CHECK(std::abs(got - want) <= 1e-12);
        }
      }
    }
  }
}

TEST_CASE("hypergeometric sf worked example") {
  CHECK(hypergeom_sf(4, 10, 5, 4) == doctest::Approx(5.0 / 210.0).epsilon(1e-12));
  CHECK(hypergeom_sf(0, 10, 5, 4) == 1.0);
  CHECK(hypergeom_sf(5, 10, 5, 4) == 0.0);
}

TEST_CASE("hypergeometric parameter validation") {
  CHECK(error_code_of([] { hypergeom_sf(1, 10, 11, 2); }) == "InvalidParams");
  CHECK(error_code_of([] { hypergeom_sf(1, 10, 2, 11); }) == "InvalidParams");
}

TEST_CASE("hypergeometric sf is monotone and pmf sums to one") {
  Rng rng(99);
  for (int trial = 0; trial < 300; ++trial) {
    const std::uint64_t N = rng.between(1, 2'000'000);
    const std::uint64_t K = rng.between(0, N);
    const std::uint64_t n = rng.between(0, std::min<std::uint64_t>(N, 3000));
    const HypergeomParams p{N, K, n};
    long double mass = 0.0L;
    for (std::uint64_t k = p.support_min(); k <= p.support_max(); ++k) mass += hypergeom_pmf(k, p);
    CHECK(std::abs(static_cast<double>(mass) - 1.0) <= 1e-10);

    std::vector<std::uint64_t> ks;
    for (int i = 0; i < 25; ++i) ks.push_back(rng.between(p.support_min(), p.support_max() + 1));
    std::sort(ks.begin(), ks.end());
    double prev = 1.0;
    for (auto k : ks) {
      const double sf = hypergeom_sf(k, p);
      CHECK(sf >= 0.0);
      CHECK(sf <= prev);
      prev = sf;
      // Consecutive tails differ by the pmf.
      const double step = sf - hypergeom_sf(k + 1, p);
      CHECK(std::abs(step - hypergeom_pmf(k, p)) <= 1e-10);
    }
    CHECK(hypergeom_sf(p.support_min(), p) == 1.0);
    CHECK(hypergeom_sf(p.support_max() + 1, p) == 0.0);
  }
}

TEST_CASE("hypergeometric sf on a population of ten million") {
  const HypergeomParams p{10'000'000, 5'000'000, 1000};
  const double tail = hypergeom_sf(600, p);
  CHECK(tail > 0.0);
  CHECK(tail < 1e-9);
  CHECK(hypergeom_sf(500, p) == doctest::Approx(0.5).epsilon(0.05));
}

TEST_CASE("bonferroni") {
  CHECK(bonferroni(0.001, 5) == doctest::Approx(0.005));
  CHECK(bonferroni(0.5, 3) == 1.0);
  CHECK(bonferroni(0.2, 1) == doctest::Approx(0.2));
  CHECK(error_code_of([] { bonferroni(0.1, 0); }) == "InvalidParams");
  CHECK(error_code_of([] { bonferroni(1.5, 2); }) == "InvalidParams");
  CHECK(error_code_of([] { bonferroni(-0.1, 2); }) == "InvalidParams");
}

TEST_CASE("shannon entropy") {
  const std::vector<double> a = {0.5, 0.25, 0.25};
  CHECK(shannon_entropy(CategoricalDist(a)) == doctest::Approx(1.039721).epsilon(1e-6));
  const std::vector<double> uniform = {1, 1, 1, 1};
  CHECK(shannon_entropy(CategoricalDist(uniform)) == doctest::Approx(std::log(4.0)));
  const std::vector<double> point = {0, 1, 0};
  CHECK(shannon_entropy(CategoricalDist(point)) == 0.0);
  const std::vector<std::uint64_t> counts = {2, 1, 1};
  CHECK(shannon_entropy(CategoricalDist::from_counts(counts)) ==
        doctest::Approx(1.039721).epsilon(1e-6));

  const std::vector<double> negative = {0.5, -0.1};
  CHECK(error_code_of([&] { CategoricalDist d(negative); }) == "InvalidDistribution");
  const std::vector<double> zeros = {0, 0};
  CHECK(error_code_of([&] { CategoricalDist d(zeros); }) == "InvalidDistribution");
}

TEST_CASE("entropy is permutation invariant and bounded") {
  Rng rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<double> w(rng.between(1, 12));
    for (auto& x : w) x = rng.below(4) == 0 ? 0.0 : rng.unit();
    w[0] += 0.1;
    const double h = shannon_entropy(CategoricalDist(w));
    auto shuffled = w;
    rng.shuffle(shuffled);
    CHECK(shannon_entropy(CategoricalDist(shuffled)) == h);
    CHECK(h >= 0.0);
    CHECK(h <= std::log(static_cast<double>(w.size())) + 1e-12);
  }
}

TEST_CASE("mcnemar exact") {
  CHECK(mcnemar_exact(5, 0) == doctest::Approx(0.0625));
  CHECK(mcnemar_exact(0, 0) == 1.0);
  CHECK(mcnemar_exact(3, 3) == 1.0);
  // 2 * P(Bin(10, 1/2) <= 1) = 2 * 11 / 1024.
  CHECK(mcnemar_exact(1, 9) == doctest::Approx(22.0 / 1024.0));
  for (std::uint64_t b = 0; b < 40; b += 3) {
    for (std::uint64_t c = 0; c < 40; c += 5) {
      CHECK(mcnemar_exact(b, c) == mcnemar_exact(c, b));
      CHECK(mcnemar_exact(b, c) <= 1.0);
    }
  }
}
