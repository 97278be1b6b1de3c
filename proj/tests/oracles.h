// Copyright 2026 The Authors.
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

// Test-only reference computations. Nothing here shares code with the
// library paths the tests check.

#ifndef CROWDSEL_TESTS_ORACLES_H_
#define CROWDSEL_TESTS_ORACLES_H_

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

namespace crowdsel::oracle {

// Poisson-Binomial PMF by adding one Bernoulli at a time.
inline std::vector<double> ConvolutionPmf(const std::vector<double>& p) {
  std::vector<double> m{1.0};
  for (double q : p) {
    std::vector<double> next(m.size() + 1, 0.0);
    for (std::size_t i = 0; i < m.size(); ++i) {
      next[i] += m[i] * (1.0 - q);
      next[i + 1] += m[i] * q;
    }
    m.swap(next);
  }
  return m;
}

// Pr(X <= i) for X ~ Poisson(lambda), by the term recurrence.
inline double PoissonCdf(int i, double lambda) {
  double term = std::exp(-lambda);
  double sum = term;
  for (int j = 1; j <= i; ++j) {
    term *= lambda / j;
    sum += term;
  }
  return sum;
}

inline std::vector<double> BinomialPmf(int n, double p) {
  std::vector<double> m{1.0};
  for (int j = 0; j < n; ++j) {
    std::vector<double> next(m.size() + 1, 0.0);
    for (std::size_t i = 0; i < m.size(); ++i) {
      next[i] += m[i] * (1.0 - p);
      next[i + 1] += m[i] * p;
    }
    m.swap(next);
  }
  return m;
}

// Calls f(subset) for every size-k subset of {0..n-1} in lexicographic order.
template <typename F>
void ForEachSubset(std::size_t n, std::size_t k, F&& f) {
  std::vector<std::size_t> idx(k);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  while (true) {
    f(idx);
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

inline std::vector<double> RandomProbs(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> p(n);
  for (double& x : p) x = u(rng);
  return p;
}

}  // namespace crowdsel::oracle

#endif  // CROWDSEL_TESTS_ORACLES_H_
