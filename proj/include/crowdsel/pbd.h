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

// Poisson-Binomial window probabilities.
//
// The count of positive opinions T in a selected crowd is a sum of
// independent, non-identical Bernoulli variables. This header provides the
// exact distribution of T (by subset enumeration and by the discrete Fourier
// transform of its characteristic function), the window probability
// tau = Pr(theta1 <= T <= theta2), the Poisson / Binomial / Normal surrogates
// used by the approximate solvers, their closed-form peak locations, and
// upper bounds on the Poisson and Binomial approximation errors.

#ifndef CROWDSEL_PBD_H_
#define CROWDSEL_PBD_H_

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace crowdsel::pbd {

// Largest vector accepted by PmfBruteForce (2^25 subsets).
inline constexpr std::size_t kBruteForceMaxLength = 25;

// Per-worker probabilities of a positive opinion, each in [0, 1].
class OpinionVector {
 public:
  // Throws InvalidArgument if empty or any entry lies outside [0, 1].
  explicit OpinionVector(std::vector<double> probs);

  std::span<const double> probs() const { return probs_; }
  std::size_t size() const { return probs_.size(); }
  double operator[](std::size_t i) const { return probs_[i]; }

 private:
  std::vector<double> probs_;
};

// Throws InvalidArgument unless every entry is a finite value in [0, 1].
void ValidateProbabilities(std::span<const double> probs);

// A demand of at least `theta1` positive and `theta0` negative workers among
// `k`. Equivalently theta1 <= T <= theta2 with theta2 = k - theta0.
class DemandWindow {
 public:
  // Throws InvalidArgument unless k >= 1, theta1, theta0 >= 0 and
  // theta1 + theta0 <= k.
  DemandWindow(int k, int theta1, int theta0);

  int k() const { return k_; }
  int theta1() const { return theta1_; }
  int theta0() const { return theta0_; }
  int theta2() const { return k_ - theta0_; }
  bool degenerate() const { return theta1_ == theta2(); }

 private:
  int k_;
  int theta1_;
  int theta0_;
};

// mass[i] = Pr(T = i), i = 0..k.
struct PmfTable {
  std::vector<double> mass;

  double Sum() const;
  // Inclusive slice sum mass[lo] + ... + mass[hi].
  double Slice(int lo, int hi) const;
};

// Moments of T shared by the Poisson, Binomial and Normal surrogates.
struct ApproximationStats {
  double lambda = 0.0;  // sum p, the Poisson rate
  double mu = 0.0;      // sum p, the Normal mean
  double sigma = 0.0;   // sqrt(sum p(1-p))
  double p_bar = 0.0;   // lambda / k
};

ApproximationStats ComputeStats(std::span<const double> probs);

// Sums the probability of every outcome vector. Exponential; throws
// SizeLimitExceeded above kBruteForceMaxLength entries.
PmfTable PmfBruteForce(std::span<const double> probs);

// Exact PMF through the inverse DFT of the characteristic function sampled
// at omega * l, omega = 2 pi / (k + 1). O(k^2).
PmfTable PmfDftCf(std::span<const double> probs);

// Pr(theta1 <= T <= theta2), inclusive at both ends, from PmfDftCf.
// Throws InvalidArgument if probs.size() != window.k().
double TauExact(std::span<const double> probs, const DemandWindow& window);

// Window probability evaluated straight from the characteristic function,
// without materializing the PMF. The roots of unity and the window kernel
// sum_{t=theta1}^{theta2} e^{-i omega l t} are precomputed once, so each call
// costs k(k+1) complex multiply-adds. Intended for solver inner loops; agrees
// with TauExact to rounding.
class WindowTau {
 public:
  explicit WindowTau(const DemandWindow& window);

  // probs.size() must equal window.k(); not rechecked.
  double operator()(std::span<const double> probs) const;

  const DemandWindow& window() const { return window_; }

 private:
  DemandWindow window_;
  std::vector<std::complex<double>> roots_;
  std::vector<std::complex<double>> kernel_;
};

// e^{-lambda} sum_{i=theta1+1}^{theta2} lambda^i / i!, i.e. the Poisson CMF
// difference F(theta2) - F(theta1). Note the lower end is exclusive.
double GPoisson(double lambda, const DemandWindow& window);

// (theta2! / theta1!)^{1 / (theta2 - theta1)}, the maximizer of GPoisson.
// Throws DegenerateWindow when theta1 == theta2.
double PeakPoisson(const DemandWindow& window);

// Pr(theta1 < X <= theta2) for X ~ Binomial(n, p_bar). Requires n == k.
double GBinomial(double p_bar, int n, const DemandWindow& window);

struct BinomialPeak {
  double p_star = 0.0;
  double omega = 0.0;  // k * p_star, the knapsack capacity
};

// Maximizer of GBinomial over p_bar. Requires n >= theta2; throws
// DegenerateWindow when theta1 == theta2.
BinomialPeak PeakBinomial(int n, const DemandWindow& window);

// Normal CDF difference with continuity correction:
// Phi((theta2 + 0.5 - mu) / sigma) - Phi((theta1 - 0.5 - mu) / sigma).
// sigma == 0 is treated as a point mass at mu.
double GNormal(const ApproximationStats& stats, const DemandWindow& window);

// min(1/mu, 1) * sum p^2: bounds |Pr(T <= i) - F_Poisson(i, mu)| for all i.
double PoissonErrorBound(std::span<const double> probs);

// (1 - q^{n+1} - (1-q)^{n+1}) / ((n+1) q (1-q)) * sum (p_i - q)^2 with
// q = mu / n: bounds the total variation distance to Binomial(n, q).
// Returns 0 when q is 0 or 1.
double BinomialErrorBound(std::span<const double> probs);

}  // namespace crowdsel::pbd

#endif  // CROWDSEL_PBD_H_
