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

#include "crowdsel/pbd.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>

#include "crowdsel/errors.h"

namespace crowdsel::pbd {
namespace {

constexpr double kImagTolerance = 1e-9;

double Clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

double LogChoose(int n, int r) {
  return std::lgamma(n + 1.0) - std::lgamma(r + 1.0) -
         std::lgamma(n - r + 1.0);
}

double NormalCdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

// Binomial(n, p) point mass at i; exact at the p in {0, 1} boundaries.
double BinomialMass(int n, int i, double p) {
  if (p <= 0.0) return i == 0 ? 1.0 : 0.0;
  if (p >= 1.0) return i == n ? 1.0 : 0.0;
  return std::exp(LogChoose(n, i) + i * std::log(p) +
                  (n - i) * std::log1p(-p));
}

}  // namespace

void ValidateProbabilities(std::span<const double> probs) {
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (!(probs[i] >= 0.0 && probs[i] <= 1.0)) {
      throw InvalidArgument("probability at position " + std::to_string(i) +
                            " is outside [0, 1]: " + std::to_string(probs[i]));
    }
  }
}

OpinionVector::OpinionVector(std::vector<double> probs)
    : probs_(std::move(probs)) {
  if (probs_.empty()) throw InvalidArgument("opinion vector is empty");
  ValidateProbabilities(probs_);
}

DemandWindow::DemandWindow(int k, int theta1, int theta0)
    : k_(k), theta1_(theta1), theta0_(theta0) {
  if (k < 1) throw InvalidArgument("k must be at least 1");
  if (theta1 < 0 || theta0 < 0) {
    throw InvalidArgument("theta1 and theta0 must be non-negative");
  }
  if (theta1 + theta0 > k) {
    throw InvalidArgument("theta1 + theta0 = " +
                          std::to_string(theta1 + theta0) + " exceeds k = " +
                          std::to_string(k));
  }
}

double PmfTable::Sum() const {
  double s = 0.0;
  for (double m : mass) s += m;
  return s;
}

double PmfTable::Slice(int lo, int hi) const {
  double s = 0.0;
  for (int i = std::max(lo, 0);
       i <= hi && i < static_cast<int>(mass.size()); ++i) {
    s += mass[i];
  }
  return s;
}

ApproximationStats ComputeStats(std::span<const double> probs) {
  ApproximationStats st;
  double var = 0.0;
  for (double p : probs) {
    st.lambda += p;
    var += p * (1.0 - p);
  }
  st.mu = st.lambda;
  st.sigma = std::sqrt(std::max(var, 0.0));
  st.p_bar = probs.empty() ? 0.0 : st.lambda / probs.size();
  return st;
}

PmfTable PmfBruteForce(std::span<const double> probs) {
  if (probs.size() > kBruteForceMaxLength) {
    throw SizeLimitExceeded("brute-force PMF is limited to " +
                            std::to_string(kBruteForceMaxLength) +
                            " probabilities, got " +
                            std::to_string(probs.size()));
  }
  ValidateProbabilities(probs);
  const std::size_t n = probs.size();
  PmfTable out{std::vector<double>(n + 1, 0.0)};
  const std::uint64_t subsets = std::uint64_t{1} << n;
  for (std::uint64_t mask = 0; mask < subsets; ++mask) {
    double weight = 1.0;
    int ones = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (mask >> j & 1) {
        weight *= probs[j];
        ++ones;
      } else {
        weight *= 1.0 - probs[j];
      }
    }
    out.mass[ones] += weight;
  }
  return out;
}

PmfTable PmfDftCf(std::span<const double> probs) {
  if (probs.empty()) throw InvalidArgument("opinion vector is empty");
  ValidateProbabilities(probs);
  const std::size_t k = probs.size();
  const double omega = 2.0 * std::numbers::pi / static_cast<double>(k + 1);

  // Characteristic function at t = omega * l.
  std::vector<std::complex<double>> phi(k + 1);
  for (std::size_t l = 0; l <= k; ++l) {
    const std::complex<double> z = std::polar(1.0, omega * l);
    std::complex<double> prod = 1.0;
    for (double p : probs) prod *= (1.0 - p) + p * z;
    phi[l] = prod;
  }

  PmfTable out{std::vector<double>(k + 1)};
  for (std::size_t t = 0; t <= k; ++t) {
    std::complex<double> acc = 0.0;
    for (std::size_t l = 0; l <= k; ++l) {
      // (l * t) mod (k + 1) keeps the angle small for large k.
      acc += phi[l] * std::polar(1.0, -omega * ((l * t) % (k + 1)));
    }
    acc /= static_cast<double>(k + 1);
    if (std::abs(acc.imag()) > kImagTolerance) {
      throw std::runtime_error("DFT-CF imaginary residue " +
                               std::to_string(acc.imag()) +
                               " exceeds tolerance");
    }
    out.mass[t] = Clamp01(acc.real());
  }
  return out;
}

double TauExact(std::span<const double> probs, const DemandWindow& window) {
  if (probs.size() != static_cast<std::size_t>(window.k())) {
    throw InvalidArgument("opinion vector has " +
                          std::to_string(probs.size()) +
                          " entries but k = " + std::to_string(window.k()));
  }
  return Clamp01(PmfDftCf(probs).Slice(window.theta1(), window.theta2()));
}

WindowTau::WindowTau(const DemandWindow& window) : window_(window) {
  const int k = window.k();
  const double omega = 2.0 * std::numbers::pi / (k + 1);
  roots_.resize(k + 1);
  kernel_.resize(k + 1);
  for (int l = 0; l <= k; ++l) {
    roots_[l] = std::polar(1.0, omega * l);
    std::complex<double> acc = 0.0;
    for (int t = window.theta1(); t <= window.theta2(); ++t) {
      acc += std::polar(1.0, -omega * ((static_cast<long>(l) * t) % (k + 1)));
    }
    kernel_[l] = acc / static_cast<double>(k + 1);
  }
}

double WindowTau::operator()(std::span<const double> probs) const {
  // l = 0 contributes the kernel times phi(0) = 1.
  double acc = kernel_[0].real();
  const std::size_t size = roots_.size();
  for (std::size_t l = 1; l < size; ++l) {
    std::complex<double> prod = 1.0;
    const std::complex<double> z = roots_[l];
    for (double p : probs) prod *= (1.0 - p) + p * z;
    acc += (prod * kernel_[l]).real();
  }
  return Clamp01(acc);
}

double GPoisson(double lambda, const DemandWindow& window) {
  if (!(lambda >= 0.0)) {
    throw InvalidArgument("Poisson rate must be non-negative");
  }
  if (lambda == 0.0) return 0.0;  // every term has i >= 1
  const double log_lambda = std::log(lambda);
  double sum = 0.0;
  for (int i = window.theta1() + 1; i <= window.theta2(); ++i) {
    sum += std::exp(-lambda + i * log_lambda - std::lgamma(i + 1.0));
  }
  return sum;
}

double PeakPoisson(const DemandWindow& window) {
  if (window.degenerate()) {
    throw DegenerateWindow("Poisson peak is undefined for theta1 == theta2");
  }
  const int t1 = window.theta1();
  const int t2 = window.theta2();
  return std::exp((std::lgamma(t2 + 1.0) - std::lgamma(t1 + 1.0)) / (t2 - t1));
}

double GBinomial(double p_bar, int n, const DemandWindow& window) {
  if (!(p_bar >= 0.0 && p_bar <= 1.0)) {
    throw InvalidArgument("Binomial success probability outside [0, 1]");
  }
  if (n != window.k()) {
    throw InvalidArgument("Binomial trial count must equal k");
  }
  double inside = 0.0;
  double outside = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double m = BinomialMass(n, i, p_bar);
    (i > window.theta1() && i <= window.theta2() ? inside : outside) += m;
  }
  // Near saturation the complement carries the precision.
  return Clamp01(outside < 0.5 ? 1.0 - outside : inside);
}

BinomialPeak PeakBinomial(int n, const DemandWindow& window) {
  if (window.degenerate()) {
    throw DegenerateWindow("Binomial peak is undefined for theta1 == theta2");
  }
  const int t1 = window.theta1();
  const int t2 = window.theta2();
  if (n < t2) throw InvalidArgument("Binomial trial count below theta2");
  BinomialPeak peak;
  if (n == t2) {
    // (n - theta2) C(n, theta2) vanishes: G_B increases on all of [0, 1].
    peak.p_star = 1.0;
  } else {
    const double log_ratio = std::log(static_cast<double>(n - t2)) +
                             LogChoose(n, t2) -
                             std::log(static_cast<double>(n - t1)) -
                             LogChoose(n, t1);
    peak.p_star = 1.0 / (1.0 + std::exp(log_ratio / (t2 - t1)));
  }
  peak.omega = window.k() * peak.p_star;
  return peak;
}

double GNormal(const ApproximationStats& stats, const DemandWindow& window) {
  const double lo = window.theta1() - 0.5;
  const double hi = window.theta2() + 0.5;
  if (stats.sigma <= 0.0) {
    return (lo < stats.mu && stats.mu <= hi) ? 1.0 : 0.0;
  }
  return NormalCdf((hi - stats.mu) / stats.sigma) -
         NormalCdf((lo - stats.mu) / stats.sigma);
}

double PoissonErrorBound(std::span<const double> probs) {
  double mu = 0.0;
  double sq = 0.0;
  for (double p : probs) {
    mu += p;
    sq += p * p;
  }
  if (mu <= 0.0) return 0.0;
  return std::min(1.0 / mu, 1.0) * sq;
}

double BinomialErrorBound(std::span<const double> probs) {
  if (probs.empty()) return 0.0;
  const double n = static_cast<double>(probs.size());
  double mu = 0.0;
  for (double p : probs) mu += p;
  const double q = mu / n;
  if (q <= 0.0 || q >= 1.0) return 0.0;
  double dispersion = 0.0;
  for (double p : probs) dispersion += (p - q) * (p - q);
  const double prefactor =
      (1.0 - std::pow(q, n + 1) - std::pow(1.0 - q, n + 1)) /
      ((n + 1) * q * (1.0 - q));
  return prefactor * dispersion;
}

}  // namespace crowdsel::pbd
