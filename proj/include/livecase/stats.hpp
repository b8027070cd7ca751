// Copyright 2026 The livecase Authors
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
//
// Rare-event rate statistics: Gamma-Poisson credible bounds for event rates
// and an exact conditional two-sample Poisson comparison. Everything here is
// deterministic double-precision arithmetic with no external dependencies.

#ifndef LIVECASE_STATS_HPP
#define LIVECASE_STATS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include "livecase/diagnostics.hpp"

namespace livecase::stats {

/// Regularized lower incomplete gamma P(a, x) = gamma(a, x) / Gamma(a).
/// Series expansion for x < a + 1, Lentz continued fraction otherwise.
inline double regularized_gamma_p(double a, double x) {
  if (!(a > 0.0) || !(x >= 0.0) || !std::isfinite(a) || !std::isfinite(x)) {
    throw InvalidInput("regularized_gamma_p: require a > 0 and x >= 0");
  }
  if (x == 0.0) return 0.0;
  const double log_prefix = a * std::log(x) - x - std::lgamma(a);
  if (x < a + 1.0) {
    // P(a,x) via the ascending series.
    double term = 1.0 / a;
    double sum = term;
    double ap = a;
    for (int n = 0; n < 1000; ++n) {
      ap += 1.0;
      term *= x / ap;
      sum += term;
      if (std::fabs(term) < std::fabs(sum) * 1e-17) break;
    }
    return std::min(1.0, sum * std::exp(log_prefix));
  }
  // Q(a,x) via the continued fraction (modified Lentz).
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 1000; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < 1e-17) break;
  }
  const double q = std::exp(log_prefix) * h;
  return std::max(0.0, 1.0 - q);
}

/// Smallest x with P(shape, x) >= prob, i.e. the `prob` quantile of a
/// Gamma(shape, rate=1) distribution. Bracketing plus bisection; the CDF is
/// monotone so ~120 halvings reach double resolution.
inline double gamma_quantile(double shape, double prob) {
  if (!(shape > 0.0) || !(prob > 0.0) || !(prob < 1.0)) {
    throw InvalidInput("gamma_quantile: require shape > 0 and prob in (0,1)");
  }
  double lo = 0.0;
  double hi = std::max(shape, 1.0);
  for (int i = 0; i < 300 && regularized_gamma_p(shape, hi) < prob; ++i) hi *= 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (regularized_gamma_p(shape, mid) < prob) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return hi;
}

/// One-sided upper credible bound for a Poisson rate after observing k events
/// over exposure t. Posterior under the improper Gamma(1, 0) prior is
/// Gamma(k + 1, t); the bound is its `confidence` quantile. Never reported
/// below the point estimate k / t.
inline double poisson_rate_upper_bound(std::uint64_t k, double t, double confidence) {
  if (!(t > 0.0)) throw InvalidInput("poisson_rate_upper_bound: exposure must be > 0");
  if (!(confidence > 0.0) || !(confidence < 1.0)) {
    throw InvalidInput("poisson_rate_upper_bound: confidence must be in (0,1)");
  }
  const double q = gamma_quantile(static_cast<double>(k) + 1.0, confidence);
  return std::max(q / t, static_cast<double>(k) / t);
}

/// Mirror of the upper bound: the (1 - confidence) quantile of the same
/// posterior, clamped to the point estimate from above.
inline double poisson_rate_lower_bound(std::uint64_t k, double t, double confidence) {
  if (!(t > 0.0)) throw InvalidInput("poisson_rate_lower_bound: exposure must be > 0");
  if (!(confidence > 0.0) || !(confidence < 1.0)) {
    throw InvalidInput("poisson_rate_lower_bound: confidence must be in (0,1)");
  }
  const double q = gamma_quantile(static_cast<double>(k) + 1.0, 1.0 - confidence);
  return std::min(q / t, static_cast<double>(k) / t);
}

namespace detail {

// log C(n, i) with the two lgamma subtrahends applied in a fixed order so the
// result is bit-identical under i <-> n - i.
inline double log_choose_symmetric(std::uint64_t n, std::uint64_t i) {
  const double a = std::lgamma(static_cast<double>(i) + 1.0);
  const double b = std::lgamma(static_cast<double>(n - i) + 1.0);
  return std::lgamma(static_cast<double>(n) + 1.0) - std::max(a, b) - std::min(a, b);
}

}  // namespace detail

/// Binomial pmf via log-gamma. Exact enough for tail summation at the n <= a
/// few thousand scale used here.
inline double binomial_pmf(std::uint64_t n, std::uint64_t i, double p) {
  if (i > n) throw InvalidInput("binomial_pmf: i > n");
  if (p < 0.0 || p > 1.0) throw InvalidInput("binomial_pmf: p outside [0,1]");
  if (p == 0.0) return i == 0 ? 1.0 : 0.0;
  if (p == 1.0) return i == n ? 1.0 : 0.0;
  const double logp = detail::log_choose_symmetric(n, i) +
                      static_cast<double>(i) * std::log(p) +
                      static_cast<double>(n - i) * std::log1p(-p);
  return std::exp(logp);
}

struct RateComparison {
  double p_value = 1.0;
  bool deviating = false;
};

/// Exact conditional two-sample Poisson rate comparison. Given totals
/// n = k1 + k2, the second sample's count is Binomial(n, t2 / (t1 + t2))
/// under the null of equal rates; the two-sided p-value sums every outcome
/// whose probability does not exceed the observed one (with the customary
/// 1 + 1e-7 tie tolerance). Inputs are canonically ordered first, so swapping
/// the samples yields a bit-identical p-value.
inline RateComparison poisson_two_sample_test(std::uint64_t k1, double t1, std::uint64_t k2,
                                              double t2, double alpha = 0.05) {
  if (!(t1 > 0.0) || !(t2 > 0.0)) {
    throw InvalidInput("poisson_two_sample_test: both exposures must be > 0");
  }
  if (!(alpha > 0.0) || !(alpha < 1.0)) {
    throw InvalidInput("poisson_two_sample_test: alpha must be in (0,1)");
  }
  if (t2 < t1 || (t2 == t1 && k2 < k1)) {
    std::swap(k1, k2);
    std::swap(t1, t2);
  }
  const std::uint64_t n = k1 + k2;
  if (n == 0) return {1.0, false};

  const double p0 = t2 / (t1 + t2);
  const double observed = binomial_pmf(n, k2, p0);
  const double cutoff = observed * (1.0 + 1e-7);
  double p = 0.0;
  for (std::uint64_t i = 0; i <= n; ++i) {
    const double pi = binomial_pmf(n, i, p0);
    if (pi <= cutoff) p += pi;
  }
  p = std::min(p, 1.0);
  return {p, p <= alpha};
}

}  // namespace livecase::stats

#endif  // LIVECASE_STATS_HPP
