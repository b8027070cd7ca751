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
// Independent test oracles. Each of these recomputes an expected value by a
// route deliberately different from the implementation under test: closed
// forms, exhaustive enumeration, or exact integer arithmetic.

#ifndef LIVECASE_TESTS_ORACLES_HPP
#define LIVECASE_TESTS_ORACLES_HPP

#include <cmath>
#include <cstdint>
#include <vector>

namespace oracles {

// Gamma(k+1, 1) CDF at x through the Poisson identity
// P(k+1, x) = 1 - sum_{i<=k} e^-x x^i / i!, exact for integer shapes.
inline double gamma_cdf_integer_shape(std::uint64_t k, double x) {
  if (x <= 0.0) return 0.0;
  double term = std::exp(-x);  // i = 0
  double sum = term;
  for (std::uint64_t i = 1; i <= k; ++i) {
    term *= x / static_cast<double>(i);
    sum += term;
  }
  return 1.0 - sum;
}

// Quantile of Gamma(k+1, 1) by bisection on the closed-form CDF.
inline double gamma_quantile_integer_shape(std::uint64_t k, double prob) {
  double lo = 0.0;
  double hi = 1.0;
  while (gamma_cdf_integer_shape(k, hi) < prob) hi *= 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (gamma_cdf_integer_shape(k, mid) < prob) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return hi;
}

// Exact binomial coefficients via Pascal's triangle. Values up to C(50,25)
// stay below 2^53, so the doubles are exact.
inline std::vector<double> pascal_row(std::uint64_t n) {
  std::vector<double> row{1.0};
  for (std::uint64_t r = 1; r <= n; ++r) {
    std::vector<double> next(r + 1, 1.0);
    for (std::uint64_t i = 1; i < r; ++i) next[i] = row[i - 1] + row[i];
    row = std::move(next);
  }
  return row;
}

// Two-sided conditional binomial p-value at p0 = 1/2 (the equal-exposure
// case), using exact pmf values C(n,i) / 2^n.
inline double equal_exposure_p_value(std::uint64_t k1, std::uint64_t k2) {
  const std::uint64_t n = k1 + k2;
  if (n == 0) return 1.0;
  const std::vector<double> choose = pascal_row(n);
  const double scale = std::ldexp(1.0, -static_cast<int>(n));  // exact 2^-n
  const double observed = choose[k2] * scale;
  const double cutoff = observed * (1.0 + 1e-7);
  double p = 0.0;
  for (std::uint64_t i = 0; i <= n; ++i) {
    const double pi = choose[i] * scale;
    if (pi <= cutoff) p += pi;
  }
  return p < 1.0 ? p : 1.0;
}

}  // namespace oracles

#endif  // LIVECASE_TESTS_ORACLES_HPP
