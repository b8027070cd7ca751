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

#include "livecase/stats.hpp"

#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <random>

#include "support/oracles.hpp"

using livecase::stats::binomial_pmf;
using livecase::stats::gamma_quantile;
using livecase::stats::poisson_rate_lower_bound;
using livecase::stats::poisson_rate_upper_bound;
using livecase::stats::poisson_two_sample_test;
using livecase::stats::regularized_gamma_p;

TEST_CASE("regularized gamma agrees with the Poisson closed form") {
  std::mt19937 rng(612);
  std::uniform_real_distribution<double> xs(0.0, 60.0);
  for (std::uint64_t k : {0ull, 1ull, 2ull, 5ull, 12ull, 30ull}) {
    for (int trial = 0; trial < 200; ++trial) {
      const double x = xs(rng);
      const double expected = oracles::gamma_cdf_integer_shape(k, x);
      const double actual = regularized_gamma_p(static_cast<double>(k) + 1.0, x);
      REQUIRE(actual == Catch::Approx(expected).margin(1e-12));
    }
  }
}

TEST_CASE("gamma quantile inverts the CDF") {
  for (std::uint64_t k : {0ull, 3ull, 17ull}) {
    for (double prob : {0.05, 0.5, 0.9, 0.95, 0.999}) {
      const double expected = oracles::gamma_quantile_integer_shape(k, prob);
      const double actual = gamma_quantile(static_cast<double>(k) + 1.0, prob);
      REQUIRE(actual == Catch::Approx(expected).epsilon(1e-10));
    }
  }
}

TEST_CASE("zero-event upper bound has the -ln(1-c)/T closed form") {
  const double bound = poisson_rate_upper_bound(0, 1000.0, 0.95);
  REQUIRE(bound == Catch::Approx(-std::log(0.05) / 1000.0).margin(1e-9));
  REQUIRE(bound == Catch::Approx(2.9957e-3).margin(1e-6));
}

TEST_CASE("upper bound dominates the point rate and shrinks with exposure") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> conf(0.5, 0.999);
  for (int trial = 0; trial < 300; ++trial) {
    const std::uint64_t k = rng() % 40;
    const double t = 1.0 + (rng() % 10000) / 10.0;
    const double c = conf(rng);
    const double ub = poisson_rate_upper_bound(k, t, c);
    REQUIRE(ub >= static_cast<double>(k) / t);
    // Scale exposure by 10 with the event count held to the same ratio.
    const double ub10 = poisson_rate_upper_bound(k * 10, t * 10.0, c);
    REQUIRE(ub10 <= ub + 1e-15);
  }
}

TEST_CASE("lower bound mirrors the upper bound") {
  const double lb = poisson_rate_lower_bound(20, 100.0, 0.95);
  const double expected = oracles::gamma_quantile_integer_shape(20, 0.05) / 100.0;
  REQUIRE(lb == Catch::Approx(expected).epsilon(1e-10));
  REQUIRE(lb <= 20.0 / 100.0);
}

TEST_CASE("binomial pmf matches Pascal-triangle values at p = 1/2") {
  for (std::uint64_t n : {1ull, 7ull, 25ull, 50ull}) {
    const auto choose = oracles::pascal_row(n);
    const double scale = std::ldexp(1.0, -static_cast<int>(n));
    for (std::uint64_t i = 0; i <= n; ++i) {
      REQUIRE(binomial_pmf(n, i, 0.5) == Catch::Approx(choose[i] * scale).epsilon(1e-12));
    }
  }
}

TEST_CASE("two-sample test: equal observed rates are consistent") {
  const auto r = poisson_two_sample_test(10, 1000.0, 10, 1000.0);
  REQUIRE(r.p_value == Catch::Approx(1.0).margin(1e-9));
  REQUIRE_FALSE(r.deviating);
}

TEST_CASE("two-sample test: a 30x imbalance deviates at alpha 0.05") {
  const auto r = poisson_two_sample_test(1, 1000.0, 30, 1000.0, 0.05);
  REQUIRE(r.deviating);
  const double expected = oracles::equal_exposure_p_value(1, 30);
  REQUIRE(r.p_value == Catch::Approx(expected).margin(1e-12));
}

TEST_CASE("two-sample test: no events at all is consistent by convention") {
  const auto r = poisson_two_sample_test(0, 50.0, 0, 70.0);
  REQUIRE(r.p_value == 1.0);
  REQUIRE_FALSE(r.deviating);
}

TEST_CASE("two-sample p-values match tail summation on the full k1+k2 <= 50 grid") {
  for (std::uint64_t n = 0; n <= 50; ++n) {
    for (std::uint64_t k1 = 0; k1 <= n; ++k1) {
      const std::uint64_t k2 = n - k1;
      const double expected = oracles::equal_exposure_p_value(k1, k2);
      const auto r = poisson_two_sample_test(k1, 123.0, k2, 123.0);
      REQUIRE(r.p_value == Catch::Approx(expected).margin(1e-12));
    }
  }
}

TEST_CASE("two-sample test is exactly symmetric in its samples") {
  std::mt19937 rng(99);
  for (int trial = 0; trial < 500; ++trial) {
    const std::uint64_t k1 = rng() % 40;
    const std::uint64_t k2 = rng() % 40;
    const double t1 = 1.0 + (rng() % 5000) / 7.0;
    const double t2 = 1.0 + (rng() % 5000) / 7.0;
    const auto a = poisson_two_sample_test(k1, t1, k2, t2);
    const auto b = poisson_two_sample_test(k2, t2, k1, t1);
    REQUIRE(a.p_value == b.p_value);
    REQUIRE(a.deviating == b.deviating);
  }
}

TEST_CASE("stats reject degenerate inputs") {
  REQUIRE_THROWS_AS(poisson_rate_upper_bound(1, 0.0, 0.95), livecase::InvalidInput);
  REQUIRE_THROWS_AS(poisson_two_sample_test(1, -1.0, 1, 1.0), livecase::InvalidInput);
  REQUIRE_THROWS_AS(gamma_quantile(0.0, 0.5), livecase::InvalidInput);
  REQUIRE_THROWS_AS(gamma_quantile(1.0, 1.0), livecase::InvalidInput);
}
