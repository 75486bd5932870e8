// Copyright 2026 The kinex Authors
// SPDX-License-Identifier: Apache-2.0

#include "kinex/model.hpp"

#include <cmath>
#include <stdexcept>

#include "doctest.h"

using namespace kinex;

TEST_CASE("trade rule on hand-evaluated cases") {
  SUBCASE("symmetric deterministic fixed point") {
    const auto out = apply_trade({1.0, 1.0}, 0.0, 0.0, 0.1);
    CHECK(out.w == doctest::Approx(1.0));
    CHECK(out.w_star == doctest::Approx(1.0));
  }
  SUBCASE("one-sided return") {
    const auto out = apply_trade({2.0, 0.0}, 0.05, 0.0, 0.1);
    CHECK(out.w == doctest::Approx(1.9));
    CHECK(out.w_star == doctest::Approx(0.2));
  }
  SUBCASE("gamma one half splits wealth equally") {
    const auto out = apply_trade({1.0, 3.0}, 0.0, 0.0, 0.5);
    CHECK(out.w == doctest::Approx(2.0));
    CHECK(out.w_star == doctest::Approx(2.0));
  }
}

TEST_CASE("admissibility is simple non-negativity of both parts") {
  CHECK(is_admissible({1.9, 0.2}));
  CHECK_FALSE(is_admissible({-0.1, 0.5}));
  CHECK_FALSE(is_admissible({0.5, -1e-300}));
  CHECK(is_admissible({0.0, 0.0}));
}

TEST_CASE("deterministic trades conserve the pair total") {
  RngStream rng(1);
  for (int i = 0; i < 2000; ++i) {
    const double w = 10.0 * rng.uniform01();
    const double ws = 10.0 * rng.uniform01();
    const double gamma = 0.999 * rng.uniform_open01();
    const auto out = apply_trade({w, ws}, 0.0, 0.0, gamma);
    CHECK(out.w + out.w_star == doctest::Approx(w + ws).epsilon(1e-14));
    // mean contraction of the difference
    CHECK(out.w - out.w_star ==
          doctest::Approx((1.0 - 2.0 * gamma) * (w - ws)).epsilon(1e-12).scale(1.0));
  }
}

TEST_CASE("antithetic noise pairs conserve total and contract difference on average") {
  RngStream rng(2);
  for (int i = 0; i < 2000; ++i) {
    const double w = 10.0 * rng.uniform01();
    const double ws = 10.0 * rng.uniform01();
    const double gamma = 0.999 * rng.uniform_open01();
    const double eta = rng.normal();
    const double eta_star = rng.normal();
    const auto plus = apply_trade({w, ws}, eta, eta_star, gamma);
    const auto minus = apply_trade({w, ws}, -eta, -eta_star, gamma);
    const double avg_total = 0.5 * (plus.w + plus.w_star + minus.w + minus.w_star);
    CHECK(avg_total == doctest::Approx(w + ws).epsilon(1e-13));
    const double avg_diff = 0.5 * ((plus.w - plus.w_star) + (minus.w - minus.w_star));
    CHECK(avg_diff ==
          doctest::Approx((1.0 - 2.0 * gamma) * (w - ws)).epsilon(1e-11).scale(1.0));
  }
}

TEST_CASE("bounded noise keeps every outcome admissible") {
  RngStream rng(3);
  for (double gamma : {0.05, 0.3, 0.7}) {
    const double sigma = 0.9 * (1.0 - gamma) / std::sqrt(3.0);
    for (auto kind : {NoiseKind::BoundedUniform, NoiseKind::BoundedTruncatedNormal}) {
      const auto model = NoiseModel::make(kind, sigma, gamma);
      for (int i = 0; i < 20000; ++i) {
        const double w = 100.0 * rng.uniform01();
        const double ws = 100.0 * rng.uniform01();
        const double eta = model.sample(rng);
        const double eta_star = model.sample(rng);
        REQUIRE(std::abs(eta) < 1.0 - gamma);
        REQUIRE(is_admissible(apply_trade({w, ws}, eta, eta_star, gamma)));
      }
    }
  }
}

TEST_CASE("noise samplers honour their variance contract") {
  RngStream rng(4);
  SUBCASE("bounded uniform support") {
    const auto model = NoiseModel::bounded_uniform(std::sqrt(0.02), 0.1);
    for (int i = 0; i < 100000; ++i) {
      const double eta = model.sample(rng);
      REQUIRE(std::abs(eta) < 0.9);
    }
  }
  SUBCASE("degenerate sigma") {
    const auto model = NoiseModel::normal(0.0);
    for (int i = 0; i < 100; ++i) CHECK(model.sample(rng) == 0.0);
  }
  SUBCASE("normal variance") {
    const auto model = NoiseModel::normal(std::sqrt(0.02));
    const int n = 1000000;
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < n; ++i) {
      const double eta = model.sample(rng);
      sum += eta;
      sum2 += eta * eta;
    }
    const double mean = sum / n;
    CHECK(std::abs(mean) < 0.001);
    CHECK(sum2 / n - mean * mean == doctest::Approx(0.02).epsilon(0.05));
  }
  SUBCASE("calibrated truncated normal variance") {
    const auto model = NoiseModel::bounded_truncated_normal(0.3, 0.1);
    const int n = 1000000;
    double sum2 = 0.0;
    for (int i = 0; i < n; ++i) {
      const double eta = model.sample(rng);
      REQUIRE(std::abs(eta) < 0.9);
      sum2 += eta * eta;
    }
    CHECK(sum2 / n == doctest::Approx(0.09).epsilon(0.01));
  }
}

TEST_CASE("bounded construction rejects oversized sigma") {
  // uniform on (-0.9, 0.9) caps sigma^2 at 0.27
  CHECK_THROWS_AS(NoiseModel::bounded_uniform(std::sqrt(0.28), 0.1), std::invalid_argument);
  CHECK_THROWS_AS(NoiseModel::bounded_truncated_normal(std::sqrt(0.27), 0.1),
                  std::invalid_argument);
  CHECK_NOTHROW(NoiseModel::bounded_uniform(std::sqrt(0.26), 0.1));
}

TEST_CASE("trade params derive lambda and validate ranges") {
  const TradeParams p(0.01, 0.02);
  CHECK(p.lambda() == doctest::Approx(2.0));
  CHECK(p.sigma() == doctest::Approx(std::sqrt(0.02)));
  CHECK_THROWS_AS(TradeParams(0.0, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(TradeParams(1.0, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(TradeParams(0.5, -0.1), std::invalid_argument);
}

TEST_CASE("population helpers") {
  const Population pop{{2.0, 0.0, 1.0}};
  CHECK(total_wealth(pop) == doctest::Approx(3.0));
  CHECK(mean_wealth(pop) == doctest::Approx(1.0));
  CHECK(second_moment(pop) == doctest::Approx(5.0 / 3.0));
  CHECK(wealth_moment(pop, 3.0) == doctest::Approx(3.0));
  CHECK_NOTHROW(validate_population(pop));
  CHECK_THROWS_AS(validate_population(Population{{-1.0, 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(validate_population(Population{{1.0}}), std::invalid_argument);
}
