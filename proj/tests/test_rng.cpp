// Copyright 2026 The kinex Authors
// SPDX-License-Identifier: Apache-2.0

#include "kinex/rng.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"

using kinex::RngStream;

TEST_CASE("identical (seed, stream) pairs replay the same sequence") {
  RngStream a(42, 3), b(42, 3);
  for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("different streams from one seed decorrelate") {
  RngStream a(42, 0), b(42, 1);
  int agree = 0;
  for (int i = 0; i < 1000; ++i)
    if (a.next_u64() == b.next_u64()) ++agree;
  CHECK(agree == 0);
}

TEST_CASE("uniform01 stays in [0,1) with the right mean") {
  RngStream rng(7);
  double sum = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform01();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  CHECK(sum / n == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("uniform_open01 avoids both endpoints") {
  RngStream rng(11);
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.uniform_open01();
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
  }
}

TEST_CASE("uniform_below covers the range uniformly") {
  RngStream rng(5);
  std::vector<int> counts(10, 0);
  const int n = 100000;
  for (int i = 0; i < n; ++i) ++counts[rng.uniform_below(10)];
  for (int c : counts) CHECK(std::abs(c - n / 10) < 5 * std::sqrt(n / 10.0));
  CHECK_THROWS_AS(rng.uniform_below(0), std::invalid_argument);
}

TEST_CASE("normal deviates have zero mean and unit variance") {
  RngStream rng(13);
  const int n = 1000000;
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = rng.normal();
    sum += x;
    sum2 += x * x;
  }
  const double mean = sum / n;
  const double var = sum2 / n - mean * mean;
  CHECK(std::abs(mean) < 5.0 / std::sqrt(static_cast<double>(n)));
  CHECK(var == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("gamma variates match the target mean and variance") {
  RngStream rng(17);
  const double shape = 3.0, scale = 0.5;
  const int n = 400000;
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = kinex::gamma_variate(rng, shape, scale);
    REQUIRE(x > 0.0);
    sum += x;
    sum2 += x * x;
  }
  const double mean = sum / n;
  const double var = sum2 / n - mean * mean;
  CHECK(mean == doctest::Approx(shape * scale).epsilon(0.01));
  CHECK(var == doctest::Approx(shape * scale * scale).epsilon(0.03));
}
