// Copyright 2026 The kinex Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>

namespace kinex {

/// Deterministic per-stream random source.
///
/// xoshiro256++ seeded through splitmix64 from a (seed, stream) pair, so a
/// run, an ensemble member or a worker thread can derive its own decorrelated
/// stream without coordination. The generator is part of the reproducibility
/// contract: identical (seed, stream) pairs replay identical draws across
/// platforms, and the choice is fixed per release.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t next_u64();

  /// Uniform in [0, 1), 53-bit resolution.
  double uniform01();

  /// Uniform in the open interval (0, 1).
  double uniform_open01();

  /// Uniform integer in [0, n); n must be positive. Rejection keeps the
  /// draw exactly uniform.
  std::uint64_t uniform_below(std::uint64_t n);

  /// Standard normal deviate (Marsaglia polar method, second value cached).
  double normal();

 private:
  std::array<std::uint64_t, 4> state_{};
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

/// One draw from Gamma(shape, scale) via Marsaglia-Tsang squeeze.
double gamma_variate(RngStream& rng, double shape, double scale);

}  // namespace kinex
