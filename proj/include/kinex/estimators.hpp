// Copyright 2026 The kinex Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "kinex/model.hpp"
#include "kinex/stationary.hpp"

namespace kinex::est {

/// 100 uniform bins on [0, 10] is the default binning for distribution
/// comparisons; log_edges(32 per decade) serves the tail plots. Both start
/// at 0 so the edge array always covers the origin.
std::vector<double> uniform_edges(double hi, int n_bins);
std::vector<double> log_edges(double lo, double hi, int per_decade);

/// Probability-mass histogram: one mass per bin plus an overflow mass for
/// samples beyond the last edge, so the total is exactly 1.
struct Histogram {
  std::vector<double> edges;
  std::vector<double> masses;
  double overflow_mass = 0.0;
  std::uint64_t n_samples = 0;
};

/// Count accumulator used to average the normalized distribution over a
/// window of sweeps (or to merge ensemble members).
class HistogramAccumulator {
 public:
  explicit HistogramAccumulator(std::vector<double> edges);

  void add(double value);
  void add_scaled(const std::vector<double>& values, double scale);
  void merge(const HistogramAccumulator& other);

  std::uint64_t count() const { return count_; }
  Histogram normalized() const;

 private:
  std::vector<double> edges_;
  std::vector<std::uint64_t> counts_;
  std::uint64_t overflow_ = 0;
  std::uint64_t count_ = 0;
};

Histogram histogram(const Population& pop, const std::vector<double>& edges);

/// Rescales every wealth by the current mean, so the result has mean
/// exactly 1. Idempotent and scale-equivariant.
Population normalize(const Population& pop);

struct TailFit {
  double estimate = 0.0;  // Pareto index estimate
  int k_used = 0;         // order statistics used
  double std_error = 0.0; // estimate / sqrt(k)
};

/// Hill estimator over the k largest order statistics,
/// k / sum_i log(X_(i) / X_(k+1)). Requires 10 <= k < n and positive tail
/// samples; throws on degenerate (constant) tails.
TailFit hill_estimator(std::vector<double> samples, std::size_t k);
/// Default k = ceil(sqrt(n)).
TailFit hill_estimator(std::vector<double> samples);

struct SlopeFit {
  double slope = 0.0;
  double r_squared = 0.0;
  std::size_t n_points = 0;
};

/// Least-squares slope of log ccdf against log w over the given points
/// (w > 0, ccdf > 0 required). For Pareto-tail data the slope approximates
/// minus the tail index.
SlopeFit fit_loglog(const std::vector<std::pair<double, double>>& w_ccdf);

/// Empirical complementary CDF from raw samples, fitted on w in
/// [w_lo, w_hi]. At least 10 points must fall in range.
SlopeFit loglog_ccdf_slope(std::vector<double> samples, double w_lo, double w_hi);

/// Complementary CDF read off the histogram bin edges, fitted on the same
/// range.
SlopeFit loglog_ccdf_slope(const Histogram& hist, double w_lo, double w_hi);

/// Total-variation style distance: sum over bins of |mass - analytic mass|
/// plus the mismatch of the overflow tail. Lies in [0, 2].
double l1_distance(const Histogram& hist, const fp::ParetoStationary& ps);

/// Kolmogorov-Smirnov distance of samples against an arbitrary CDF.
double ks_distance(std::vector<double> samples, const std::function<double(double)>& cdf);

}  // namespace kinex::est
