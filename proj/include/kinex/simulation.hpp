// Copyright 2026 The kinex Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "kinex/estimators.hpp"
#include "kinex/model.hpp"
#include "kinex/rng.hpp"

namespace kinex::mc {

/// How the wealth vector starts: everyone with the same amount, or an
/// explicit vector.
struct InitialCondition {
  enum class Kind { AllEqual, Custom };
  Kind kind = Kind::AllEqual;
  double value = 1.0;
  std::vector<double> wealths;

  static InitialCondition all_equal(double value);
  static InitialCondition custom(std::vector<double> wealths);
};

struct SimConfig {
  std::size_t n_agents = 2000;
  TradeParams params{0.01, 0.02};
  NoiseKind noise_kind = NoiseKind::BoundedUniform;
  InitialCondition initial = InitialCondition::all_equal(1.0);
  long sweeps = 5250;
  long burn_in = 5000;
  long averaging_window = 250;
  std::uint64_t seed = 12345;
  /// Binning of the accumulated normalized distribution.
  std::vector<double> histogram_edges = est::uniform_edges(10.0, 100);
  /// Optional second binning (e.g. logarithmic, for tail plots) accumulated
  /// in the same pass; empty to skip.
  std::vector<double> log_histogram_edges;
  /// Sweep indices at which the full wealth vector is snapshotted.
  std::vector<long> dump_sweeps;

  NoiseModel make_noise() const;
};

/// One unit of kinetic time = one sweep = floor(N/2) attempted pair trades,
/// so each agent trades once per sweep on average. The scaled time
/// tau = gamma * t is maintained alongside.
struct SimState {
  Population population;
  TradeParams params;
  NoiseModel noise;
  RngStream rng;
  double t = 0.0;
  double tau = 0.0;
  std::uint64_t trades_attempted = 0;
  std::uint64_t trades_rejected = 0;
};

/// Builds the initial state; the RNG stream is derived deterministically
/// from (config.seed, stream), so ensemble members decorrelate by stream
/// index.
SimState init(const SimConfig& config, std::uint64_t stream = 0);

/// floor(N/2) attempted trades: draw a distinct pair uniformly (with
/// replacement across attempts), draw (eta, eta_star), commit the candidate
/// iff admissible; an inadmissible attempt leaves both wealths unchanged but
/// still advances time.
void sweep(SimState& state);

/// Per-sweep record of t, tau = gamma t, mean wealth m(t), spread A(t) and
/// the cumulative rejected fraction; entry 0 is the initial state.
struct SnapshotSeries {
  std::vector<double> t;
  std::vector<double> tau;
  std::vector<double> mean_wealth;
  std::vector<double> spread;
  std::vector<double> rejected_frac;
  std::vector<std::pair<long, std::vector<double>>> dumps;  // (sweep, wealths)

  std::size_t size() const { return t.size(); }
};

struct RunResult {
  SnapshotSeries series;
  est::Histogram f_tilde;  // window-averaged normalized distribution
  std::optional<est::Histogram> f_tilde_log;  // present iff log edges configured
  Population final_population;
};

/// Runs config.sweeps sweeps; after the burn-in, the normalized wealths
/// w / m(t) are accumulated into a histogram over averaging_window sweeps
/// (an averaging_window of 0 falls back to the final-sweep snapshot).
RunResult run(const SimConfig& config, std::uint64_t stream = 0);

/// Pointwise mean and standard error of m(t) and A(t) over independent runs
/// with decorrelated streams 0..n_runs-1. Runs execute concurrently; the
/// reduction order is fixed, so results are reproducible.
struct EnsembleSeries {
  std::vector<double> t;
  std::vector<double> tau;
  std::vector<double> mean_wealth;
  std::vector<double> mean_wealth_stderr;
  std::vector<double> spread;
  std::vector<double> spread_stderr;
  int n_runs = 0;
};

/// Fixed-order pointwise aggregation of per-run series.
EnsembleSeries aggregate_series(const std::vector<SnapshotSeries>& series);

EnsembleSeries run_ensemble(const SimConfig& config, int n_runs);

}  // namespace kinex::mc
