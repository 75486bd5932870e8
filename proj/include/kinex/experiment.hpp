// Copyright 2026 The kinex Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "kinex/fp_solver.hpp"
#include "kinex/simulation.hpp"

namespace kinex::cli {

/// Invalid or inconsistent configuration; the CLI maps this to exit code 1.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Mode { Mc, Fp, Compare, VerifyOde, VerifyBounds };

const char* to_string(Mode mode);
Mode mode_from_string(const std::string& name);

struct FpSection {
  double w_max = 20.0;
  int n_cells = 2000;
  double dt = 0.05;
  double tol = 1e-9;
  long max_iters = 400000;
  std::string initial = "uniform";  // "uniform" or "stationary"
  double init_lo = 0.0;
  double init_hi = 2.0;
};

struct HistSection {
  int n_bins = 100;
  double w_max = 10.0;
  int log_per_decade = 32;
  double log_lo = 0.1;
  double log_hi = 100.0;
  double slope_lo = 2.5;  // ccdf slope fit range (normalized units)
  double slope_hi = 10.0;
};

struct BoundsSection {
  double p = 3.0;
  double c_p = 1.0;
  long record_stride = 50;
};

struct OdeSection {
  std::vector<double> check_times{5.0, 10.0, 20.0};
  double spread0 = 1.0;
};

struct ExperimentSpec {
  Mode mode = Mode::Compare;
  mc::SimConfig sim;
  int runs = 1;
  FpSection fp;
  HistSection hist;
  BoundsSection bounds;
  OdeSection ode;
  std::string out_dir = "out";
  std::vector<std::string> formats{"csv"};
};

/// Strict parse: unknown keys and type mismatches are rejected with the
/// offending key named. All defaults are materialized, so the effective
/// spec is fully explicit.
ExperimentSpec parse_config_json(const nlohmann::json& j);
ExperimentSpec parse_config_file(const std::string& path);

/// Emits the effective spec; parse_config_json(spec_to_json(s)) round-trips.
nlohmann::ordered_json spec_to_json(const ExperimentSpec& spec);

/// Executes the experiment and writes all artifact files under out_dir.
/// Returns 0 on success and 3 when a verify-* check fails.
int run_experiment(const ExperimentSpec& spec);

}  // namespace kinex::cli
