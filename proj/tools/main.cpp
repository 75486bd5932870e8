// Copyright 2026 The kinex Authors
// SPDX-License-Identifier: Apache-2.0
//
// Experiment driver. A JSON config file supplies the experiment; any flag
// given on the command line overrides the corresponding config key. The
// effective merged spec is always written to <out>/summary.json.

#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "kinex/experiment.hpp"
#include "kinex/version.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_config_error = 1;
constexpr int exit_runtime_error = 2;
// verify-* modes return 3 themselves when a check fails

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string(kinex::project_name) + " " + kinex::project_version +
               " - kinetic wealth-exchange simulator"};
  app.get_formatter()->column_width(34);

  std::string config_path;
  std::string mode, noise, out_dir;
  double gamma = 0, sigma2 = 0, alpha = 0;
  std::uint64_t n_agents = 0, seed = 0;
  long sweeps = 0, burn_in = 0, window = 0;
  int runs = 0;
  std::vector<long> dump_sweeps;
  double fp_wmax = 0, fp_dt = 0, fp_tol = 0;
  int fp_cells = 0;

  auto* opt_config = app.add_option("-c,--config", config_path, "JSON config file");
  auto* opt_mode =
      app.add_option("--mode", mode, "mc | fp | compare | verify-ode | verify-bounds");
  auto* opt_gamma = app.add_option("--gamma", gamma, "transaction coefficient in (0,1)");
  auto* opt_sigma2 = app.add_option("--sigma2", sigma2, "return-noise variance");
  auto* opt_alpha = app.add_option("--alpha", alpha, "finite extra moment order of the noise");
  auto* opt_noise = app.add_option(
      "--noise", noise, "normal | bounded_uniform | bounded_truncated_normal");
  auto* opt_agents = app.add_option("--n-agents", n_agents, "number of agents");
  auto* opt_sweeps = app.add_option("--sweeps", sweeps, "total sweeps (N/2 trades each)");
  auto* opt_burnin = app.add_option("--burn-in", burn_in, "sweeps before averaging");
  auto* opt_window = app.add_option("--window", window, "averaging window in sweeps");
  auto* opt_seed = app.add_option("--seed", seed, "master RNG seed");
  auto* opt_runs = app.add_option("--runs", runs, "ensemble size");
  auto* opt_out = app.add_option("--out", out_dir, "output directory");
  auto* opt_dumps =
      app.add_option("--dump-population", dump_sweeps, "sweep indices to dump wealth vectors");
  auto* opt_fp_wmax = app.add_option("--fp-wmax", fp_wmax, "FP domain truncation");
  auto* opt_fp_cells = app.add_option("--fp-cells", fp_cells, "FP grid cells");
  auto* opt_fp_dt = app.add_option("--fp-dt", fp_dt, "FP time step");
  auto* opt_fp_tol = app.add_option("--fp-tol", fp_tol, "FP steady-state tolerance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_config_error;
  }

  try {
    kinex::cli::ExperimentSpec spec;
    if (opt_config->count() > 0) spec = kinex::cli::parse_config_file(config_path);

    if (opt_mode->count()) spec.mode = kinex::cli::mode_from_string(mode);
    double g = spec.sim.params.gamma, s2 = spec.sim.params.sigma2, a = spec.sim.params.alpha;
    if (opt_gamma->count()) g = gamma;
    if (opt_sigma2->count()) s2 = sigma2;
    if (opt_alpha->count()) a = alpha;
    try {
      spec.sim.params = kinex::TradeParams(g, s2, a);
    } catch (const std::invalid_argument& err) {
      throw kinex::cli::ConfigError(err.what());
    }
    if (opt_noise->count()) spec.sim.noise_kind = kinex::noise_kind_from_string(noise);
    if (opt_agents->count()) spec.sim.n_agents = static_cast<std::size_t>(n_agents);
    if (opt_sweeps->count()) spec.sim.sweeps = sweeps;
    if (opt_burnin->count()) spec.sim.burn_in = burn_in;
    if (opt_window->count()) spec.sim.averaging_window = window;
    if (opt_seed->count()) spec.sim.seed = seed;
    if (opt_runs->count()) spec.runs = runs;
    if (opt_out->count()) spec.out_dir = out_dir;
    if (opt_dumps->count()) spec.sim.dump_sweeps = dump_sweeps;
    if (opt_fp_wmax->count()) spec.fp.w_max = fp_wmax;
    if (opt_fp_cells->count()) spec.fp.n_cells = fp_cells;
    if (opt_fp_dt->count()) spec.fp.dt = fp_dt;
    if (opt_fp_tol->count()) spec.fp.tol = fp_tol;

    if (spec.runs < 1) throw kinex::cli::ConfigError("runs must be at least 1");
    if (spec.sim.burn_in + spec.sim.averaging_window > spec.sim.sweeps)
      throw kinex::cli::ConfigError("burn_in + window must not exceed sweeps");

    return kinex::cli::run_experiment(spec);
  } catch (const kinex::cli::ConfigError& err) {
    std::fprintf(stderr, "config error: %s\n", err.what());
    return exit_config_error;
  } catch (const std::invalid_argument& err) {
    std::fprintf(stderr, "config error: %s\n", err.what());
    return exit_config_error;
  } catch (const std::exception& err) {
    std::fprintf(stderr, "error: %s\n", err.what());
    return exit_runtime_error;
  }
  return exit_ok;
}
