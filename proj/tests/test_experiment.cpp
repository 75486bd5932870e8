// Copyright 2026 The kinex Authors
// SPDX-License-Identifier: Apache-2.0

#include "kinex/experiment.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"

using namespace kinex::cli;
using nlohmann::json;

namespace {

std::filesystem::path fresh_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "kinex_tests" / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("minimal config picks documented defaults") {
  const auto spec = parse_config_json(json{{"mode", "mc"}, {"gamma", 0.1}, {"sigma2", 0.02},
                                           {"n_agents", 500}});
  CHECK(spec.mode == Mode::Mc);
  CHECK(spec.sim.params.gamma == doctest::Approx(0.1));
  CHECK(spec.sim.n_agents == 500);
  CHECK(spec.sim.burn_in == 5000);
  CHECK(spec.sim.averaging_window == 250);
  CHECK(spec.sim.noise_kind == kinex::NoiseKind::BoundedUniform);
  CHECK(spec.runs == 1);
  CHECK(spec.hist.n_bins == 100);
}

TEST_CASE("config validation errors name the offending key") {
  SUBCASE("negative sigma2") {
    try {
      parse_config_json(json{{"mode", "mc"}, {"sigma2", -0.5}});
      FAIL("expected ConfigError");
    } catch (const ConfigError& err) {
      CHECK(std::string(err.what()).find("sigma2") != std::string::npos);
    }
  }
  SUBCASE("unknown key rejected") {
    try {
      parse_config_json(json{{"mode", "mc"}, {"sigma2_typo", 1.0}});
      FAIL("expected ConfigError");
    } catch (const ConfigError& err) {
      CHECK(std::string(err.what()).find("unknown config key") != std::string::npos);
    }
  }
  SUBCASE("nested unknown key rejected") {
    CHECK_THROWS_AS(parse_config_json(json{{"fp", {{"cells", 100}}}}), ConfigError);
  }
  SUBCASE("type mismatch reported with the key path") {
    try {
      parse_config_json(json{{"fp", {{"n_cells", "many"}}}});
      FAIL("expected ConfigError");
    } catch (const ConfigError& err) {
      CHECK(std::string(err.what()).find("fp.n_cells") != std::string::npos);
    }
  }
  SUBCASE("bad mode") {
    CHECK_THROWS_AS(parse_config_json(json{{"mode", "warp"}}), ConfigError);
  }
  SUBCASE("negative value for an unsigned key") {
    CHECK_THROWS_AS(parse_config_json(json{{"n_agents", -5}}), ConfigError);
    CHECK_THROWS_AS(parse_config_json(json{{"seed", -1}}), ConfigError);
  }
  SUBCASE("window accounting") {
    CHECK_THROWS_AS(
        parse_config_json(json{{"sweeps", 10}, {"burn_in", 8}, {"window", 5}}),
        ConfigError);
  }
}

TEST_CASE("spec round-trips through its JSON form") {
  ExperimentSpec spec;
  spec.mode = Mode::Compare;
  spec.sim.params = kinex::TradeParams(0.05, 0.07, 1.5);
  spec.sim.n_agents = 321;
  spec.sim.seed = 99;
  spec.runs = 3;
  spec.fp.n_cells = 123;
  spec.ode.check_times = {1.0, 2.0};
  spec.out_dir = "somewhere";
  const auto emitted = spec_to_json(spec);
  const auto reparsed = parse_config_json(emitted);
  CHECK(spec_to_json(reparsed) == emitted);
}

TEST_CASE("compare experiment writes the documented artifact set") {
  const auto dir = fresh_dir("compare");
  ExperimentSpec spec;
  spec.mode = Mode::Compare;
  spec.sim.params = kinex::TradeParams(0.05, 0.1);
  spec.sim.n_agents = 300;
  spec.sim.sweeps = 150;
  spec.sim.burn_in = 100;
  spec.sim.averaging_window = 50;
  spec.sim.seed = 11;
  spec.out_dir = dir.string();
  CHECK(run_experiment(spec) == 0);

  for (const char* name :
       {"moments.csv", "hist_linear.csv", "hist_log.csv", "gstar.csv", "summary.json"})
    CHECK(std::filesystem::exists(dir / name));

  const std::string moments = slurp(dir / "moments.csv");
  CHECK(moments.find("t,tau,m,A,rejected_frac") != std::string::npos);
  CHECK(moments.find("# spec=") != std::string::npos);
  const std::string hist = slurp(dir / "hist_linear.csv");
  CHECK(hist.find("w_lo,w_hi,mass,analytic_mass") != std::string::npos);

  const auto summary = json::parse(slurp(dir / "summary.json"));
  CHECK(summary["derived"]["lambda"].get<double>() == doctest::Approx(2.0));
  CHECK(summary["derived"]["mu"].get<double>() == doctest::Approx(2.0));
  CHECK(summary["results"].contains("l1_distance"));
  CHECK(summary["results"].contains("ccdf_slope"));
  CHECK(summary["results"].contains("tail_fit"));
  CHECK(summary["spec"]["seed"].get<std::uint64_t>() == 11);
}

TEST_CASE("identical spec and seed give byte-identical outputs") {
  ExperimentSpec spec;
  spec.mode = Mode::Compare;
  spec.sim.params = kinex::TradeParams(0.05, 0.1);
  spec.sim.n_agents = 200;
  spec.sim.sweeps = 80;
  spec.sim.burn_in = 50;
  spec.sim.averaging_window = 30;
  spec.sim.seed = 21;

  const auto dir_a = fresh_dir("repeat_a");
  const auto dir_b = fresh_dir("repeat_b");
  spec.out_dir = dir_a.string();
  REQUIRE(run_experiment(spec) == 0);
  spec.out_dir = dir_b.string();
  REQUIRE(run_experiment(spec) == 0);

  for (const char* name :
       {"moments.csv", "hist_linear.csv", "hist_log.csv", "gstar.csv", "summary.json"}) {
    CHECK(slurp(dir_a / name) == slurp(dir_b / name));
  }
}

TEST_CASE("fp experiment writes grid and residual history") {
  const auto dir = fresh_dir("fp");
  ExperimentSpec spec;
  spec.mode = Mode::Fp;
  spec.sim.params = kinex::TradeParams(0.01, 0.02);  // lambda 2
  spec.fp.n_cells = 300;
  spec.fp.tol = 1e-7;
  spec.out_dir = dir.string();
  CHECK(run_experiment(spec) == 0);
  CHECK(std::filesystem::exists(dir / "fp_grid.csv"));
  CHECK(std::filesystem::exists(dir / "fp_residual.csv"));
  const std::string grid = slurp(dir / "fp_grid.csv");
  CHECK(grid.find("w_center,g") != std::string::npos);
  const std::string residual = slurp(dir / "fp_residual.csv");
  CHECK(residual.find("iter,tau,residual") != std::string::npos);
  const auto summary = json::parse(slurp(dir / "summary.json"));
  CHECK(summary["results"]["converged"].get<bool>());
  CHECK(summary["results"]["l1_vs_analytic"].get<double>() < 0.05);
}

TEST_CASE("json format mirrors the tables") {
  const auto dir = fresh_dir("json_fmt");
  ExperimentSpec spec;
  spec.mode = Mode::Mc;
  spec.sim.params = kinex::TradeParams(0.1, 0.02);
  spec.sim.n_agents = 100;
  spec.sim.sweeps = 30;
  spec.sim.burn_in = 20;
  spec.sim.averaging_window = 10;
  spec.formats = {"json"};
  spec.out_dir = dir.string();
  CHECK(run_experiment(spec) == 0);
  CHECK(std::filesystem::exists(dir / "moments.json"));
  CHECK_FALSE(std::filesystem::exists(dir / "moments.csv"));
  const auto doc = json::parse(slurp(dir / "moments.json"));
  CHECK(doc["columns"].size() == 5);
  CHECK(doc["rows"].size() == 31);
}

TEST_CASE("verify-ode separates the two spread laws on a small ensemble") {
  const auto dir = fresh_dir("verify_ode");
  ExperimentSpec spec;
  spec.mode = Mode::VerifyOde;
  spec.sim.params = kinex::TradeParams(0.1, 0.05);
  spec.sim.n_agents = 4000;
  spec.sim.sweeps = 20;
  spec.sim.burn_in = 0;
  spec.sim.averaging_window = 0;
  spec.sim.seed = 5;
  spec.runs = 12;
  spec.out_dir = dir.string();
  CHECK(run_experiment(spec) == 0);
  const auto summary = json::parse(slurp(dir / "summary.json"));
  CHECK(summary["results"]["within_3se_of_mean_field"].get<bool>());
  CHECK(summary["results"]["outside_3se_of_twice_decay"].get<bool>());
  CHECK(std::filesystem::exists(dir / "spread_check.csv"));
}

TEST_CASE("verify-bounds passes on a small normal-noise ensemble") {
  const auto dir = fresh_dir("verify_bounds");
  ExperimentSpec spec;
  spec.mode = Mode::VerifyBounds;
  spec.sim.params = kinex::TradeParams(0.1, 0.2);
  spec.sim.noise_kind = kinex::NoiseKind::Normal;
  spec.sim.n_agents = 1000;
  spec.sim.sweeps = 200;
  spec.sim.burn_in = 0;
  spec.sim.averaging_window = 0;
  spec.runs = 5;
  spec.bounds.record_stride = 20;
  spec.out_dir = dir.string();
  CHECK(run_experiment(spec) == 0);
  const auto summary = json::parse(slurp(dir / "summary.json"));
  CHECK(summary["results"]["pass"].get<bool>());
  CHECK(std::filesystem::exists(dir / "growth_check.csv"));
}

TEST_CASE("population dumps become files") {
  const auto dir = fresh_dir("dumps");
  ExperimentSpec spec;
  spec.mode = Mode::Mc;
  spec.sim.params = kinex::TradeParams(0.1, 0.02);
  spec.sim.n_agents = 50;
  spec.sim.sweeps = 20;
  spec.sim.burn_in = 10;
  spec.sim.averaging_window = 10;
  spec.sim.dump_sweeps = {0, 20};
  spec.out_dir = dir.string();
  CHECK(run_experiment(spec) == 0);
  CHECK(std::filesystem::exists(dir / "population_000000.txt"));
  CHECK(std::filesystem::exists(dir / "population_000020.txt"));
}
