// Copyright 2026 The kinex Authors
// SPDX-License-Identifier: Apache-2.0

#include "kinex/simulation.hpp"

#include <cmath>

#include <stdexcept>

#include "doctest.h"
#include "kinex/analytics.hpp"

using namespace kinex;
using namespace kinex::mc;

namespace {

SimConfig small_config() {
  SimConfig cfg;
  cfg.n_agents = 100;
  cfg.params = TradeParams(0.1, 0.02);
  cfg.noise_kind = NoiseKind::BoundedUniform;
  cfg.sweeps = 50;
  cfg.burn_in = 30;
  cfg.averaging_window = 20;
  cfg.seed = 101;
  return cfg;
}

}  // namespace

TEST_CASE("init honours the initial condition") {
  SUBCASE("all equal") {
    SimConfig cfg = small_config();
    cfg.n_agents = 4;
    cfg.initial = InitialCondition::all_equal(1.0);
    const auto state = init(cfg);
    REQUIRE(state.population.size() == 4);
    for (double w : state.population.wealths) CHECK(w == 1.0);
    CHECK(mean_wealth(state.population) == doctest::Approx(1.0));
    CHECK(state.t == 0.0);
    CHECK(state.tau == 0.0);
    CHECK(state.trades_attempted == 0);
  }
  SUBCASE("custom accepted with zero entries") {
    SimConfig cfg = small_config();
    cfg.n_agents = 3;
    cfg.initial = InitialCondition::custom({2.0, 0.0, 1.0});
    const auto state = init(cfg);
    CHECK(mean_wealth(state.population) == doctest::Approx(1.0));
  }
  SUBCASE("debts rejected") {
    SimConfig cfg = small_config();
    cfg.n_agents = 2;
    cfg.initial = InitialCondition::custom({-1.0, 1.0});
    CHECK_THROWS_AS(init(cfg), std::invalid_argument);
  }
  SUBCASE("non-positive all-equal rejected") {
    SimConfig cfg = small_config();
    cfg.initial = InitialCondition::all_equal(0.0);
    CHECK_THROWS_AS(init(cfg), std::invalid_argument);
  }
  SUBCASE("window accounting validated") {
    SimConfig cfg = small_config();
    cfg.burn_in = 40;
    cfg.averaging_window = 20;  // exceeds 50 sweeps
    CHECK_THROWS_AS(init(cfg), std::invalid_argument);
  }
}

TEST_CASE("single deterministic trade between two agents") {
  SimConfig cfg;
  cfg.n_agents = 2;
  cfg.params = TradeParams(0.1, 0.0);
  cfg.noise_kind = NoiseKind::Normal;
  cfg.initial = InitialCondition::custom({2.0, 0.0});
  cfg.sweeps = 1;
  cfg.burn_in = 0;
  cfg.averaging_window = 0;
  auto state = init(cfg);
  sweep(state);
  // the only unordered pair is (0,1); zero noise makes the trade deterministic
  const double hi = std::max(state.population.wealths[0], state.population.wealths[1]);
  const double lo = std::min(state.population.wealths[0], state.population.wealths[1]);
  CHECK(hi == doctest::Approx(1.8).epsilon(1e-14));
  CHECK(lo == doctest::Approx(0.2).epsilon(1e-14));
  CHECK(total_wealth(state.population) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(state.t == 1.0);
  CHECK(state.tau == doctest::Approx(0.1));
  CHECK(state.trades_attempted == 1);
}

TEST_CASE("equal wealths with zero noise are a fixed point") {
  SimConfig cfg = small_config();
  cfg.params = TradeParams(0.3, 0.0);
  cfg.noise_kind = NoiseKind::Normal;
  auto state = init(cfg);
  for (int s = 0; s < 100; ++s) sweep(state);
  for (double w : state.population.wealths) CHECK(w == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(analytics::empirical_spread(state.population) < 1e-24);
}

TEST_CASE("bounded noise never rejects a trade") {
  SimConfig cfg = small_config();
  cfg.sweeps = 200;
  cfg.burn_in = 0;
  cfg.averaging_window = 200;
  auto state = init(cfg);
  for (int s = 0; s < 200; ++s) sweep(state);
  CHECK(state.trades_rejected == 0);
  CHECK(state.trades_attempted == 200 * (cfg.n_agents / 2));
}

TEST_CASE("run returns aligned, strictly increasing series") {
  const SimConfig cfg = small_config();
  const auto result = run(cfg);
  REQUIRE(result.series.size() == static_cast<std::size_t>(cfg.sweeps) + 1);
  for (std::size_t i = 1; i < result.series.size(); ++i) {
    CHECK(result.series.t[i] == result.series.t[i - 1] + 1.0);
    CHECK(result.series.tau[i] == doctest::Approx(cfg.params.gamma * result.series.t[i]));
  }
  CHECK(result.series.mean_wealth.front() == doctest::Approx(1.0));
  // bounded noise: histogram accumulated over window * N samples
  CHECK(result.f_tilde.n_samples == static_cast<std::uint64_t>(cfg.averaging_window) *
                                        cfg.n_agents);
}

TEST_CASE("reproducibility: identical config and seed give identical output") {
  const SimConfig cfg = small_config();
  const auto a = run(cfg);
  const auto b = run(cfg);
  CHECK(a.series.mean_wealth == b.series.mean_wealth);
  CHECK(a.series.spread == b.series.spread);
  CHECK(a.f_tilde.masses == b.f_tilde.masses);
  CHECK(a.final_population.wealths == b.final_population.wealths);
  // a different stream diverges
  const auto c = run(cfg, 1);
  CHECK(c.series.mean_wealth != a.series.mean_wealth);
}

TEST_CASE("zero-noise dynamics concentrate to the mean") {
  SimConfig cfg;
  cfg.n_agents = 200;
  cfg.params = TradeParams(0.1, 0.0);
  cfg.noise_kind = NoiseKind::Normal;
  cfg.initial = InitialCondition::custom([] {
    std::vector<double> w(200, 0.0);
    for (std::size_t i = 0; i < 100; ++i) w[i] = 2.0;
    return w;
  }());
  cfg.sweeps = 400;
  cfg.burn_in = 0;
  cfg.averaging_window = 0;
  const auto result = run(cfg);
  CHECK(result.series.spread.front() == doctest::Approx(2.0));
  CHECK(result.series.spread.back() < 1e-6 * result.series.spread.front());
  CHECK(result.series.mean_wealth.back() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("window zero means final-sweep histogram") {
  SimConfig cfg = small_config();
  cfg.burn_in = 0;
  cfg.averaging_window = 0;
  const auto result = run(cfg);
  CHECK(result.f_tilde.n_samples == cfg.n_agents);
}

TEST_CASE("population dumps at configured sweeps") {
  SimConfig cfg = small_config();
  cfg.dump_sweeps = {0, 25};
  const auto result = run(cfg);
  REQUIRE(result.series.dumps.size() == 2);
  CHECK(result.series.dumps[0].first == 0);
  CHECK(result.series.dumps[1].first == 25);
  CHECK(result.series.dumps[0].second.size() == cfg.n_agents);
}

TEST_CASE("ensembles") {
  SUBCASE("single run matches run()") {
    const SimConfig cfg = small_config();
    const auto single = run(cfg, 0);
    const auto ens = run_ensemble(cfg, 1);
    CHECK(ens.mean_wealth == single.series.mean_wealth);
    CHECK(ens.spread == single.series.spread);
    for (double se : ens.mean_wealth_stderr) CHECK(se == 0.0);
  }
  SUBCASE("zero noise has zero cross-run spread of the mean") {
    SimConfig cfg = small_config();
    cfg.params = TradeParams(0.1, 0.0);
    cfg.noise_kind = NoiseKind::Normal;
    const auto ens = run_ensemble(cfg, 8);
    for (std::size_t i = 0; i < ens.t.size(); ++i) {
      CHECK(ens.mean_wealth[i] == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(ens.mean_wealth_stderr[i] < 1e-13);
    }
  }
  SUBCASE("bounded noise keeps the ensemble mean a martingale") {
    SimConfig cfg = small_config();
    cfg.n_agents = 500;
    cfg.sweeps = 100;
    cfg.burn_in = 0;
    cfg.averaging_window = 100;
    const auto ens = run_ensemble(cfg, 12);
    const std::size_t last = ens.t.size() - 1;
    CHECK(std::abs(ens.mean_wealth[last] - 1.0) <=
          5.0 * std::max(ens.mean_wealth_stderr[last], 1e-6));
  }
  SUBCASE("ensemble aggregation is reproducible") {
    const SimConfig cfg = small_config();
    const auto a = run_ensemble(cfg, 4);
    const auto b = run_ensemble(cfg, 4);
    CHECK(a.mean_wealth == b.mean_wealth);
    CHECK(a.spread_stderr == b.spread_stderr);
  }
  SUBCASE("standard error shrinks roughly like one over root n_runs") {
    SimConfig cfg = small_config();
    cfg.n_agents = 400;
    cfg.sweeps = 60;
    cfg.burn_in = 0;
    cfg.averaging_window = 60;
    const auto small_ens = run_ensemble(cfg, 4);
    const auto large_ens = run_ensemble(cfg, 16);
    const std::size_t last = small_ens.t.size() - 1;
    const double ratio =
        large_ens.mean_wealth_stderr[last] / small_ens.mean_wealth_stderr[last];
    // true scaling is 0.5; allow for the chi-distributed noise of a 4-run std
    CHECK(ratio > 0.15);
    CHECK(ratio < 0.95);
  }
}

TEST_CASE("rejection rate falls as sigma shrinks at fixed gamma") {
  double previous = 1.0;
  for (double sigma2 : {0.2, 0.05, 0.0125}) {
    SimConfig cfg;
    cfg.n_agents = 2000;
    cfg.params = TradeParams(0.1, sigma2);
    cfg.noise_kind = NoiseKind::Normal;
    cfg.sweeps = 50;
    cfg.burn_in = 0;
    cfg.averaging_window = 50;
    cfg.seed = 7;
    auto state = init(cfg);
    for (int s = 0; s < cfg.sweeps; ++s) sweep(state);
    const double frac = static_cast<double>(state.trades_rejected) /
                        static_cast<double>(state.trades_attempted);
    CHECK(frac < previous);
    previous = frac;
  }
  CHECK(previous < 1e-3);
}

TEST_CASE("unbounded noise growth stays within the analytic rate bound") {
  SimConfig cfg;
  cfg.n_agents = 2000;
  cfg.params = TradeParams(0.1, 0.2, 1.0);
  cfg.noise_kind = NoiseKind::Normal;
  cfg.sweeps = 200;
  cfg.burn_in = 0;
  cfg.averaging_window = 0;
  const auto ens = run_ensemble(cfg, 5);
  const double rate =
      analytics::growth_bound_rate(cfg.params.gamma, cfg.params.sigma(), cfg.params.alpha);
  for (std::size_t i = 0; i < ens.t.size(); ++i) {
    const double log_growth = std::log(ens.mean_wealth[i] / ens.mean_wealth.front());
    CHECK(log_growth <= rate * ens.t[i] + 1e-9);
  }
  // and the mean does grow: rejected trades are the ones that would lose money
  CHECK(ens.mean_wealth.back() > 1.0);
}
