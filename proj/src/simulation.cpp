// Copyright 2026 The kinex Authors
// SPDX-License-Identifier: Apache-2.0

#include "kinex/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cassert>
#include <cmath>
#include <future>
#include <stdexcept>
#include <thread>

#include "kinex/analytics.hpp"

namespace kinex::mc {

InitialCondition InitialCondition::all_equal(double value) {
  InitialCondition ic;
  ic.kind = Kind::AllEqual;
  ic.value = value;
  return ic;
}

InitialCondition InitialCondition::custom(std::vector<double> wealths) {
  InitialCondition ic;
  ic.kind = Kind::Custom;
  ic.wealths = std::move(wealths);
  return ic;
}

NoiseModel SimConfig::make_noise() const {
  return NoiseModel::make(noise_kind, params.sigma(), params.gamma);
}

SimState init(const SimConfig& config, std::uint64_t stream) {
  if (config.n_agents < 2) throw std::invalid_argument("init: need at least two agents");
  if (config.sweeps < 0 || config.burn_in < 0 || config.averaging_window < 0)
    throw std::invalid_argument("init: sweep counts must be non-negative");
  if (config.burn_in + config.averaging_window > config.sweeps)
    throw std::invalid_argument("init: burn_in + averaging_window must not exceed sweeps");

  Population pop;
  if (config.initial.kind == InitialCondition::Kind::AllEqual) {
    if (!(config.initial.value > 0.0))
      throw std::invalid_argument("init: all-equal wealth must be positive");
    pop.wealths.assign(config.n_agents, config.initial.value);
  } else {
    if (config.initial.wealths.size() != config.n_agents)
      throw std::invalid_argument("init: custom wealth vector must have n_agents entries");
    pop.wealths = config.initial.wealths;
  }
  validate_population(pop);

  return SimState{std::move(pop), config.params, config.make_noise(),
                  RngStream(config.seed, stream)};
}

void sweep(SimState& state) {
  auto& w = state.population.wealths;
  const std::size_t n = w.size();
  const std::size_t attempts = n / 2;
  const double gamma = state.params.gamma;
  for (std::size_t k = 0; k < attempts; ++k) {
    const std::size_t i = state.rng.uniform_below(n);
    std::size_t j = state.rng.uniform_below(n - 1);
    if (j >= i) ++j;
    const double eta = state.noise.sample(state.rng);
    const double eta_star = state.noise.sample(state.rng);
    const WealthPair candidate = apply_trade({w[i], w[j]}, eta, eta_star, gamma);
    ++state.trades_attempted;
    if (is_admissible(candidate)) {
      w[i] = candidate.w;
      w[j] = candidate.w_star;
    } else {
      ++state.trades_rejected;
    }
  }
  state.t += 1.0;
  state.tau = gamma * state.t;  // recomputed, so tau = gamma*t holds exactly
#ifndef NDEBUG
  for (double x : w) assert(x >= 0.0);
#endif
}

namespace {

void record(SnapshotSeries& series, const SimState& state) {
  series.t.push_back(state.t);
  series.tau.push_back(state.tau);
  series.mean_wealth.push_back(mean_wealth(state.population));
  series.spread.push_back(analytics::empirical_spread(state.population));
  series.rejected_frac.push_back(
      state.trades_attempted == 0
          ? 0.0
          : static_cast<double>(state.trades_rejected) /
                static_cast<double>(state.trades_attempted));
}

void accumulate_normalized(est::HistogramAccumulator& acc, const Population& pop) {
  const double m = mean_wealth(pop);
  if (!(m > 0.0)) throw std::runtime_error("run: population mean collapsed to zero");
  acc.add_scaled(pop.wealths, 1.0 / m);
}

}  // namespace

RunResult run(const SimConfig& config, std::uint64_t stream) {
  SimState state = init(config, stream);
  RunResult result;
  est::HistogramAccumulator acc(config.histogram_edges);
  std::optional<est::HistogramAccumulator> log_acc;
  if (!config.log_histogram_edges.empty())
    log_acc.emplace(config.log_histogram_edges);

  auto maybe_dump = [&](long sweep_index) {
    if (std::find(config.dump_sweeps.begin(), config.dump_sweeps.end(), sweep_index) !=
        config.dump_sweeps.end())
      result.series.dumps.emplace_back(sweep_index, state.population.wealths);
  };
  auto accumulate = [&]() {
    accumulate_normalized(acc, state.population);
    if (log_acc) accumulate_normalized(*log_acc, state.population);
  };

  record(result.series, state);
  maybe_dump(0);
  for (long s = 1; s <= config.sweeps; ++s) {
    sweep(state);
    record(result.series, state);
    maybe_dump(s);
    const bool in_window =
        s > config.burn_in && s <= config.burn_in + config.averaging_window;
    if (in_window) accumulate();
  }
  if (config.averaging_window == 0) accumulate();
  result.f_tilde = acc.normalized();
  if (log_acc) result.f_tilde_log = log_acc->normalized();
  result.final_population = std::move(state.population);
  return result;
}

EnsembleSeries aggregate_series(const std::vector<SnapshotSeries>& series) {
  if (series.empty()) throw std::invalid_argument("aggregate_series: no runs");
  const int n_runs = static_cast<int>(series.size());
  EnsembleSeries out;
  out.n_runs = n_runs;
  out.t = series.front().t;
  out.tau = series.front().tau;
  const std::size_t len = out.t.size();
  out.mean_wealth.assign(len, 0.0);
  out.mean_wealth_stderr.assign(len, 0.0);
  out.spread.assign(len, 0.0);
  out.spread_stderr.assign(len, 0.0);
  const double n = static_cast<double>(n_runs);
  for (std::size_t i = 0; i < len; ++i) {
    double m_sum = 0.0, a_sum = 0.0;
    for (const auto& s : series) {
      m_sum += s.mean_wealth[i];
      a_sum += s.spread[i];
    }
    const double m_mean = m_sum / n;
    const double a_mean = a_sum / n;
    out.mean_wealth[i] = m_mean;
    out.spread[i] = a_mean;
    if (n_runs > 1) {
      double m_var = 0.0, a_var = 0.0;
      for (const auto& s : series) {
        m_var += (s.mean_wealth[i] - m_mean) * (s.mean_wealth[i] - m_mean);
        a_var += (s.spread[i] - a_mean) * (s.spread[i] - a_mean);
      }
      out.mean_wealth_stderr[i] = std::sqrt(m_var / (n * (n - 1.0)));
      out.spread_stderr[i] = std::sqrt(a_var / (n * (n - 1.0)));
    }
  }
  return out;
}

EnsembleSeries run_ensemble(const SimConfig& config, int n_runs) {
  if (n_runs < 1) throw std::invalid_argument("run_ensemble: need at least one run");

  std::vector<SnapshotSeries> series(static_cast<std::size_t>(n_runs));
  const unsigned workers = std::max(1u, std::thread::hardware_concurrency());
  std::vector<std::future<void>> futures;
  std::atomic<int> next{0};
  const unsigned n_workers = std::min(workers, static_cast<unsigned>(n_runs));
  for (unsigned worker = 0; worker < n_workers; ++worker) {
    futures.push_back(std::async(std::launch::async, [&]() {
      for (int r = next.fetch_add(1); r < n_runs; r = next.fetch_add(1))
        series[static_cast<std::size_t>(r)] =
            run(config, static_cast<std::uint64_t>(r)).series;
    }));
  }
  for (auto& f : futures) f.get();

  // fixed-order reduction keeps the aggregate bit-reproducible
  return aggregate_series(series);
}

}  // namespace kinex::mc
