// Copyright 2026 The kinex Authors
// SPDX-License-Identifier: Apache-2.0

#include "kinex/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <set>

#include "kinex/analytics.hpp"
#include "kinex/version.hpp"

namespace kinex::cli {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// strict JSON access

std::string type_name(const json& j) {
  if (j.is_number()) return "number";
  if (j.is_string()) return "string";
  if (j.is_boolean()) return "boolean";
  if (j.is_array()) return "array";
  if (j.is_object()) return "object";
  if (j.is_null()) return "null";
  return "value";
}

/// Tracks which keys of an object were consumed; anything left over is a
/// config error (typo safety).
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object())
      throw ConfigError("config section '" + path_ + "' must be a JSON object");
  }

  bool has(const char* key) const { return j_.contains(key); }

  const json* take(const char* key) {
    consumed_.insert(key);
    if (!j_.contains(key)) return nullptr;
    return &j_.at(key);
  }

  void read_number(const char* key, double& out) { read_checked<double>(key, out, "a number"); }
  void read_int(const char* key, long& out) { read_checked<long>(key, out, "an integer"); }
  void read_int(const char* key, int& out) { read_checked<int>(key, out, "an integer"); }
  void read_size(const char* key, std::size_t& out) {
    read_checked<std::size_t>(key, out, "a non-negative integer");
  }
  void read_u64(const char* key, std::uint64_t& out) {
    read_checked<std::uint64_t>(key, out, "a non-negative integer");
  }
  void read_string(const char* key, std::string& out) {
    const json* v = take(key);
    if (!v) return;
    if (!v->is_string())
      throw ConfigError("config key '" + join(key) + "': expected a string, got " +
                        type_name(*v));
    out = v->get<std::string>();
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (consumed_.find(it.key()) == consumed_.end())
        throw ConfigError("unknown config key '" + join(it.key().c_str()) + "'");
    }
  }

  std::string join(const char* key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  const json& raw() const { return j_; }
  const std::string& path() const { return path_; }

 private:
  template <typename T>
  void read_checked(const char* key, T& out, const char* expected) {
    const json* v = take(key);
    if (!v) return;
    if constexpr (std::is_floating_point_v<T>) {
      if (!v->is_number())
        throw ConfigError("config key '" + join(key) + "': expected " + expected +
                          ", got " + type_name(*v));
    } else {
      if (!v->is_number_integer() && !v->is_number_unsigned())
        throw ConfigError("config key '" + join(key) + "': expected " + expected +
                          ", got " + type_name(*v));
      if constexpr (std::is_unsigned_v<T>) {
        if (v->is_number_integer() && v->get<long long>() < 0)
          throw ConfigError("config key '" + join(key) + "': expected " + expected +
                            ", got a negative value");
      }
    }
    out = v->get<T>();
  }

  const json& j_;
  std::string path_;
  std::set<std::string> consumed_;
};

std::vector<double> read_number_array(const json& j, const std::string& where) {
  if (!j.is_array()) throw ConfigError("config key '" + where + "': expected an array");
  std::vector<double> out;
  for (const auto& v : j) {
    if (!v.is_number())
      throw ConfigError("config key '" + where + "': expected numbers, got " + type_name(v));
    out.push_back(v.get<double>());
  }
  return out;
}

// ---------------------------------------------------------------------------
// deterministic table output (CSV, optionally mirrored as JSON)

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// The embedded spec omits the output directory: it is implied by the file
// location, and dropping it keeps reruns into different directories
// byte-identical.
ordered_json spec_metadata(const ExperimentSpec& spec) {
  ordered_json j = spec_to_json(spec);
  j.erase("out");
  return j;
}

class Table {
 public:
  Table(std::string stem, std::vector<std::string> columns)
      : stem_(std::move(stem)), columns_(std::move(columns)) {}

  void row(std::initializer_list<double> values) {
    rows_.emplace_back(values);
  }

  void write(const ExperimentSpec& spec) const {
    const auto dir = std::filesystem::path(spec.out_dir);
    const bool csv = std::find(spec.formats.begin(), spec.formats.end(), "csv") !=
                     spec.formats.end();
    const bool as_json = std::find(spec.formats.begin(), spec.formats.end(), "json") !=
                         spec.formats.end();
    if (csv || !as_json) write_csv(dir, spec);
    if (as_json) write_json(dir, spec);
  }

 private:
  void write_csv(const std::filesystem::path& dir, const ExperimentSpec& spec) const {
    std::ofstream out(dir / (stem_ + ".csv"), std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + (dir / (stem_ + ".csv")).string());
    out << "# " << project_name << " " << project_version << "\n";
    out << "# spec=" << spec_metadata(spec).dump() << "\n";
    for (std::size_t c = 0; c < columns_.size(); ++c)
      out << columns_[c] << (c + 1 < columns_.size() ? "," : "\n");
    for (const auto& r : rows_) {
      for (std::size_t c = 0; c < r.size(); ++c)
        out << format_double(r[c]) << (c + 1 < r.size() ? "," : "\n");
    }
  }

  void write_json(const std::filesystem::path& dir, const ExperimentSpec& spec) const {
    ordered_json doc;
    doc["generator"] = std::string(project_name) + " " + project_version;
    doc["spec"] = spec_metadata(spec);
    doc["columns"] = columns_;
    doc["rows"] = rows_;
    std::ofstream out(dir / (stem_ + ".json"), std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + (dir / (stem_ + ".json")).string());
    out << doc.dump(2) << "\n";
  }

  std::string stem_;
  std::vector<std::string> columns_;
  std::vector<std::vector<double>> rows_;
};

void write_summary(const ExperimentSpec& spec, ordered_json results) {
  ordered_json doc;
  doc["generator"] = std::string(project_name) + " " + project_version;
  doc["spec"] = spec_metadata(spec);
  const double lambda = spec.sim.params.lambda();
  doc["derived"]["lambda"] = lambda;
  if (lambda > 0.0) doc["derived"]["mu"] = fp::pareto_exponent(lambda);
  doc["results"] = std::move(results);
  const auto path = std::filesystem::path(spec.out_dir) / "summary.json";
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << doc.dump(2) << "\n";
}

void write_population(const ExperimentSpec& spec, long sweep_index,
                      const std::vector<double>& wealths) {
  char name[64];
  std::snprintf(name, sizeof(name), "population_%06ld.txt", sweep_index);
  const auto path = std::filesystem::path(spec.out_dir) / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "# " << project_name << " " << project_version << " sweep=" << sweep_index << "\n";
  out << "# spec=" << spec_metadata(spec).dump() << "\n";
  for (double w : wealths) out << format_double(w) << "\n";
}

// ---------------------------------------------------------------------------
// shared pieces

est::Histogram merge_histograms(const std::vector<est::Histogram>& hists) {
  est::Histogram merged = hists.front();
  for (std::size_t r = 1; r < hists.size(); ++r) {
    const auto& h = hists[r];
    if (h.edges != merged.edges)
      throw std::runtime_error("merge_histograms: incompatible edges");
    for (std::size_t i = 0; i < merged.masses.size(); ++i) merged.masses[i] += h.masses[i];
    merged.overflow_mass += h.overflow_mass;
    merged.n_samples += h.n_samples;
  }
  const double inv = 1.0 / static_cast<double>(hists.size());
  for (auto& m : merged.masses) m *= inv;
  merged.overflow_mass *= inv;
  return merged;
}

void write_histogram_tables(const ExperimentSpec& spec, const est::Histogram& linear,
                            const est::Histogram& logh, const fp::ParetoStationary* ps) {
  auto emit = [&](const est::Histogram& h, const std::string& stem) {
    Table table(stem, {"w_lo", "w_hi", "mass", "analytic_mass"});
    for (std::size_t i = 0; i < h.masses.size(); ++i) {
      const double analytic = ps ? ps->cdf(h.edges[i + 1]) - ps->cdf(h.edges[i]) : 0.0;
      table.row({h.edges[i], h.edges[i + 1], h.masses[i], analytic});
    }
    table.write(spec);
  };
  emit(linear, "hist_linear");
  emit(logh, "hist_log");
}

void write_moment_series(const ExperimentSpec& spec, const mc::SnapshotSeries& series) {
  Table table("moments", {"t", "tau", "m", "A", "rejected_frac"});
  for (std::size_t i = 0; i < series.size(); ++i)
    table.row({series.t[i], series.tau[i], series.mean_wealth[i], series.spread[i],
               series.rejected_frac[i]});
  table.write(spec);
}

void write_ensemble_series(const ExperimentSpec& spec, const mc::EnsembleSeries& ens) {
  Table table("ensemble", {"t", "tau", "m_mean", "m_stderr", "A_mean", "A_stderr"});
  for (std::size_t i = 0; i < ens.t.size(); ++i)
    table.row({ens.t[i], ens.tau[i], ens.mean_wealth[i], ens.mean_wealth_stderr[i],
               ens.spread[i], ens.spread_stderr[i]});
  table.write(spec);
}

struct McOutputs {
  std::vector<mc::RunResult> runs;
  est::Histogram linear;
  est::Histogram logh;
};

McOutputs run_mc_ensemble(const ExperimentSpec& spec) {
  McOutputs out;
  mc::SimConfig cfg = spec.sim;
  cfg.histogram_edges = est::uniform_edges(spec.hist.w_max, spec.hist.n_bins);
  cfg.log_histogram_edges =
      est::log_edges(spec.hist.log_lo, spec.hist.log_hi, spec.hist.log_per_decade);

  std::vector<est::Histogram> linear_hists, log_hists;
  for (int r = 0; r < spec.runs; ++r) {
    auto result = mc::run(cfg, static_cast<std::uint64_t>(r));
    linear_hists.push_back(result.f_tilde);
    log_hists.push_back(*result.f_tilde_log);
    out.runs.push_back(std::move(result));
  }
  out.linear = merge_histograms(linear_hists);
  out.logh = merge_histograms(log_hists);
  return out;
}

ordered_json tail_fit_json(const est::TailFit& fit) {
  ordered_json j;
  j["estimate"] = fit.estimate;
  j["k"] = fit.k_used;
  j["stderr"] = fit.std_error;
  return j;
}

int run_mc_or_compare(const ExperimentSpec& spec) {
  const double lambda = spec.sim.params.lambda();
  if (spec.mode == Mode::Compare && !(lambda > 0.0))
    throw ConfigError("compare mode requires sigma2 > 0: the sigma2 = 0 limit is a point mass");
  std::unique_ptr<fp::ParetoStationary> ps;
  if (lambda > 0.0)
    ps = std::make_unique<fp::ParetoStationary>(fp::pareto_exponent(lambda), 1.0);

  McOutputs outputs = run_mc_ensemble(spec);
  const auto& lead = outputs.runs.front();

  write_moment_series(spec, lead.series);
  write_histogram_tables(spec, outputs.linear, outputs.logh, ps.get());
  for (const auto& [sweep_index, wealths] : lead.series.dumps)
    write_population(spec, sweep_index, wealths);

  ordered_json results;
  results["final_mean_wealth"] = lead.series.mean_wealth.back();
  results["mean_growth_log"] =
      std::log(lead.series.mean_wealth.back() / lead.series.mean_wealth.front());
  results["final_spread"] = lead.series.spread.back();
  results["rejected_frac"] = lead.series.rejected_frac.back();

  if (spec.mode == Mode::Compare && ps) {
    // analytic curve on the linear bin centers
    Table gstar("gstar", {"w", "g"});
    for (std::size_t i = 0; i < outputs.linear.masses.size(); ++i) {
      const double w = 0.5 * (outputs.linear.edges[i] + outputs.linear.edges[i + 1]);
      gstar.row({w, ps->pdf(w)});
    }
    gstar.write(spec);

    std::vector<double> per_run_l1;
    for (const auto& r : outputs.runs)
      per_run_l1.push_back(est::l1_distance(r.f_tilde, *ps));
    results["l1_distance"] = est::l1_distance(outputs.linear, *ps);
    results["l1_distance_per_run"] = per_run_l1;
    results["ccdf_slope"] = ordered_json::object();
    try {
      const auto slope =
          est::loglog_ccdf_slope(outputs.linear, spec.hist.slope_lo, spec.hist.slope_hi);
      results["ccdf_slope"]["slope"] = slope.slope;
      results["ccdf_slope"]["r_squared"] = slope.r_squared;
      results["ccdf_slope"]["n_points"] = slope.n_points;
    } catch (const std::invalid_argument& err) {
      results["ccdf_slope"]["error"] = err.what();
    }

    // Hill fit of the pooled final normalized populations
    std::vector<double> pooled;
    for (const auto& r : outputs.runs) {
      const Population normalized = est::normalize(r.final_population);
      pooled.insert(pooled.end(), normalized.wealths.begin(), normalized.wealths.end());
    }
    try {
      results["tail_fit"] = tail_fit_json(est::hill_estimator(std::move(pooled)));
    } catch (const std::exception& err) {
      results["tail_fit"] = ordered_json{{"error", err.what()}};
    }
  }

  if (spec.runs > 1) {
    std::vector<mc::SnapshotSeries> series;
    for (const auto& r : outputs.runs) series.push_back(r.series);
    write_ensemble_series(spec, mc::aggregate_series(series));
  }

  write_summary(spec, std::move(results));
  return 0;
}

int run_fp(const ExperimentSpec& spec) {
  const double lambda = spec.sim.params.lambda();
  if (!(lambda > 0.0)) throw ConfigError("fp mode requires sigma2 > 0 (lambda > 0)");
  const fp::ParetoStationary ps(fp::pareto_exponent(lambda), 1.0);

  fp::FpGrid grid =
      spec.fp.initial == "stationary"
          ? fp::FpGrid::from_stationary(ps, lambda, spec.fp.w_max,
                                        static_cast<std::size_t>(spec.fp.n_cells))
          : fp::FpGrid::uniform(lambda, 1.0, spec.fp.w_max,
                                static_cast<std::size_t>(spec.fp.n_cells), spec.fp.init_lo,
                                spec.fp.init_hi);

  fp::SteadyOptions options;
  options.dt = spec.fp.dt;
  options.tol = spec.fp.tol;
  options.max_iters = spec.fp.max_iters;
  options.history_stride = 10;
  auto solved = fp::fp_solve_to_steady(std::move(grid), options);

  Table grid_table("fp_grid", {"w_center", "g"});
  for (std::size_t i = 0; i < solved.grid.n_cells(); ++i)
    grid_table.row({solved.grid.cell_center(i), solved.grid.density[i]});
  grid_table.write(spec);

  Table residual_table("fp_residual", {"iter", "tau", "residual"});
  for (const auto& s : solved.history)
    residual_table.row({static_cast<double>(s.iter), s.tau, s.residual});
  residual_table.write(spec);

  ordered_json results;
  results["converged"] = solved.converged;
  results["iterations"] = solved.iterations;
  results["max_mass_drift"] = solved.max_mass_drift;
  results["l1_vs_analytic"] = fp::l1_vs_stationary(solved.grid, ps, false);
  results["l1_vs_analytic_renormalized"] = fp::l1_vs_stationary(solved.grid, ps, true);
  results["truncated_tail_mass"] = ps.ccdf(spec.fp.w_max);
  results["grid_mean"] = solved.grid.grid_mean();
  write_summary(spec, std::move(results));
  return 0;
}

mc::SimConfig ode_sim_config(const ExperimentSpec& spec, long sweeps) {
  mc::SimConfig cfg = spec.sim;
  cfg.sweeps = sweeps;
  cfg.burn_in = 0;
  cfg.averaging_window = sweeps;
  if (cfg.n_agents % 2 != 0)
    throw ConfigError("verify-ode requires an even n_agents for the two-level start");
  // two-level start: mean 1, spread spread0 exactly
  const double d = std::sqrt(0.5 * spec.ode.spread0);
  if (!(d < 1.0)) throw ConfigError("verify-ode: spread0 must be below 2 to keep wealths positive");
  std::vector<double> wealths(cfg.n_agents);
  for (std::size_t i = 0; i < wealths.size(); ++i)
    wealths[i] = i % 2 == 0 ? 1.0 - d : 1.0 + d;
  cfg.initial = mc::InitialCondition::custom(std::move(wealths));
  return cfg;
}

int run_verify_ode(const ExperimentSpec& spec) {
  if (spec.ode.check_times.empty()) throw ConfigError("verify-ode: no check times");
  if (spec.runs < 2)
    throw ConfigError("verify-ode needs runs >= 2 to estimate a standard error");
  const double t_max = *std::max_element(spec.ode.check_times.begin(),
                                         spec.ode.check_times.end());
  const long sweeps = static_cast<long>(std::lround(t_max));
  mc::SimConfig cfg = ode_sim_config(spec, sweeps);
  const auto ensemble = mc::run_ensemble(cfg, spec.runs);

  const analytics::SpreadOde ode(cfg.params.gamma, cfg.params.sigma2, 1.0, spec.ode.spread0);
  Table table("spread_check", {"t", "A_mc", "A_stderr", "A_mean_field", "A_twice_decay"});
  bool within_mean_field = true;
  bool outside_twice_decay = false;
  for (double t : spec.ode.check_times) {
    const auto idx = static_cast<std::size_t>(std::lround(t));
    if (idx >= ensemble.t.size()) throw ConfigError("verify-ode: check time beyond sweeps");
    const double a_mc = ensemble.spread[idx];
    const double se = ensemble.spread_stderr[idx];
    const double a_mf = analytics::spread_solution(ode, t, analytics::SpreadLaw::MeanField);
    const double a_td = analytics::spread_solution(ode, t, analytics::SpreadLaw::TwiceDecay);
    table.row({t, a_mc, se, a_mf, a_td});
    if (std::abs(a_mc - a_mf) > 3.0 * se) within_mean_field = false;
    if (t == t_max && std::abs(a_mc - a_td) > 3.0 * se) outside_twice_decay = true;
  }
  table.write(spec);

  ordered_json results;
  results["within_3se_of_mean_field"] = within_mean_field;
  results["outside_3se_of_twice_decay"] = outside_twice_decay;
  const bool pass = within_mean_field && outside_twice_decay;
  results["pass"] = pass;
  write_summary(spec, std::move(results));
  return pass ? 0 : 3;
}

int run_verify_bounds(const ExperimentSpec& spec) {
  const auto& params = spec.sim.params;
  const double m_rate = analytics::growth_bound_rate(params.gamma, params.sigma(), params.alpha);
  const analytics::MomentBound mp(spec.bounds.p, params.gamma, params.sigma(), params.alpha,
                                  spec.bounds.c_p);
  const double mp_rate = analytics::moment_bound_rate(mp);
  const long stride = std::max<long>(1, spec.bounds.record_stride);

  // ensemble means of m(t) and M_p(t) on the recording grid
  std::vector<double> times;
  for (long s = 0; s <= spec.sim.sweeps; s += stride) times.push_back(static_cast<double>(s));
  std::vector<double> m_mean(times.size(), 0.0), mp_mean(times.size(), 0.0);
  for (int r = 0; r < spec.runs; ++r) {
    mc::SimState state = mc::init(spec.sim, static_cast<std::uint64_t>(r));
    std::size_t slot = 0;
    for (long s = 0; s <= spec.sim.sweeps; ++s) {
      if (s % stride == 0) {
        m_mean[slot] += mean_wealth(state.population);
        mp_mean[slot] += wealth_moment(state.population, spec.bounds.p);
        ++slot;
      }
      if (s < spec.sim.sweeps) mc::sweep(state);
    }
  }
  for (auto& v : m_mean) v /= spec.runs;
  for (auto& v : mp_mean) v /= spec.runs;

  bool monotone = true, m_bounded = true, mp_bounded = true;
  Table table("growth_check",
              {"t", "m_mean", "log_m_growth", "m_bound", "mp_mean", "log_mp_growth", "mp_bound"});
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double log_m = std::log(m_mean[i] / m_mean.front());
    const double log_mp = std::log(mp_mean[i] / mp_mean.front());
    table.row({times[i], m_mean[i], log_m, m_rate * times[i], mp_mean[i], log_mp,
               mp_rate * times[i]});
    if (i > 0 && m_mean[i] < m_mean[i - 1]) monotone = false;
    if (log_m > m_rate * times[i]) m_bounded = false;
    if (log_mp > mp_rate * times[i]) mp_bounded = false;
  }
  table.write(spec);

  ordered_json results;
  results["mean_growth_rate_bound"] = m_rate;
  results["moment_growth_rate_bound"] = mp_rate;
  results["mean_nondecreasing"] = monotone;
  results["mean_within_bound"] = m_bounded;
  results["moment_within_bound"] = mp_bounded;
  const bool pass = monotone && m_bounded && mp_bounded;
  results["pass"] = pass;
  write_summary(spec, std::move(results));
  return pass ? 0 : 3;
}

}  // namespace

const char* to_string(Mode mode) {
  switch (mode) {
    case Mode::Mc: return "mc";
    case Mode::Fp: return "fp";
    case Mode::Compare: return "compare";
    case Mode::VerifyOde: return "verify-ode";
    case Mode::VerifyBounds: return "verify-bounds";
  }
  return "unknown";
}

Mode mode_from_string(const std::string& name) {
  if (name == "mc") return Mode::Mc;
  if (name == "fp") return Mode::Fp;
  if (name == "compare") return Mode::Compare;
  if (name == "verify-ode") return Mode::VerifyOde;
  if (name == "verify-bounds") return Mode::VerifyBounds;
  throw ConfigError("unknown mode: " + name);
}

ExperimentSpec parse_config_json(const json& j) {
  ExperimentSpec spec;
  Section top(j, "");

  std::string mode = to_string(spec.mode);
  top.read_string("mode", mode);
  spec.mode = mode_from_string(mode);

  double gamma = spec.sim.params.gamma;
  double sigma2 = spec.sim.params.sigma2;
  double alpha = spec.sim.params.alpha;
  top.read_number("gamma", gamma);
  top.read_number("sigma2", sigma2);
  top.read_number("alpha", alpha);
  try {
    spec.sim.params = TradeParams(gamma, sigma2, alpha);
  } catch (const std::invalid_argument& err) {
    throw ConfigError(std::string("config: ") + err.what());
  }

  std::string noise = to_string(spec.sim.noise_kind);
  top.read_string("noise", noise);
  try {
    spec.sim.noise_kind = noise_kind_from_string(noise);
  } catch (const std::invalid_argument& err) {
    throw ConfigError(std::string("config key 'noise': ") + err.what());
  }

  top.read_size("n_agents", spec.sim.n_agents);
  top.read_int("sweeps", spec.sim.sweeps);
  top.read_int("burn_in", spec.sim.burn_in);
  top.read_int("window", spec.sim.averaging_window);
  top.read_u64("seed", spec.sim.seed);
  top.read_int("runs", spec.runs);
  top.read_string("out", spec.out_dir);

  if (const json* v = top.take("formats")) {
    if (!v->is_array()) throw ConfigError("config key 'formats': expected an array");
    spec.formats.clear();
    for (const auto& f : *v) {
      if (!f.is_string())
        throw ConfigError("config key 'formats': expected strings");
      const std::string name = f.get<std::string>();
      if (name != "csv" && name != "json")
        throw ConfigError("config key 'formats': unknown format '" + name + "'");
      spec.formats.push_back(name);
    }
    if (spec.formats.empty()) throw ConfigError("config key 'formats': must not be empty");
  }

  if (const json* v = top.take("dump_sweeps")) {
    spec.sim.dump_sweeps.clear();
    for (double d : read_number_array(*v, "dump_sweeps"))
      spec.sim.dump_sweeps.push_back(static_cast<long>(d));
  }

  if (const json* v = top.take("initial")) {
    Section sec(*v, "initial");
    std::string kind = "all_equal";
    sec.read_string("kind", kind);
    if (kind == "all_equal") {
      double value = 1.0;
      sec.read_number("value", value);
      spec.sim.initial = mc::InitialCondition::all_equal(value);
    } else if (kind == "custom") {
      const json* w = sec.take("wealths");
      if (!w) throw ConfigError("config key 'initial.wealths': required for custom initial");
      spec.sim.initial =
          mc::InitialCondition::custom(read_number_array(*w, "initial.wealths"));
    } else {
      throw ConfigError("config key 'initial.kind': unknown kind '" + kind + "'");
    }
    sec.finish();
  }

  if (const json* v = top.take("hist")) {
    Section sec(*v, "hist");
    sec.read_int("n_bins", spec.hist.n_bins);
    sec.read_number("w_max", spec.hist.w_max);
    sec.read_int("log_per_decade", spec.hist.log_per_decade);
    sec.read_number("log_lo", spec.hist.log_lo);
    sec.read_number("log_hi", spec.hist.log_hi);
    sec.read_number("slope_lo", spec.hist.slope_lo);
    sec.read_number("slope_hi", spec.hist.slope_hi);
    sec.finish();
  }

  if (const json* v = top.take("fp")) {
    Section sec(*v, "fp");
    sec.read_number("w_max", spec.fp.w_max);
    sec.read_int("n_cells", spec.fp.n_cells);
    sec.read_number("dt", spec.fp.dt);
    sec.read_number("tol", spec.fp.tol);
    sec.read_int("max_iters", spec.fp.max_iters);
    sec.read_string("initial", spec.fp.initial);
    sec.read_number("init_lo", spec.fp.init_lo);
    sec.read_number("init_hi", spec.fp.init_hi);
    sec.finish();
    if (spec.fp.initial != "uniform" && spec.fp.initial != "stationary")
      throw ConfigError("config key 'fp.initial': must be 'uniform' or 'stationary'");
  }

  if (const json* v = top.take("bounds")) {
    Section sec(*v, "bounds");
    sec.read_number("p", spec.bounds.p);
    sec.read_number("c_p", spec.bounds.c_p);
    sec.read_int("record_stride", spec.bounds.record_stride);
    sec.finish();
  }

  if (const json* v = top.take("ode")) {
    Section sec(*v, "ode");
    if (const json* t = sec.take("check_times"))
      spec.ode.check_times = read_number_array(*t, "ode.check_times");
    sec.read_number("spread0", spec.ode.spread0);
    sec.finish();
  }

  top.finish();

  if (spec.runs < 1) throw ConfigError("config key 'runs': must be at least 1");
  if (spec.sim.n_agents < 2) throw ConfigError("config key 'n_agents': must be at least 2");
  if (spec.sim.sweeps < 0) throw ConfigError("config key 'sweeps': must be non-negative");
  if (spec.sim.burn_in + spec.sim.averaging_window > spec.sim.sweeps)
    throw ConfigError("config: burn_in + window must not exceed sweeps");
  return spec;
}

ExperimentSpec parse_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file: " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& err) {
    throw ConfigError(std::string("config parse error: ") + err.what());
  }
  return parse_config_json(j);
}

ordered_json spec_to_json(const ExperimentSpec& spec) {
  ordered_json j;
  j["mode"] = to_string(spec.mode);
  j["gamma"] = spec.sim.params.gamma;
  j["sigma2"] = spec.sim.params.sigma2;
  j["alpha"] = spec.sim.params.alpha;
  j["noise"] = to_string(spec.sim.noise_kind);
  j["n_agents"] = spec.sim.n_agents;
  j["sweeps"] = spec.sim.sweeps;
  j["burn_in"] = spec.sim.burn_in;
  j["window"] = spec.sim.averaging_window;
  j["seed"] = spec.sim.seed;
  j["runs"] = spec.runs;
  j["out"] = spec.out_dir;
  j["formats"] = spec.formats;
  if (!spec.sim.dump_sweeps.empty()) j["dump_sweeps"] = spec.sim.dump_sweeps;
  if (spec.sim.initial.kind == mc::InitialCondition::Kind::AllEqual) {
    j["initial"] = {{"kind", "all_equal"}, {"value", spec.sim.initial.value}};
  } else {
    j["initial"] = {{"kind", "custom"}, {"wealths", spec.sim.initial.wealths}};
  }
  j["hist"] = {{"n_bins", spec.hist.n_bins},
               {"w_max", spec.hist.w_max},
               {"log_per_decade", spec.hist.log_per_decade},
               {"log_lo", spec.hist.log_lo},
               {"log_hi", spec.hist.log_hi},
               {"slope_lo", spec.hist.slope_lo},
               {"slope_hi", spec.hist.slope_hi}};
  j["fp"] = {{"w_max", spec.fp.w_max},     {"n_cells", spec.fp.n_cells},
             {"dt", spec.fp.dt},           {"tol", spec.fp.tol},
             {"max_iters", spec.fp.max_iters}, {"initial", spec.fp.initial},
             {"init_lo", spec.fp.init_lo}, {"init_hi", spec.fp.init_hi}};
  j["bounds"] = {{"p", spec.bounds.p},
                 {"c_p", spec.bounds.c_p},
                 {"record_stride", spec.bounds.record_stride}};
  j["ode"] = {{"check_times", spec.ode.check_times}, {"spread0", spec.ode.spread0}};
  return j;
}

int run_experiment(const ExperimentSpec& spec) {
  std::error_code ec;
  std::filesystem::create_directories(spec.out_dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory " + spec.out_dir);
  switch (spec.mode) {
    case Mode::Mc:
    case Mode::Compare:
      return run_mc_or_compare(spec);
    case Mode::Fp:
      return run_fp(spec);
    case Mode::VerifyOde:
      return run_verify_ode(spec);
    case Mode::VerifyBounds:
      return run_verify_bounds(spec);
  }
  throw std::logic_error("run_experiment: unhandled mode");
}

}  // namespace kinex::cli
