// Copyright 2026 The kinex Authors
// SPDX-License-Identifier: Apache-2.0

#include "kinex/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kinex::est {

namespace {

void check_edges(const std::vector<double>& edges) {
  if (edges.size() < 2) throw std::invalid_argument("histogram needs at least two edges");
  if (edges.front() != 0.0) throw std::invalid_argument("histogram edges must start at 0");
  for (std::size_t i = 1; i < edges.size(); ++i)
    if (!(edges[i] > edges[i - 1]))
      throw std::invalid_argument("histogram edges must be strictly increasing");
}

}  // namespace

std::vector<double> uniform_edges(double hi, int n_bins) {
  if (!(hi > 0.0) || n_bins < 1) throw std::invalid_argument("uniform_edges: bad arguments");
  std::vector<double> edges(static_cast<std::size_t>(n_bins) + 1);
  for (std::size_t i = 0; i < edges.size(); ++i)
    edges[i] = hi * static_cast<double>(i) / static_cast<double>(n_bins);
  edges.front() = 0.0;
  edges.back() = hi;
  return edges;
}

std::vector<double> log_edges(double lo, double hi, int per_decade) {
  if (!(lo > 0.0) || !(hi > lo) || per_decade < 1)
    throw std::invalid_argument("log_edges: bad arguments");
  std::vector<double> edges{0.0};
  for (int k = 0;; ++k) {
    const double e = lo * std::pow(10.0, static_cast<double>(k) / per_decade);
    if (e >= hi * (1.0 - 1e-12)) break;
    edges.push_back(e);
  }
  edges.push_back(hi);
  return edges;
}

HistogramAccumulator::HistogramAccumulator(std::vector<double> edges)
    : edges_(std::move(edges)) {
  check_edges(edges_);
  counts_.assign(edges_.size() - 1, 0);
}

void HistogramAccumulator::add(double value) {
  ++count_;
  if (value >= edges_.back()) {
    ++overflow_;
    return;
  }
  const auto it = std::upper_bound(edges_.begin(), edges_.end(), value);
  const std::size_t bin = static_cast<std::size_t>(it - edges_.begin());
  // values below the first edge cannot occur (edges start at 0, values >= 0)
  ++counts_[bin == 0 ? 0 : bin - 1];
}

void HistogramAccumulator::add_scaled(const std::vector<double>& values, double scale) {
  for (double v : values) add(v * scale);
}

void HistogramAccumulator::merge(const HistogramAccumulator& other) {
  if (other.edges_ != edges_)
    throw std::invalid_argument("HistogramAccumulator::merge: incompatible edges");
  for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
  overflow_ += other.overflow_;
  count_ += other.count_;
}

Histogram HistogramAccumulator::normalized() const {
  if (count_ == 0) throw std::runtime_error("HistogramAccumulator: no samples");
  Histogram hist;
  hist.edges = edges_;
  hist.masses.resize(counts_.size());
  const double inv = 1.0 / static_cast<double>(count_);
  for (std::size_t i = 0; i < counts_.size(); ++i)
    hist.masses[i] = static_cast<double>(counts_[i]) * inv;
  hist.overflow_mass = static_cast<double>(overflow_) * inv;
  hist.n_samples = count_;
  return hist;
}

Histogram histogram(const Population& pop, const std::vector<double>& edges) {
  HistogramAccumulator acc(edges);
  for (double w : pop.wealths) acc.add(w);
  return acc.normalized();
}

Population normalize(const Population& pop) {
  const double m = mean_wealth(pop);
  if (!(m > 0.0)) throw std::invalid_argument("normalize: population mean must be positive");
  Population out = pop;
  for (auto& w : out.wealths) w /= m;
  return out;
}

TailFit hill_estimator(std::vector<double> samples, std::size_t k) {
  if (k < 10) throw std::invalid_argument("hill_estimator: k must be at least 10");
  if (k + 1 > samples.size())
    throw std::invalid_argument("hill_estimator: k must be below the sample count");
  std::partial_sort(samples.begin(), samples.begin() + static_cast<std::ptrdiff_t>(k + 1),
                    samples.end(), std::greater<>());
  const double pivot = samples[k];
  if (!(pivot > 0.0))
    throw std::invalid_argument("hill_estimator: tail samples must be positive");
  double sum = 0.0;
  for (std::size_t i = 0; i < k; ++i) sum += std::log(samples[i] / pivot);
  if (!(sum > 0.0))
    throw std::domain_error("hill_estimator: degenerate tail (constant samples)");
  TailFit fit;
  fit.estimate = static_cast<double>(k) / sum;
  fit.k_used = static_cast<int>(k);
  fit.std_error = fit.estimate / std::sqrt(static_cast<double>(k));
  return fit;
}

TailFit hill_estimator(std::vector<double> samples) {
  const auto k = static_cast<std::size_t>(
      std::ceil(std::sqrt(static_cast<double>(samples.size()))));
  return hill_estimator(std::move(samples), std::max<std::size_t>(k, 10));
}

SlopeFit fit_loglog(const std::vector<std::pair<double, double>>& w_ccdf) {
  std::vector<double> xs, ys;
  xs.reserve(w_ccdf.size());
  ys.reserve(w_ccdf.size());
  for (const auto& [w, c] : w_ccdf) {
    if (w > 0.0 && c > 0.0) {
      xs.push_back(std::log(w));
      ys.push_back(std::log(c));
    }
  }
  if (xs.size() < 10)
    throw std::invalid_argument("fit_loglog: need at least 10 usable points");
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx, dy = ys[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (!(sxx > 0.0)) throw std::invalid_argument("fit_loglog: degenerate abscissae");
  SlopeFit fit;
  fit.slope = sxy / sxx;
  fit.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  fit.n_points = xs.size();
  return fit;
}

SlopeFit loglog_ccdf_slope(std::vector<double> samples, double w_lo, double w_hi) {
  if (!(w_hi > w_lo)) throw std::invalid_argument("loglog_ccdf_slope: need w_hi > w_lo");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  std::vector<std::pair<double, double>> points;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double w = samples[i];
    if (w < w_lo || w > w_hi) continue;
    const double ccdf = static_cast<double>(samples.size() - i) / n;
    points.emplace_back(w, ccdf);
  }
  return fit_loglog(points);
}

SlopeFit loglog_ccdf_slope(const Histogram& hist, double w_lo, double w_hi) {
  if (!(w_hi > w_lo)) throw std::invalid_argument("loglog_ccdf_slope: need w_hi > w_lo");
  // ccdf at edge j = mass at and beyond bin j
  std::vector<std::pair<double, double>> points;
  double ccdf = hist.overflow_mass;
  std::vector<double> at_edge(hist.edges.size(), 0.0);
  at_edge.back() = ccdf;
  for (std::size_t j = hist.masses.size(); j-- > 0;) {
    ccdf += hist.masses[j];
    at_edge[j] = ccdf;
  }
  for (std::size_t j = 0; j < hist.edges.size(); ++j) {
    const double w = hist.edges[j];
    if (w >= w_lo && w <= w_hi) points.emplace_back(w, at_edge[j]);
  }
  return fit_loglog(points);
}

double l1_distance(const Histogram& hist, const fp::ParetoStationary& ps) {
  double distance = 0.0;
  for (std::size_t i = 0; i < hist.masses.size(); ++i) {
    const double analytic = ps.cdf(hist.edges[i + 1]) - ps.cdf(hist.edges[i]);
    distance += std::abs(hist.masses[i] - analytic);
  }
  distance += std::abs(hist.overflow_mass - ps.ccdf(hist.edges.back()));
  return distance;
}

double ks_distance(std::vector<double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw std::invalid_argument("ks_distance: no samples");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
    d = std::max(d, std::abs(static_cast<double>(i) / n - f));
  }
  return d;
}

}  // namespace kinex::est
