// Copyright 2026 The kinex Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "kinex/rng.hpp"

namespace kinex {

/// Microscopic trade parameters. lambda = sigma2/gamma is always derived,
/// never stored, so the two can not drift apart.
struct TradeParams {
  double gamma;   // fraction of wealth exchanged per trade, in (0,1)
  double sigma2;  // variance of the multiplicative return noise, >= 0
  double alpha;   // highest extra moment order of the unit noise assumed finite

  TradeParams(double gamma_, double sigma2_, double alpha_ = 1.0);

  double lambda() const { return sigma2 / gamma; }
  double sigma() const;
};

enum class NoiseKind { Normal, BoundedUniform, BoundedTruncatedNormal };

const char* to_string(NoiseKind kind);
NoiseKind noise_kind_from_string(const std::string& name);

/// Zero-mean symmetric return noise with variance sigma^2.
///
/// The bounded kinds are supported inside (-(1-gamma), 1-gamma), which makes
/// every trade admissible and the interaction rate independent of the
/// wealths. The truncated normal is calibrated at construction so that the
/// post-truncation variance equals sigma^2 exactly.
class NoiseModel {
 public:
  static NoiseModel normal(double sigma);
  static NoiseModel bounded_uniform(double sigma, double gamma);
  static NoiseModel bounded_truncated_normal(double sigma, double gamma);
  static NoiseModel make(NoiseKind kind, double sigma, double gamma);

  NoiseKind kind() const { return kind_; }
  double sigma() const { return sigma_; }
  double variance() const { return sigma_ * sigma_; }
  bool is_bounded() const { return kind_ != NoiseKind::Normal; }
  /// Half-width of the admissible support (1-gamma); 0 for the unbounded kind.
  double bound() const { return bound_; }

  double sample(RngStream& rng) const;

 private:
  NoiseModel(NoiseKind kind, double sigma, double bound, double shape_param);

  NoiseKind kind_;
  double sigma_;
  double bound_;
  // uniform: half-width of the support; truncated normal: base std dev
  double shape_param_;
};

/// Wealths of the two parties to a trade. Inputs are non-negative; a raw
/// trade outcome may carry a negative component until gated by
/// is_admissible.
struct WealthPair {
  double w = 0.0;
  double w_star = 0.0;
};

/// The binary trade rule: each party keeps a (1-gamma) share, receives a
/// gamma share of the partner, and takes a multiplicative random return on
/// its own wealth. Purely functional; no admissibility check here.
inline WealthPair apply_trade(const WealthPair& pair, double eta,
                              double eta_star, double gamma) {
  const double keep = 1.0 - gamma;
  return WealthPair{keep * pair.w + gamma * pair.w_star + eta * pair.w,
                    keep * pair.w_star + gamma * pair.w + eta_star * pair.w_star};
}

/// No-debt rule: a candidate outcome commits only if both parties stay
/// non-negative.
inline bool is_admissible(const WealthPair& outcome) {
  return outcome.w >= 0.0 && outcome.w_star >= 0.0;
}

inline double sample_noise(const NoiseModel& model, RngStream& rng) {
  return model.sample(rng);
}

/// Wealth vector of N agents; N is fixed over a run.
struct Population {
  std::vector<double> wealths;

  std::size_t size() const { return wealths.size(); }
};

double total_wealth(const Population& pop);
double mean_wealth(const Population& pop);
double second_moment(const Population& pop);
/// Empirical moment of arbitrary order: mean of w^order.
double wealth_moment(const Population& pop, double order);

/// Throws if any wealth is negative or there are fewer than two agents.
void validate_population(const Population& pop);

}  // namespace kinex
