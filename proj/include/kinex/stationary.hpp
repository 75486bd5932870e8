// Copyright 2026 The kinex Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "kinex/rng.hpp"

namespace kinex::fp {

/// Pareto tail index of the continuous-trading equilibrium, 1 + 2/lambda.
double pareto_exponent(double lambda);

/// Analytic equilibrium of the continuous-trading limit: an inverse-gamma
/// density with shape mu and mean m, proportional to
/// exp(-(mu-1) m / w) / w^(1+mu). Its complementary CDF decays like w^-mu,
/// a Pareto power-law tail of index mu.
class ParetoStationary {
 public:
  explicit ParetoStationary(double mu, double m = 1.0);
  static ParetoStationary from_lambda(double lambda, double m = 1.0);

  double mu() const { return mu_; }
  double mean() const { return m_; }

  double pdf(double w) const;        // 0 for w <= 0 by continuous extension
  double cdf(double w) const;        // Q(mu, (mu-1) m / w)
  double ccdf(double w) const;       // P(mu, (mu-1) m / w), ~ w^-mu for large w
  double quantile(double p) const;   // bisection on the cdf, p in (0,1)

  bool has_finite_variance() const { return mu_ > 2.0; }
  double variance() const;           // m^2/(mu-2); +inf when mu <= 2
  double second_moment() const;      // m^2 (mu-1)/(mu-2); +inf when mu <= 2

  /// Exact draw: reciprocal of a Gamma(shape mu, scale 1/((mu-1) m)) variate.
  double sample(RngStream& rng) const;

 private:
  double mu_;
  double m_;
  double log_norm_;  // mu log(mu-1) - lgamma(mu), unit-mean normalization
};

}  // namespace kinex::fp
