// Copyright 2026 The kinex Authors
// SPDX-License-Identifier: Apache-2.0

#include "kinex/stationary.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "kinex/math_special.hpp"

namespace kinex::fp {

double pareto_exponent(double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("pareto_exponent: lambda must be positive");
  return 1.0 + 2.0 / lambda;
}

ParetoStationary::ParetoStationary(double mu, double m) : mu_(mu), m_(m) {
  if (!(mu > 1.0)) throw std::invalid_argument("ParetoStationary: mu must exceed 1");
  if (!(m > 0.0)) throw std::invalid_argument("ParetoStationary: mean must be positive");
  log_norm_ = mu_ * std::log(mu_ - 1.0) - std::lgamma(mu_);
}

ParetoStationary ParetoStationary::from_lambda(double lambda, double m) {
  return ParetoStationary(pareto_exponent(lambda), m);
}

double ParetoStationary::pdf(double w) const {
  if (!(w > 0.0)) return 0.0;
  const double x = w / m_;
  const double log_pdf = log_norm_ - (mu_ - 1.0) / x - (1.0 + mu_) * std::log(x);
  return std::exp(log_pdf) / m_;
}

double ParetoStationary::cdf(double w) const {
  if (!(w > 0.0)) return 0.0;
  return regularized_gamma_q(mu_, (mu_ - 1.0) * m_ / w);
}

double ParetoStationary::ccdf(double w) const {
  if (!(w > 0.0)) return 1.0;
  return regularized_gamma_p(mu_, (mu_ - 1.0) * m_ / w);
}

double ParetoStationary::quantile(double p) const {
  if (!(p > 0.0 && p < 1.0))
    throw std::invalid_argument("quantile: p must lie strictly inside (0,1)");
  double lo = m_, hi = m_;
  while (cdf(lo) > p) lo *= 0.5;
  while (cdf(hi) < p) hi *= 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (cdf(mid) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double ParetoStationary::variance() const {
  if (!has_finite_variance()) return std::numeric_limits<double>::infinity();
  return m_ * m_ / (mu_ - 2.0);
}

double ParetoStationary::second_moment() const {
  if (!has_finite_variance()) return std::numeric_limits<double>::infinity();
  return m_ * m_ * (mu_ - 1.0) / (mu_ - 2.0);
}

double ParetoStationary::sample(RngStream& rng) const {
  const double rate = (mu_ - 1.0) * m_;
  return 1.0 / gamma_variate(rng, mu_, 1.0 / rate);
}

}  // namespace kinex::fp
