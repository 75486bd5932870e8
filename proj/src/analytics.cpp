// Copyright 2026 The kinex Authors
// SPDX-License-Identifier: Apache-2.0

#include "kinex/analytics.hpp"

#include <cmath>
#include <stdexcept>

namespace kinex::analytics {

SpreadOde::SpreadOde(double gamma_, double sigma2_, double m_, double a0_)
    : gamma(gamma_), sigma2(sigma2_), m(m_), a0(a0_) {
  if (!(gamma > 0.0 && gamma < 1.0))
    throw std::invalid_argument("SpreadOde: gamma must lie in (0,1)");
  if (!(sigma2 >= 0.0)) throw std::invalid_argument("SpreadOde: sigma2 must be >= 0");
  if (!(m > 0.0)) throw std::invalid_argument("SpreadOde: m must be positive");
  if (!(a0 >= 0.0)) throw std::invalid_argument("SpreadOde: a0 must be >= 0");
}

namespace {

double decay_coefficient(const SpreadOde& ode, SpreadLaw law) {
  const double base = 2.0 * ode.gamma * (1.0 - ode.gamma) - ode.sigma2;
  return law == SpreadLaw::MeanField ? base : 2.0 * base;
}

double source_term(const SpreadOde& ode) { return 2.0 * ode.sigma2 * ode.m * ode.m; }

// A' = -c A + s with A(0) = a0, valid for any sign of c.
double linear_relaxation(double a0, double c, double s, double t) {
  if (c == 0.0) return a0 + s * t;
  const double fixed = s / c;
  return fixed + (a0 - fixed) * std::exp(-c * t);
}

}  // namespace

double spread_rhs(double a, const SpreadOde& ode, SpreadLaw law) {
  return -decay_coefficient(ode, law) * a + source_term(ode);
}

double spread_rhs_mean_field(double a, const SpreadOde& ode) {
  return spread_rhs(a, ode, SpreadLaw::MeanField);
}

double spread_rhs_twice_decay(double a, const SpreadOde& ode) {
  return spread_rhs(a, ode, SpreadLaw::TwiceDecay);
}

double spread_fixed_point(const SpreadOde& ode, SpreadLaw law) {
  const double c = decay_coefficient(ode, law);
  if (c == 0.0) throw std::domain_error("spread_fixed_point: zero decay coefficient");
  return source_term(ode) / c;
}

double spread_solution(const SpreadOde& ode, double t, SpreadLaw law) {
  return linear_relaxation(ode.a0, decay_coefficient(ode, law), source_term(ode), t);
}

double spread_limit_solution(double lambda, double m, double a0, double tau, SpreadLaw law) {
  if (!(lambda >= 0.0))
    throw std::invalid_argument("spread_limit_solution: lambda must be >= 0");
  const double base = 2.0 - lambda;
  const double c = law == SpreadLaw::MeanField ? base : 2.0 * base;
  return linear_relaxation(a0, c, 2.0 * lambda * m * m, tau);
}

double spread_limit_fixed_point(double lambda, double m, SpreadLaw law) {
  const double base = 2.0 - lambda;
  const double c = law == SpreadLaw::MeanField ? base : 2.0 * base;
  if (c == 0.0)
    throw std::domain_error("spread_limit_fixed_point: no finite fixed point at lambda = 2");
  return 2.0 * lambda * m * m / c;
}

double growth_bound_rate(double gamma, double sigma, double alpha) {
  if (!(gamma > 0.0 && gamma < 1.0))
    throw std::invalid_argument("growth_bound_rate: gamma must lie in (0,1)");
  if (!(sigma >= 0.0)) throw std::invalid_argument("growth_bound_rate: sigma must be >= 0");
  if (!(alpha > 0.0)) throw std::invalid_argument("growth_bound_rate: alpha must be positive");
  return std::pow(sigma, 2.0 + alpha) * (2.0 - gamma) / std::pow(1.0 - gamma, 2.0 + alpha);
}

MomentBound::MomentBound(double p_, double gamma_, double sigma_, double alpha_, double c_p_)
    : p(p_), gamma(gamma_), sigma(sigma_), alpha(alpha_), c_p(c_p_) {
  if (!(p > 2.0)) throw std::invalid_argument("MomentBound: p must exceed 2");
  if (!(gamma >= 0.0 && gamma < 1.0))
    throw std::invalid_argument("MomentBound: gamma must lie in [0,1)");
  if (!(sigma >= 0.0)) throw std::invalid_argument("MomentBound: sigma must be >= 0");
  if (!(alpha > 0.0)) throw std::invalid_argument("MomentBound: alpha must be positive");
  if (!(c_p > 0.0)) throw std::invalid_argument("MomentBound: c_p must be positive");
}

double moment_bound_amplitude(const MomentBound& b) {
  const double s2 = b.sigma * b.sigma;
  const double g2 = b.gamma * b.gamma;
  return s2 * (1.0 + std::pow(b.gamma, b.p - 2.0)) + std::pow(b.sigma, b.p) +
         2.0 * g2 + 2.0 * std::pow(b.gamma, b.p) + 2.0 * g2 * std::pow(b.sigma, b.p - 2.0);
}

double moment_bound_rate(const MomentBound& b) {
  const double convexity = 0.5 * b.p * (b.p - 1.0) * b.c_p * moment_bound_amplitude(b);
  const double tail = 2.0 * std::pow(b.sigma, 2.0 + b.alpha) /
                      std::pow(1.0 - b.gamma, 2.0 + b.alpha);
  return convexity + tail;
}

double empirical_spread(const Population& pop) {
  if (pop.size() < 2) throw std::invalid_argument("empirical_spread: need at least two agents");
  const double m = mean_wealth(pop);
  const double m2 = second_moment(pop);
  // A = 2 (M2 - m^2); biased variance matches the product-measure double sum
  return 2.0 * (m2 - m * m);
}

}  // namespace kinex::analytics
