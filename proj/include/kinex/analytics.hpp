// Copyright 2026 The kinex Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "kinex/model.hpp"

namespace kinex::analytics {

/// Parameters of the relaxation law for the wealth spread
/// A(t) = double integral of (w - w_*)^2 over the product distribution,
/// valid in the bounded-noise regime where the mean m stays constant.
struct SpreadOde {
  double gamma;
  double sigma2;
  double m;   // conserved mean wealth, > 0
  double a0;  // initial spread, >= 0

  SpreadOde(double gamma_, double sigma2_, double m_, double a0_);
};

/// Two candidate decay coefficients are carried side by side. MeanField is
/// the second-moment balance of the trade rule, with decay 2*gamma*(1-gamma)
/// - sigma^2; TwiceDecay is an alternative with exactly twice that decay at
/// the same source term. Their fixed points differ by a factor two, so
/// ensemble Monte Carlo can discriminate between them (see the verify-ode
/// tool and the acceptance suite).
enum class SpreadLaw { MeanField, TwiceDecay };

/// dA/dt in original (per-sweep) time.
double spread_rhs(double a, const SpreadOde& ode, SpreadLaw law = SpreadLaw::MeanField);
/// Convenience wrappers naming the two laws explicitly.
double spread_rhs_mean_field(double a, const SpreadOde& ode);
double spread_rhs_twice_decay(double a, const SpreadOde& ode);

/// Fixed point of the spread law (for positive decay coefficient).
double spread_fixed_point(const SpreadOde& ode, SpreadLaw law = SpreadLaw::MeanField);

/// Exact exponential-relaxation solution A(t) in original time.
double spread_solution(const SpreadOde& ode, double t, SpreadLaw law = SpreadLaw::MeanField);

/// A(tau) in the continuous-trading limit: scaled time tau = gamma*t with
/// sigma^2/gamma -> lambda. MeanField gives dA/dtau = -(2-lambda) A +
/// 2 lambda m^2, finite limit 2 lambda m^2/(2-lambda) for lambda < 2 and
/// divergence for lambda >= 2; lambda == 2 degenerates to linear growth.
double spread_limit_solution(double lambda, double m, double a0, double tau,
                             SpreadLaw law = SpreadLaw::MeanField);
double spread_limit_fixed_point(double lambda, double m,
                                SpreadLaw law = SpreadLaw::MeanField);

/// Exponential rate bounding the growth of the mean wealth when the noise is
/// unbounded: sigma^(2+alpha) (2-gamma) / (1-gamma)^(2+alpha). The mean obeys
/// m(t) <= m(0) exp(rate t).
double growth_bound_rate(double gamma, double sigma, double alpha);

/// Inputs of the p-th moment growth bound, p > 2. c_p is a generic convexity
/// constant, exposed as a bound parameter (default 1), not a model constant.
struct MomentBound {
  double p;
  double gamma;
  double sigma;
  double alpha;
  double c_p = 1.0;

  MomentBound(double p_, double gamma_, double sigma_, double alpha_, double c_p_ = 1.0);
};

/// The amplitude sigma^2 (1 + gamma^(p-2)) + sigma^p + 2 gamma^2 + 2 gamma^p
/// + 2 gamma^2 sigma^(p-2) entering the p-th moment rate.
double moment_bound_amplitude(const MomentBound& bound);

/// Gronwall rate for the p-th moment: M_p(t) <= M_p(0) exp(rate t).
double moment_bound_rate(const MomentBound& bound);

/// Empirical wealth spread of a population: the double sum of (w_i - w_j)^2
/// over the product of the empirical measure with itself, i.e. twice the
/// biased population variance.
double empirical_spread(const Population& pop);

}  // namespace kinex::analytics
