// Copyright 2026 The kinex Authors
// SPDX-License-Identifier: Apache-2.0

#include "kinex/model.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace kinex {

TradeParams::TradeParams(double gamma_, double sigma2_, double alpha_)
    : gamma(gamma_), sigma2(sigma2_), alpha(alpha_) {
  if (!(gamma > 0.0 && gamma < 1.0))
    throw std::invalid_argument("TradeParams: gamma must lie in (0,1)");
  if (!(sigma2 >= 0.0))
    throw std::invalid_argument("TradeParams: sigma2 must be non-negative");
  if (!(alpha > 0.0))
    throw std::invalid_argument("TradeParams: alpha must be positive");
}

double TradeParams::sigma() const { return std::sqrt(sigma2); }

const char* to_string(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::Normal: return "normal";
    case NoiseKind::BoundedUniform: return "bounded_uniform";
    case NoiseKind::BoundedTruncatedNormal: return "bounded_truncated_normal";
  }
  return "unknown";
}

NoiseKind noise_kind_from_string(const std::string& name) {
  if (name == "normal") return NoiseKind::Normal;
  if (name == "bounded_uniform") return NoiseKind::BoundedUniform;
  if (name == "bounded_truncated_normal") return NoiseKind::BoundedTruncatedNormal;
  throw std::invalid_argument("unknown noise kind: " + name);
}

namespace {

double std_normal_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

double std_normal_cdf(double x) {
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

// Variance of a standard normal with std dev base_sigma truncated to
// (-bound, bound). Increasing in base_sigma, with supremum bound^2/3.
double truncated_variance(double base_sigma, double bound) {
  const double r = bound / base_sigma;
  const double in_mass = 2.0 * std_normal_cdf(r) - 1.0;
  return base_sigma * base_sigma * (1.0 - 2.0 * r * std_normal_pdf(r) / in_mass);
}

// Solves truncated_variance(base, bound) == target for the base std dev.
double calibrate_truncated_base(double target_var, double bound) {
  double lo = std::sqrt(target_var);  // truncation only shrinks the variance
  double hi = lo;
  for (int i = 0; i < 200 && truncated_variance(hi, bound) < target_var; ++i)
    hi *= 2.0;
  if (truncated_variance(hi, bound) < target_var)
    throw std::invalid_argument("truncated normal: variance too close to the support cap");
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (truncated_variance(mid, bound) < target_var ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

NoiseModel::NoiseModel(NoiseKind kind, double sigma, double bound, double shape_param)
    : kind_(kind), sigma_(sigma), bound_(bound), shape_param_(shape_param) {}

NoiseModel NoiseModel::normal(double sigma) {
  if (!(sigma >= 0.0))
    throw std::invalid_argument("NoiseModel: sigma must be non-negative");
  return NoiseModel(NoiseKind::Normal, sigma, 0.0, 0.0);
}

NoiseModel NoiseModel::bounded_uniform(double sigma, double gamma) {
  if (!(sigma >= 0.0))
    throw std::invalid_argument("NoiseModel: sigma must be non-negative");
  if (!(gamma > 0.0 && gamma < 1.0))
    throw std::invalid_argument("NoiseModel: gamma must lie in (0,1)");
  const double bound = 1.0 - gamma;
  const double half_width = sigma * std::sqrt(3.0);
  if (half_width > bound)
    throw std::invalid_argument(
        "NoiseModel: uniform noise on (-(1-gamma),1-gamma) caps sigma^2 at (1-gamma)^2/3");
  return NoiseModel(NoiseKind::BoundedUniform, sigma, bound, half_width);
}

NoiseModel NoiseModel::bounded_truncated_normal(double sigma, double gamma) {
  if (!(sigma >= 0.0))
    throw std::invalid_argument("NoiseModel: sigma must be non-negative");
  if (!(gamma > 0.0 && gamma < 1.0))
    throw std::invalid_argument("NoiseModel: gamma must lie in (0,1)");
  const double bound = 1.0 - gamma;
  if (sigma == 0.0)
    return NoiseModel(NoiseKind::BoundedTruncatedNormal, sigma, bound, 0.0);
  const double cap = bound * bound / 3.0;
  if (sigma * sigma >= cap * (1.0 - 1e-6))
    throw std::invalid_argument(
        "NoiseModel: truncated normal on (-(1-gamma),1-gamma) caps sigma^2 below (1-gamma)^2/3");
  const double base = calibrate_truncated_base(sigma * sigma, bound);
  return NoiseModel(NoiseKind::BoundedTruncatedNormal, sigma, bound, base);
}

NoiseModel NoiseModel::make(NoiseKind kind, double sigma, double gamma) {
  switch (kind) {
    case NoiseKind::Normal: return normal(sigma);
    case NoiseKind::BoundedUniform: return bounded_uniform(sigma, gamma);
    case NoiseKind::BoundedTruncatedNormal: return bounded_truncated_normal(sigma, gamma);
  }
  throw std::invalid_argument("NoiseModel: unknown kind");
}

double NoiseModel::sample(RngStream& rng) const {
  if (sigma_ == 0.0) return 0.0;
  switch (kind_) {
    case NoiseKind::Normal:
      return sigma_ * rng.normal();
    case NoiseKind::BoundedUniform:
      // open interval keeps |eta| strictly below the support half-width
      return shape_param_ * (2.0 * rng.uniform_open01() - 1.0);
    case NoiseKind::BoundedTruncatedNormal: {
      double x;
      do {
        x = shape_param_ * rng.normal();
      } while (std::abs(x) >= bound_);
      return x;
    }
  }
  return 0.0;
}

double total_wealth(const Population& pop) {
  // Neumaier-compensated sum: totals feed conservation checks
  double sum = 0.0, comp = 0.0;
  for (double w : pop.wealths) {
    const double t = sum + w;
    comp += (std::abs(sum) >= std::abs(w)) ? (sum - t) + w : (w - t) + sum;
    sum = t;
  }
  return sum + comp;
}

double mean_wealth(const Population& pop) {
  if (pop.wealths.empty()) throw std::invalid_argument("mean_wealth: empty population");
  return total_wealth(pop) / static_cast<double>(pop.size());
}

double second_moment(const Population& pop) {
  if (pop.wealths.empty()) throw std::invalid_argument("second_moment: empty population");
  double sum = 0.0, comp = 0.0;
  for (double w : pop.wealths) {
    const double x = w * w;
    const double t = sum + x;
    comp += (std::abs(sum) >= std::abs(x)) ? (sum - t) + x : (x - t) + sum;
    sum = t;
  }
  return (sum + comp) / static_cast<double>(pop.size());
}

double wealth_moment(const Population& pop, double order) {
  if (pop.wealths.empty()) throw std::invalid_argument("wealth_moment: empty population");
  double sum = 0.0, comp = 0.0;
  for (double w : pop.wealths) {
    const double x = std::pow(w, order);
    const double t = sum + x;
    comp += (std::abs(sum) >= std::abs(x)) ? (sum - t) + x : (x - t) + sum;
    sum = t;
  }
  return (sum + comp) / static_cast<double>(pop.size());
}

void validate_population(const Population& pop) {
  if (pop.size() < 2)
    throw std::invalid_argument("population must contain at least two agents");
  for (double w : pop.wealths)
    if (!(w >= 0.0)) throw std::invalid_argument("population wealths must be non-negative");
}

}  // namespace kinex
