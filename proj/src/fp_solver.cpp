// Copyright 2026 The kinex Authors
// SPDX-License-Identifier: Apache-2.0

#include "kinex/fp_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace kinex::fp {

namespace {

double compensated_sum(const std::vector<double>& values) {
  double sum = 0.0, comp = 0.0;
  for (double v : values) {
    const double t = sum + v;
    comp += (std::abs(sum) >= std::abs(v)) ? (sum - t) + v : (v - t) + sum;
    sum = t;
  }
  return sum + comp;
}

// Interface flux coefficients: F_j = a_j g_left + b_j g_right at interface j,
// for the flux F = B g + D g' with B(w) = (1+lambda) w - m, D(w) =
// (lambda/2) w^2. The Chang-Cooper weight delta makes the discrete zero-flux
// ratio g_right/g_left = exp(-h B/D), i.e. the scheme reproduces the local
// equilibrium exactly and stays positivity-preserving for any dt under
// backward Euler.
struct FluxCoefficients {
  std::vector<double> a;  // coefficient of the left cell, a < 0 interior
  std::vector<double> b;  // coefficient of the right cell, b > 0 interior
};

double chang_cooper_weight(double peclet) {
  if (std::abs(peclet) < 1e-8) return 0.5 - peclet / 12.0;  // series around 0
  return 1.0 / peclet - 1.0 / std::expm1(peclet);
}

FluxCoefficients make_flux_coefficients(const FpGrid& grid) {
  const std::size_t n = grid.n_cells();
  const double h = grid.cell_width();
  FluxCoefficients cf;
  cf.a.assign(n + 1, 0.0);  // boundary interfaces 0 and n stay zero-flux
  cf.b.assign(n + 1, 0.0);
  for (std::size_t j = 1; j < n; ++j) {
    const double x = static_cast<double>(j) * h;
    const double drift = (1.0 + grid.lambda) * x - grid.m;
    const double diffusion = 0.5 * grid.lambda * x * x;
    if (diffusion > 0.0) {
      const double peclet = h * drift / diffusion;
      const double delta = chang_cooper_weight(peclet);
      cf.a[j] = drift * delta - diffusion / h;
      cf.b[j] = drift * (1.0 - delta) + diffusion / h;
    } else {
      // pure drift (lambda == 0): donor-cell upwinding
      if (drift > 0.0) {
        cf.b[j] = drift;
      } else {
        cf.a[j] = drift;
      }
    }
  }
  return cf;
}

// dg_i/dtau = (F_{i+1} - F_i) / h
void apply_operator(const FpGrid& grid, const FluxCoefficients& cf,
                    std::vector<double>& out) {
  const std::size_t n = grid.n_cells();
  const double h = grid.cell_width();
  const auto& g = grid.density;
  out.assign(n, 0.0);
  for (std::size_t j = 1; j < n; ++j) {
    const double flux = cf.a[j] * g[j - 1] + cf.b[j] * g[j];
    out[j - 1] += flux / h;
    out[j] -= flux / h;
  }
}

void step_explicit(FpGrid& grid, const FluxCoefficients& cf, double dt,
                   std::vector<double>& scratch) {
  apply_operator(grid, cf, scratch);
  for (std::size_t i = 0; i < grid.density.size(); ++i) {
    grid.density[i] += dt * scratch[i];
    if (grid.density[i] < 0.0) {
      std::ostringstream msg;
      msg << "explicit fp_step lost positivity in cell " << i
          << "; dt = " << dt << " exceeds the limit " << explicit_dt_limit(grid);
      throw std::invalid_argument(msg.str());
    }
  }
}

struct TridiagonalWorkspace {
  std::vector<double> lower, diag, upper, rhs;
};

// Backward Euler: (I - dt L) g_new = g_old, L tridiagonal with column sums
// zero, so the solve conserves mass to rounding. Thomas algorithm.
void step_implicit(FpGrid& grid, const FluxCoefficients& cf, double dt,
                   TridiagonalWorkspace& ws) {
  const std::size_t n = grid.n_cells();
  const double h = grid.cell_width();
  const double r = dt / h;
  ws.lower.assign(n, 0.0);
  ws.diag.assign(n, 1.0);
  ws.upper.assign(n, 0.0);
  std::vector<double>& g = grid.density;
  ws.rhs = g;

  // row i couples to interfaces i (left, coeffs a_i, b_i) and i+1 (right)
  for (std::size_t i = 0; i < n; ++i) {
    const double left_b = cf.b[i];
    const double right_a = cf.a[i + 1], right_b = cf.b[i + 1];
    ws.diag[i] = 1.0 - r * (right_a - left_b);
    if (i > 0) ws.lower[i] = r * cf.a[i];
    if (i + 1 < n) ws.upper[i] = -r * right_b;
  }

  // forward elimination
  for (std::size_t i = 1; i < n; ++i) {
    const double w = ws.lower[i] / ws.diag[i - 1];
    ws.diag[i] -= w * ws.upper[i - 1];
    ws.rhs[i] -= w * ws.rhs[i - 1];
  }
  g[n - 1] = ws.rhs[n - 1] / ws.diag[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) {
    g[i] = (ws.rhs[i] - ws.upper[i] * g[i + 1]) / ws.diag[i];
  }
}

}  // namespace

double FpGrid::mass() const { return compensated_sum(density) * cell_width(); }

double FpGrid::grid_mean() const {
  std::vector<double> weighted(density.size());
  for (std::size_t i = 0; i < density.size(); ++i) weighted[i] = density[i] * cell_center(i);
  return compensated_sum(weighted) * cell_width() / mass();
}

double FpGrid::grid_variance() const {
  const double mean = grid_mean();
  std::vector<double> weighted(density.size());
  for (std::size_t i = 0; i < density.size(); ++i) {
    const double d = cell_center(i) - mean;
    weighted[i] = density[i] * d * d;
  }
  return compensated_sum(weighted) * cell_width() / mass();
}

FpGrid FpGrid::uniform(double lambda, double m, double w_max, std::size_t n_cells,
                       double lo, double hi) {
  if (!(w_max > 0.0) || n_cells == 0)
    throw std::invalid_argument("FpGrid: need positive w_max and at least one cell");
  if (!(hi > lo)) throw std::invalid_argument("FpGrid::uniform: need hi > lo");
  FpGrid grid{w_max, lambda, m, std::vector<double>(n_cells, 0.0)};
  const double h = grid.cell_width();
  for (std::size_t i = 0; i < n_cells; ++i) {
    const double cell_lo = static_cast<double>(i) * h;
    const double cell_hi = cell_lo + h;
    const double overlap = std::max(0.0, std::min(hi, cell_hi) - std::max(lo, cell_lo));
    grid.density[i] = overlap / h;
  }
  const double total = grid.mass();
  if (!(total > 0.0))
    throw std::invalid_argument("FpGrid::uniform: [lo,hi] does not intersect the domain");
  for (auto& v : grid.density) v /= total;
  return grid;
}

FpGrid FpGrid::from_stationary(const ParetoStationary& ps, double lambda, double w_max,
                               std::size_t n_cells, bool renormalize) {
  if (!(w_max > 0.0) || n_cells == 0)
    throw std::invalid_argument("FpGrid: need positive w_max and at least one cell");
  FpGrid grid{w_max, lambda, ps.mean(), std::vector<double>(n_cells, 0.0)};
  const double h = grid.cell_width();
  for (std::size_t i = 0; i < n_cells; ++i) {
    const double lo = static_cast<double>(i) * h;
    grid.density[i] = (ps.cdf(lo + h) - ps.cdf(lo)) / h;
  }
  if (renormalize) {
    const double total = grid.mass();
    for (auto& v : grid.density) v /= total;
  }
  return grid;
}

double explicit_dt_limit(const FpGrid& grid) {
  const auto cf = make_flux_coefficients(grid);
  const std::size_t n = grid.n_cells();
  const double h = grid.cell_width();
  double max_outflow = 0.0;  // per-cell loss rate |diag| of the operator
  for (std::size_t i = 0; i < n; ++i) {
    max_outflow = std::max(max_outflow, (cf.b[i] - cf.a[i + 1]) / h);
  }
  return max_outflow > 0.0 ? 1.0 / max_outflow : std::numeric_limits<double>::infinity();
}

FpGrid fp_step(const FpGrid& grid, double dt, TimeStepping stepping) {
  if (!(dt > 0.0)) throw std::invalid_argument("fp_step: dt must be positive");
  FpGrid next = grid;
  const auto cf = make_flux_coefficients(grid);
  if (stepping == TimeStepping::Explicit) {
    const double limit = explicit_dt_limit(grid);
    if (dt > limit) {
      std::ostringstream msg;
      msg << "fp_step: explicit dt = " << dt << " violates the positivity limit " << limit;
      throw std::invalid_argument(msg.str());
    }
    std::vector<double> scratch;
    step_explicit(next, cf, dt, scratch);
  } else {
    TridiagonalWorkspace ws;
    step_implicit(next, cf, dt, ws);
  }
  return next;
}

SteadyResult fp_solve_to_steady(FpGrid grid, const SteadyOptions& options) {
  if (!(options.dt > 0.0) || !(options.tol > 0.0))
    throw std::invalid_argument("fp_solve_to_steady: dt and tol must be positive");
  if (options.stepping == TimeStepping::Explicit) {
    const double limit = explicit_dt_limit(grid);
    if (options.dt > limit) {
      std::ostringstream msg;
      msg << "fp_solve_to_steady: explicit dt = " << options.dt
          << " violates the positivity limit " << limit;
      throw std::invalid_argument(msg.str());
    }
  }

  SteadyResult result;
  const auto cf = make_flux_coefficients(grid);
  const double h = grid.cell_width();
  const double mass0 = grid.mass();
  std::vector<double> previous;
  std::vector<double> scratch;
  TridiagonalWorkspace ws;

  double tau = 0.0;
  for (long iter = 1; iter <= options.max_iters; ++iter) {
    previous = grid.density;
    if (options.stepping == TimeStepping::Explicit) {
      step_explicit(grid, cf, options.dt, scratch);
    } else {
      step_implicit(grid, cf, options.dt, ws);
    }
    tau += options.dt;

    double change = 0.0;
    for (std::size_t i = 0; i < grid.density.size(); ++i)
      change += std::abs(grid.density[i] - previous[i]) * h;
    const double residual = change / options.dt;

    result.max_mass_drift =
        std::max(result.max_mass_drift, std::abs(grid.mass() - mass0) / mass0);
    if (iter % options.history_stride == 0 || residual < options.tol)
      result.history.push_back({iter, tau, residual});
    result.iterations = iter;
    if (residual < options.tol) {
      result.converged = true;
      break;
    }
  }
  if (!result.converged)
    throw std::runtime_error("fp_solve_to_steady: residual tolerance not reached within budget");
  result.grid = std::move(grid);
  return result;
}

std::vector<double> analytic_cell_masses(const ParetoStationary& ps, const FpGrid& grid) {
  const double h = grid.cell_width();
  std::vector<double> masses(grid.n_cells());
  for (std::size_t i = 0; i < masses.size(); ++i) {
    const double lo = static_cast<double>(i) * h;
    masses[i] = ps.cdf(lo + h) - ps.cdf(lo);
  }
  return masses;
}

double l1_vs_stationary(const FpGrid& grid, const ParetoStationary& ps, bool renormalized) {
  auto analytic = analytic_cell_masses(ps, grid);
  if (renormalized) {
    const double total = compensated_sum(analytic);
    for (auto& v : analytic) v /= total;
  }
  const double h = grid.cell_width();
  double distance = 0.0;
  for (std::size_t i = 0; i < analytic.size(); ++i)
    distance += std::abs(grid.density[i] * h - analytic[i]);
  return distance;
}

}  // namespace kinex::fp
