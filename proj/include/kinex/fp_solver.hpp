// Copyright 2026 The kinex Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <vector>

#include "kinex/stationary.hpp"

namespace kinex::fp {

/// Cell-centred finite-volume grid on [0, w_max] for the continuous-trading
/// limit equation
///
///   dg/dtau = (lambda/2) d^2(w^2 g)/dw^2 + d((w - m) g)/dw
///           = d/dw [ ((1+lambda) w - m) g + (lambda/2) w^2 dg/dw ],
///
/// with zero-flux boundaries at both ends. The diffusion coefficient
/// degenerates at w = 0, which closes the lower boundary naturally.
struct FpGrid {
  double w_max = 20.0;
  double lambda = 2.0;
  double m = 1.0;                // drift target = mean of the equilibrium
  std::vector<double> density;   // cell averages of g

  std::size_t n_cells() const { return density.size(); }
  double cell_width() const { return w_max / static_cast<double>(density.size()); }
  double cell_center(std::size_t i) const {
    return (static_cast<double>(i) + 0.5) * cell_width();
  }

  double mass() const;           // sum of cell averages times cell width
  double grid_mean() const;
  double grid_variance() const;

  /// Uniform density on [lo, hi] (clipped to the domain), normalized to 1.
  static FpGrid uniform(double lambda, double m, double w_max, std::size_t n_cells,
                        double lo, double hi);
  /// Cell averages of the analytic equilibrium via CDF differences. With
  /// renormalize, the truncated tail mass is folded back so the grid carries
  /// exactly unit mass (the steady state of the truncated problem).
  static FpGrid from_stationary(const ParetoStationary& ps, double lambda, double w_max,
                                std::size_t n_cells, bool renormalize = true);
};

enum class TimeStepping { Implicit, Explicit };

/// Largest explicit time step that keeps every cell update positive.
double explicit_dt_limit(const FpGrid& grid);

/// One time step of the Chang-Cooper exponential-fitting discretization.
/// Implicit stepping (backward Euler + tridiagonal solve) is unconditionally
/// positive; explicit stepping rejects a dt above the positivity limit.
/// Mass is conserved to rounding by construction (telescoping fluxes).
FpGrid fp_step(const FpGrid& grid, double dt, TimeStepping stepping = TimeStepping::Implicit);

struct SteadyOptions {
  double dt = 0.1;
  double tol = 1e-9;        // on the L1 change per unit tau
  long max_iters = 200000;
  TimeStepping stepping = TimeStepping::Implicit;
  long history_stride = 1;  // record every k-th residual
};

struct ResidualSample {
  long iter;
  double tau;
  double residual;
};

struct SteadyResult {
  FpGrid grid;
  std::vector<ResidualSample> history;
  bool converged = false;
  long iterations = 0;
  double max_mass_drift = 0.0;  // max per-step |mass - mass0| / mass0
};

/// Iterates fp_step until the L1 change per unit tau drops below tol.
/// Throws on non-convergence within max_iters.
SteadyResult fp_solve_to_steady(FpGrid grid, const SteadyOptions& options = {});

/// Masses the analytic equilibrium assigns to each grid cell (CDF
/// differences; not renormalized).
std::vector<double> analytic_cell_masses(const ParetoStationary& ps, const FpGrid& grid);

/// L1 distance between the grid density and the analytic equilibrium,
/// i.e. the sum of |cell mass - analytic cell mass|.
double l1_vs_stationary(const FpGrid& grid, const ParetoStationary& ps,
                        bool renormalized = false);

}  // namespace kinex::fp
