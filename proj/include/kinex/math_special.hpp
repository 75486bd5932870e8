// Copyright 2026 The kinex Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

namespace kinex {

/// Regularized lower incomplete gamma P(a, x), a > 0, x >= 0.
/// Series expansion for x < a + 1, continued fraction otherwise.
double regularized_gamma_p(double a, double x);

/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x).
double regularized_gamma_q(double a, double x);

}  // namespace kinex
