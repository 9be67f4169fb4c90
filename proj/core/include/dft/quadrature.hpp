#pragma once

/// @file quadrature.hpp
/// Adaptive Simpson quadrature with a Richardson-extrapolated error estimate.

#include <functional>

namespace dft {

struct QuadResult {
  double value = 0.0;
  /// Sum of per-panel |S2 - S1| / 15 estimates; <= the requested tolerance.
  double error = 0.0;
};

/// Integrates f over [a, b] to absolute tolerance `tol`. The range is first
/// split into eight panels, each refined by bisection. Throws
/// QuadratureFailure when a panel still misses its tolerance share at
/// `max_depth`.
QuadResult integrate(const std::function<double(double)>& f, double a,
                     double b, double tol, int max_depth);

}  // namespace dft
