#pragma once

#include <vector>

#include "fracdense/quadrature.hpp"

namespace fracdense {

/// Weights of the central difference for the `derivative`-th derivative on the
/// stencil {-m, ..., m} (unit spacing) with the given even accuracy order
/// (Fornberg's algorithm).
std::vector<double> central_weights(int derivative, int accuracy);

/// Central finite-difference derivative of f at x with step h.
double central_derivative(const RealFn& f, double x, int derivative, double h,
                          int accuracy = 6);

/// Half-width, in steps, of the stencil used by central_derivative.
int central_stencil_radius(int derivative, int accuracy);

struct CkErrorOptions {
  /// Uniform grid on [-1, 1] with this many points.
  int grid_points = 101;
  /// Finite-difference step; <= 0 ties it to the grid spacing.
  double step = 0.0;
  int accuracy = 6;
};

/// Discrete C^k distance: max over orders 0..k and grid points in [-1, 1] of
/// |D^gamma (u - f)|, with central differences for gamma >= 1. Both functions
/// are evaluated on [-1 - delta, 1 + delta], delta being the stencil width.
double ck_error(const RealFn& u, const RealFn& f, int k, const CkErrorOptions& options = {});

/// Per-order maxima of the same quantity (entry gamma is the order-gamma max).
std::vector<double> ck_error_by_order(const RealFn& u, const RealFn& f, int k,
                                      const CkErrorOptions& options = {});

}  // namespace fracdense
