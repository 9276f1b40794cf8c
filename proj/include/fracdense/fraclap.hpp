#pragma once

// Direct evaluation of the fractional Laplacian as a singular integral, used
// as an independent check that synthesized functions are s-harmonic.
//
// On the line we evaluate
//
//   L u(x) = int_0^inf (2u(x) - u(x+y) - u(x-y)) y^(-1-2s) dy,
//
// half of the full-line integral (both are the operator up to a constant),
// split into a near field [0, h], a mid field [h, Y] and an exact tail.

#include <span>
#include <vector>

#include "fracdense/kernel_extension.hpp"
#include "fracdense/quadrature.hpp"

namespace fracdense {

struct FracLapSettings {
  /// Near-field radius.
  double h = 1e-3;
  /// Outer cutoff; <= 0 selects support_radius + |x| + 1.
  double cutoff = 0.0;
  QuadSettings quad{};
  /// Known non-smooth points of u; the mid-field integral is split there.
  std::vector<double> breakpoints{};
};

/// Evaluates L u(x) for u vanishing at distance >= `cutoff` from x. The near
/// field uses the even Taylor expansion of the symmetric difference, with
/// u'' and u'''' from high-order central differences; the mid field is
/// adaptive quadrature; the tail is 2u(x) Y^(-2s)/(2s).
/// Throws SupportError if u is visibly nonzero beyond the cutoff.
double frac_laplacian(const RealFn& u, double x, const FracParams& params, double h, double cutoff,
                      const QuadSettings& quad, std::span<const double> breakpoints = {});

/// Convenience overload reading h/cutoff/quad/breakpoints from settings; a
/// nonpositive cutoff is replaced by support_radius + |x| + 1.
double frac_laplacian(const RealFn& u, double x, const FracParams& params, double support_radius,
                      const FracLapSettings& settings);

struct ResidualPoint {
  double x;
  double residual;
};

struct ResidualReport {
  std::vector<ResidualPoint> points;
  double max_abs_residual = 0.0;
  /// max |u| over the certification ball.
  double scale = 0.0;
  /// max_abs_residual / scale (0 when u vanishes identically).
  double relative_max = 0.0;
};

/// Residuals of a generic compactly supported u at the grid points, all of
/// which must lie in the open ball `region`.
ResidualReport residual_report(const RealFn& u, double support_radius, const Ball& region,
                               std::span<const double> grid, const FracParams& params,
                               const FracLapSettings& settings = {});

/// Residuals of an extension on a grid inside B_{0.9 r}(p); the function's own
/// breakpoints are added to the settings.
ResidualReport residual_report(const SHarmonicFn& fn, std::span<const double> grid,
                               const FracParams& params, const FracLapSettings& settings = {});

/// `count` equispaced points strictly inside (c - a, c + a), endpoints excluded.
std::vector<double> uniform_interior_grid(double center, double half_width, int count);

}  // namespace fracdense
