#pragma once

// Adaptive one-dimensional quadrature.
//
// Every integral in the library goes through `integrate`: a globally adaptive
// Gauss-Kronrod scheme that always bisects the panel with the largest error
// estimate. `integrate_endpoint_singular` handles an integrable (t - a)^-sigma
// weight by the power substitution t = a + tau^(1/(1-sigma)).

#include <functional>
#include <span>
#include <vector>

namespace fracdense {

struct QuadSettings {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  int max_subdivisions = 2000;
  /// Number of Kronrod points per panel: one of 15, 21, 31, 41, 51, 61.
  int base_rule_order = 15;

  /// Throws InputError when the invariants do not hold.
  void validate() const;

  /// Copy with both tolerances multiplied by `factor`.
  [[nodiscard]] QuadSettings scaled(double factor) const;
};

using RealFn = std::function<double(double)>;

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  int subdivisions = 0;
};

/// Adaptive integral of `f` over [a, b]. Throws NonConvergence when the
/// subdivision budget runs out and NonFinite when `f` returns inf or NaN.
QuadResult integrate_detailed(const RealFn& f, double a, double b,
                              const QuadSettings& settings = {});

double integrate(const RealFn& f, double a, double b,
                 const QuadSettings& settings = {});

/// Integral over [a, b] split at the given interior breakpoints. Breakpoints
/// outside (a, b) are ignored. The tolerance is shared by all pieces.
double integrate_with_breaks(const RealFn& f, double a, double b,
                             std::span<const double> breaks,
                             const QuadSettings& settings = {});

using VectorFn = std::function<void(double, std::span<double>)>;

/// Componentwise adaptive integral of a vector-valued integrand of the given
/// dimension. The panel error is the largest componentwise Kronrod-Gauss gap;
/// tolerances apply to the largest component.
std::vector<double> integrate_vector(const VectorFn& f, std::size_t dim, double a, double b,
                                     const QuadSettings& settings = {});

/// Computes the weighted integral of (t - a)^(-sigma) f(t) over [a, b] for
/// smooth f and 0 < sigma < 1.
double integrate_endpoint_singular(const RealFn& f, double a, double b,
                                   double sigma,
                                   const QuadSettings& settings = {});

}  // namespace fracdense
