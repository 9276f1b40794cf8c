#pragma once

// Constructive Stone-Weierstrass: a C^k target on [-1, 1] is cut off to a
// compactly supported function and convolved with the truncated Taylor series
// Q of the heat kernel G(x) = (pi eta)^-1/2 exp(-x^2/eta), which yields an
// explicit polynomial P = f * Q.

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "fracdense/multi_index.hpp"
#include "fracdense/quadrature.hpp"

namespace fracdense {

/// Dense one-variable polynomial sum_i c_i x^i. Trailing zeros are trimmed.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<double> coeffs);

  [[nodiscard]] int dimension() const { return 1; }
  /// -1 for the zero polynomial.
  [[nodiscard]] int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  [[nodiscard]] double coefficient(int i) const;
  [[nodiscard]] const std::vector<double>& coefficients() const { return coeffs_; }
  /// Nonzero terms as (alpha, c_alpha).
  [[nodiscard]] std::vector<std::pair<MultiIndex, double>> monomials() const;

  [[nodiscard]] double operator()(double x) const;
  [[nodiscard]] Polynomial derivative(int order = 1) const;
  [[nodiscard]] Polynomial scaled(double factor) const;
  [[nodiscard]] bool is_zero() const { return coeffs_.empty(); }

 private:
  std::vector<double> coeffs_;
};

struct MollifierPlan {
  double eta = 0.5;
  /// Truncation index J: Q keeps the powers |x|^(2j), j <= J.
  int truncation = 0;
  int k = 0;
  /// Radius with int_{|z| > R} exp(-z^2) dz <= epsilon.
  double gauss_radius = 0.0;
  double epsilon = 0.0;
};

/// Natural log of sum_{j > J} 9^j / (j! eta^j).
double log_strengthened_tail(double eta, int truncation);

/// Smallest J with sum_{j>J} 9^j/(j! eta^j) <= exp(-1/sqrt(eta)); the 9^j
/// factor bounds |x|^(2j) on B_3 so the estimate |G - Q| <= exp(-1/sqrt(eta))
/// holds on all of B_3.
int truncation_for(double eta);

/// Smallest R (to 1e-12) with sqrt(pi) erfc(R) <= epsilon.
double gauss_tail_radius(double epsilon);

/// Plan for tolerance epsilon and smoothness k at the given eta. Callers
/// shrink eta (halving) until the measured error passes.
MollifierPlan choose_plan(double epsilon, int k, double eta = 0.5);

/// Q(x) = (pi eta)^-1/2 sum_{j<=J} (-1)^j x^(2j) / (j! eta^j).
/// Throws OverflowRisk if a coefficient leaves the double range.
Polynomial mollifier_polynomial(const MollifierPlan& plan);

/// P(x) = int f(y) Q(x - y) dy for f supported in [-2, 2]. Coefficient i is
/// int f(y) q_i(y) dy, where q_i(y) is the i-th Taylor coefficient of
/// Q(. - y); q_i is evaluated as the heat kernel's Hermite coefficient minus
/// the discarded tail of the series, which avoids the cancellation of the
/// term-by-term moment expansion.
Polynomial convolve_to_polynomial(const RealFn& f, const MollifierPlan& plan,
                                  const QuadSettings& quad = {});

/// A target given on [-1 - mu, 1 + mu].
struct Target {
  RealFn f;
  double mu = 0.25;
  std::string name = "custom";
};

/// Smooth cutoff equal to 1 on |x| <= 1 + mu/2 and 0 for |x| >= min(1 + mu, 2).
double target_cutoff(double x, double mu);

struct WeierstrassResult {
  Polynomial polynomial;
  MollifierPlan plan;
  /// Measured discrete C^k distance on [-1, 1].
  double error = 0.0;
  int iterations = 0;
};

/// Halves eta from 1/2 until ||f - P||_{C^k(B_1)} <= epsilon, measured with
/// ck_error. Throws NonConvergence after `max_halvings` halvings.
WeierstrassResult weierstrass_approx(const Target& target, int k, double epsilon,
                                     const QuadSettings& quad = {}, int max_halvings = 6);

}  // namespace fracdense
