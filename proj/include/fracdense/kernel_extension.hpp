#pragma once

// Fractional Poisson kernel for the ball and the s-harmonic extension of
// bump-sum exterior data.
//
// For data g supported outside B_r(p), the unique function that is
// s-harmonic in B_r(p) and equals g outside is
//
//   u(x) = c(n,s) * int_{|y-p|>r} ((r^2-|x-p|^2)/(|y-p|^2-r^2))^s |x-y|^-n g(y) dy,
//   c(n,s) = Gamma(n/2) sin(pi s) pi^-(n/2+1).
//
// The kernel formula is implemented for every n; evaluation of extensions is
// one-dimensional.

#include <span>
#include <vector>

#include "fracdense/multi_index.hpp"
#include "fracdense/quadrature.hpp"

namespace fracdense {

/// Fractional order s in (0, 1) and ambient dimension n.
struct FracParams {
  double s = 0.5;
  int n = 1;

  void validate() const;
  /// validate() plus n == 1, required by every evaluation routine.
  void require_line() const;
};

/// Ball B_r(p) on the line.
struct Ball {
  double center = 0.0;
  double radius = 1.0;

  void validate() const;
  [[nodiscard]] bool contains(double x) const;
  [[nodiscard]] double distance_to_boundary(double x) const;
};

/// Minimal clearance between bump supports and the closed ball, relative to r.
inline constexpr double kClearanceMin = 0.05;

/// Standard mollifier exp(1 - 1/(1 - t^2)) on |t| < 1, zero elsewhere.
double bump_profile(double t);

struct Bump {
  double center = 2.5;
  double half_width = 0.5;
  double amplitude = 1.0;

  [[nodiscard]] double operator()(double y) const;
  [[nodiscard]] double lower() const { return center - half_width; }
  [[nodiscard]] double upper() const { return center + half_width; }
};

/// Finite sum of bumps, the exterior data g.
class ExteriorData {
 public:
  ExteriorData() = default;
  explicit ExteriorData(std::vector<Bump> bumps);

  [[nodiscard]] const std::vector<Bump>& bumps() const { return bumps_; }
  [[nodiscard]] bool empty() const { return bumps_.empty(); }
  [[nodiscard]] double operator()(double y) const;
  /// Smallest R with every bump support inside the closed ball B_R(about).
  [[nodiscard]] double support_radius(double about = 0.0) const;

  /// Every bump amplitude multiplied by `factor`.
  [[nodiscard]] ExteriorData scaled(double factor) const;
  /// Concatenation of two bump lists (the data add pointwise).
  [[nodiscard]] ExteriorData combined(const ExteriorData& other) const;

 private:
  std::vector<Bump> bumps_;
};

/// The s-harmonic extension of exterior data into a ball. Immutable.
class SHarmonicFn {
 public:
  /// Throws GeometryError when a bump violates the clearance rule.
  SHarmonicFn(FracParams params, Ball ball, ExteriorData exterior, QuadSettings quad = {});

  [[nodiscard]] const FracParams& params() const { return params_; }
  [[nodiscard]] const Ball& ball() const { return ball_; }
  [[nodiscard]] const ExteriorData& exterior() const { return exterior_; }
  [[nodiscard]] const QuadSettings& quad() const { return quad_; }

  [[nodiscard]] double operator()(double x) const;
  /// Radius about the origin outside of which the function vanishes.
  [[nodiscard]] double support_radius() const;
  /// Points where the function is not smooth: ball boundary and bump edges.
  [[nodiscard]] std::vector<double> breakpoints() const;
  [[nodiscard]] SHarmonicFn with_quad(const QuadSettings& quad) const;

 private:
  FracParams params_;
  Ball ball_;
  ExteriorData exterior_;
  QuadSettings quad_;
};

/// c(n, s) = Gamma(n/2) sin(pi s) pi^-(n/2 + 1).
double poisson_constant(const FracParams& params);

/// Kernel for the ball B_r(p) in R^n. Throws GeometryError unless x is inside
/// the open ball and y outside the closed ball.
double poisson_kernel(const FracParams& params, std::span<const double> center, double radius,
                      std::span<const double> x, std::span<const double> y);
double poisson_kernel(const FracParams& params, const Ball& ball, double x, double y);

/// Total mass of the kernel at x; equals 1 because constants are s-harmonic.
double kernel_mass(const FracParams& params, const Ball& ball, double x,
                   const QuadSettings& quad = {});

/// Value of the extension anywhere on the line.
double extend(const SHarmonicFn& fn, double x);

inline constexpr int kMaxDerivativeOrder = 8;

/// Derivatives of orders 0..order at an interior point, obtained by
/// differentiating the kernel under the integral sign with Taylor jets.
/// Throws TooCloseToBoundary within 1e-3 r of the boundary, OrderTooHigh
/// beyond order 8.
DerivativeVector extend_derivatives(const SHarmonicFn& fn, double x, int order);

/// x -> amplitude * fn(eta x + shift), represented exactly on the image ball.
/// Requires eta > 0.
SHarmonicFn rescale(const SHarmonicFn& fn, double eta, double shift, double amplitude);

/// x -> eta^-power fn(eta x + p). Throws BadEta unless 0 < eta <= 1.
SHarmonicFn transform(const SHarmonicFn& fn, double eta, double p, int power);

}  // namespace fracdense
