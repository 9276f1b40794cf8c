#include "fracdense/kernel_extension.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "fracdense/errors.hpp"
#include "fracdense/jet.hpp"

namespace fracdense {

void FracParams::validate() const {
  if (!(s > 0.0 && s < 1.0)) {
    throw BadExponent("fractional order s must lie strictly inside (0, 1), got " + std::to_string(s));
  }
  if (n < 1) throw InputError("dimension n must be >= 1");
}

void FracParams::require_line() const {
  validate();
  if (n != 1) throw InputError("only n = 1 is supported by the evaluation routines");
}

void Ball::validate() const {
  if (!(radius > 0.0) || !std::isfinite(radius) || !std::isfinite(center)) {
    throw GeometryError("ball radius must be positive and finite");
  }
}

bool Ball::contains(double x) const { return std::abs(x - center) < radius; }

double Ball::distance_to_boundary(double x) const { return radius - std::abs(x - center); }

double bump_profile(double t) {
  if (!(std::abs(t) < 1.0)) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - t * t));
}

double Bump::operator()(double y) const {
  return amplitude * bump_profile((y - center) / half_width);
}

ExteriorData::ExteriorData(std::vector<Bump> bumps) : bumps_(std::move(bumps)) {
  for (const Bump& b : bumps_) {
    if (!(b.half_width > 0.0) || !std::isfinite(b.center) || !std::isfinite(b.amplitude)) {
      throw InputError("bump needs a positive half_width and finite center/amplitude");
    }
  }
}

double ExteriorData::operator()(double y) const {
  double acc = 0.0;
  for (const Bump& b : bumps_) acc += b(y);
  return acc;
}

double ExteriorData::support_radius(double about) const {
  double r = 0.0;
  for (const Bump& b : bumps_) {
    r = std::max({r, std::abs(b.lower() - about), std::abs(b.upper() - about)});
  }
  return r;
}

ExteriorData ExteriorData::scaled(double factor) const {
  std::vector<Bump> out = bumps_;
  for (Bump& b : out) b.amplitude *= factor;
  return ExteriorData(std::move(out));
}

ExteriorData ExteriorData::combined(const ExteriorData& other) const {
  std::vector<Bump> out = bumps_;
  out.insert(out.end(), other.bumps_.begin(), other.bumps_.end());
  return ExteriorData(std::move(out));
}

SHarmonicFn::SHarmonicFn(FracParams params, Ball ball, ExteriorData exterior, QuadSettings quad)
    : params_(params), ball_(ball), exterior_(std::move(exterior)), quad_(quad) {
  params_.require_line();
  ball_.validate();
  quad_.validate();
  const double lo = ball_.center - ball_.radius;
  const double hi = ball_.center + ball_.radius;
  const double clearance = kClearanceMin * ball_.radius;
  for (const Bump& b : exterior_.bumps()) {
    const bool right = b.lower() >= hi + clearance * (1.0 - 1e-12);
    const bool left = b.upper() <= lo - clearance * (1.0 - 1e-12);
    if (!right && !left) {
      throw GeometryError("bump [" + std::to_string(b.lower()) + ", " + std::to_string(b.upper()) +
                          "] is closer than the clearance " + std::to_string(clearance) +
                          " to the ball");
    }
  }
}

double SHarmonicFn::operator()(double x) const { return extend(*this, x); }

double SHarmonicFn::support_radius() const {
  return std::max(exterior_.support_radius(0.0),
                  std::abs(ball_.center) + ball_.radius);
}

std::vector<double> SHarmonicFn::breakpoints() const {
  std::vector<double> pts{ball_.center - ball_.radius, ball_.center + ball_.radius};
  for (const Bump& b : exterior_.bumps()) {
    pts.push_back(b.lower());
    pts.push_back(b.upper());
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

SHarmonicFn SHarmonicFn::with_quad(const QuadSettings& quad) const {
  return SHarmonicFn(params_, ball_, exterior_, quad);
}

double poisson_constant(const FracParams& params) {
  params.validate();
  const double half_n = 0.5 * params.n;
  return std::tgamma(half_n) * std::sin(std::numbers::pi * params.s) *
         std::pow(std::numbers::pi, -(half_n + 1.0));
}

double poisson_kernel(const FracParams& params, std::span<const double> center, double radius,
                      std::span<const double> x, std::span<const double> y) {
  params.validate();
  const auto n = static_cast<std::size_t>(params.n);
  if (center.size() != n || x.size() != n || y.size() != n) {
    throw InputError("poisson_kernel: point dimensions do not match n");
  }
  double x2 = 0.0;
  double y2 = 0.0;
  double xy2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    x2 += (x[i] - center[i]) * (x[i] - center[i]);
    y2 += (y[i] - center[i]) * (y[i] - center[i]);
    xy2 += (x[i] - y[i]) * (x[i] - y[i]);
  }
  const double r2 = radius * radius;
  if (!(x2 < r2)) throw GeometryError("poisson_kernel: x must lie inside the open ball");
  if (!(y2 > r2)) throw GeometryError("poisson_kernel: y must lie outside the closed ball");
  return poisson_constant(params) * std::pow((r2 - x2) / (y2 - r2), params.s) *
         std::pow(xy2, -0.5 * params.n);
}

double poisson_kernel(const FracParams& params, const Ball& ball, double x, double y) {
  const double p[1] = {ball.center};
  const double xs[1] = {x};
  const double ys[1] = {y};
  return poisson_kernel(params, p, ball.radius, xs, ys);
}

double kernel_mass(const FracParams& params, const Ball& ball, double x, const QuadSettings& quad) {
  params.require_line();
  ball.validate();
  if (!ball.contains(x)) throw GeometryError("kernel_mass: x must lie inside the ball");
  const double s = params.s;
  const double r = ball.radius;
  const double d = x - ball.center;
  // Both exterior half-lines in the radial variable rho = |y - p| > r.
  const auto both_sides = [d](double rho) { return 1.0 / (rho - d) + 1.0 / (rho + d); };
  // (rho - r)^-s is singular at rho = r; the rest is smooth on [r, 2r].
  const RealFn near = [&](double rho) { return std::pow(rho + r, -s) * both_sides(rho); };
  const double near_part = integrate_endpoint_singular(near, r, 2.0 * r, s, quad);
  // On [2r, inf) substitute t = (2r/rho)^(2s), which maps rho^(-1-2s) drho to a
  // constant multiple of dt.
  const RealFn far = [&](double t) {
    const double rho = 2.0 * r * std::pow(t, -0.5 / s);
    return std::pow(rho, 1.0 + 2.0 * s) * std::pow(rho * rho - r * r, -s) * both_sides(rho);
  };
  const double far_part = std::pow(2.0 * r, -2.0 * s) / (2.0 * s) * integrate(far, 0.0, 1.0, quad);
  return poisson_constant(params) * std::pow(r * r - d * d, s) * (near_part + far_part);
}

namespace {

// int over the bump of profile(y) (|y-p|^2 - r^2)^-s * weight(y), in the
// bump's own coordinate t = (y - center) / half_width.
double bump_integral(const SHarmonicFn& fn, const Bump& b, const auto& weight) {
  const double p = fn.ball().center;
  const double r2 = fn.ball().radius * fn.ball().radius;
  const double s = fn.params().s;
  const RealFn integrand = [&](double t) {
    const double y = b.center + b.half_width * t;
    const double prof = bump_profile(t);
    if (prof == 0.0) return 0.0;
    return prof * std::pow((y - p) * (y - p) - r2, -s) * weight(y);
  };
  return b.amplitude * b.half_width * integrate(integrand, -1.0, 1.0, fn.quad());
}

}  // namespace

double extend(const SHarmonicFn& fn, double x) {
  const Ball& ball = fn.ball();
  if (!ball.contains(x)) return fn.exterior()(x);
  const double d = x - ball.center;
  const double r2 = ball.radius * ball.radius;
  double acc = 0.0;
  for (const Bump& b : fn.exterior().bumps()) {
    acc += bump_integral(fn, b, [x](double y) { return 1.0 / std::abs(x - y); });
  }
  return poisson_constant(fn.params()) * std::pow(r2 - d * d, fn.params().s) * acc;
}

DerivativeVector extend_derivatives(const SHarmonicFn& fn, double x, int order) {
  if (order < 0 || order > kMaxDerivativeOrder) {
    throw OrderTooHigh("derivative order must lie in [0, " + std::to_string(kMaxDerivativeOrder) +
                       "], got " + std::to_string(order));
  }
  const Ball& ball = fn.ball();
  if (!(ball.distance_to_boundary(x) >= 1e-3 * ball.radius)) {
    throw TooCloseToBoundary("extend_derivatives: x = " + std::to_string(x) +
                             " is within 1e-3 r of the boundary");
  }
  const auto deg = static_cast<std::size_t>(order);
  const double d = x - ball.center;
  const double r2 = ball.radius * ball.radius;

  // Taylor coefficients in t of |x + t - y|^-1: sign(y - x)^k / |x - y|^(k+1).
  Jet kernel_part(deg);
  for (const Bump& b : fn.exterior().bumps()) {
    for (std::size_t k = 0; k <= deg; ++k) {
      kernel_part[k] += bump_integral(fn, b, [x, k](double y) {
        const double dist = std::abs(x - y);
        const double sign = (y > x || k % 2 == 0) ? 1.0 : -1.0;
        return sign * std::pow(dist, -static_cast<double>(k + 1));
      });
    }
  }
  // (r^2 - (d + t)^2)^s.
  Jet base(deg, r2 - d * d);
  if (deg >= 1) base[1] = -2.0 * d;
  if (deg >= 2) base[2] = -1.0;
  const Jet u = poisson_constant(fn.params()) * (pow(base, fn.params().s) * kernel_part);

  std::vector<double> values(deg + 1);
  for (std::size_t k = 0; k <= deg; ++k) values[k] = u.derivative(k);
  return DerivativeVector(order, std::move(values));
}

SHarmonicFn rescale(const SHarmonicFn& fn, double eta, double shift, double amplitude) {
  if (!(eta > 0.0) || !std::isfinite(eta)) throw BadEta("rescale: eta must be positive");
  // The new function at x reads fn at eta x + shift, so a point z of the old
  // picture sits at (z - shift) / eta.
  const auto image = [&](double z) { return (z - shift) / eta; };
  Ball ball{image(fn.ball().center), fn.ball().radius / eta};
  std::vector<Bump> bumps;
  bumps.reserve(fn.exterior().bumps().size());
  for (const Bump& b : fn.exterior().bumps()) {
    bumps.push_back(Bump{image(b.center), b.half_width / eta, b.amplitude * amplitude});
  }
  return SHarmonicFn(fn.params(), ball, ExteriorData(std::move(bumps)), fn.quad());
}

SHarmonicFn transform(const SHarmonicFn& fn, double eta, double p, int power) {
  if (!(eta > 0.0 && eta <= 1.0)) throw BadEta("transform: eta must lie in (0, 1]");
  if (power < 0) throw InputError("transform: power must be >= 0");
  return rescale(fn, eta, p, std::pow(eta, -static_cast<double>(power)));
}

}  // namespace fracdense
