#include "fracdense/fraclap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "fracdense/errors.hpp"
#include "fracdense/finite_difference.hpp"
#include "fracdense/parallel.hpp"

namespace fracdense {
namespace {

double nearest_break(double x, std::span<const double> breakpoints) {
  double d = std::numeric_limits<double>::infinity();
  for (double b : breakpoints) d = std::min(d, std::abs(b - x));
  return d;
}

void check_support(const RealFn& u, double x, double cutoff) {
  for (int k = 0; k <= 4; ++k) {
    const double y = cutoff * (1.0 + 0.25 * k);
    if (u(x + y) != 0.0 || u(x - y) != 0.0) {
      throw SupportError("frac_laplacian: u does not vanish at distance " + std::to_string(y) +
                         " from x = " + std::to_string(x));
    }
  }
}

ResidualReport report_impl(const RealFn& u, double support_radius, const Ball& region,
                           const Ball& scale_ball, std::span<const double> grid,
                           const FracParams& params, const FracLapSettings& settings) {
  params.require_line();
  for (double x : grid) {
    if (!(std::abs(x - region.center) <= region.radius * (1.0 + 1e-12))) {
      throw GeometryError("residual grid point " + std::to_string(x) +
                          " lies outside the certification region");
    }
  }
  ResidualReport report;
  report.points.resize(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) {
    report.points[i] = ResidualPoint{grid[i], frac_laplacian(u, grid[i], params, support_radius, settings)};
  });
  for (const ResidualPoint& p : report.points) {
    report.max_abs_residual = std::max(report.max_abs_residual, std::abs(p.residual));
  }
  constexpr int kScaleSamples = 201;
  for (int i = 0; i < kScaleSamples; ++i) {
    const double x = scale_ball.center +
                     scale_ball.radius * (-1.0 + 2.0 * i / static_cast<double>(kScaleSamples - 1));
    report.scale = std::max(report.scale, std::abs(u(x)));
  }
  for (double x : grid) report.scale = std::max(report.scale, std::abs(u(x)));
  report.relative_max = report.scale > 0.0 ? report.max_abs_residual / report.scale : 0.0;
  return report;
}

}  // namespace

double frac_laplacian(const RealFn& u, double x, const FracParams& params, double h, double cutoff,
                      const QuadSettings& quad, std::span<const double> breakpoints) {
  params.require_line();
  if (!(h > 0.0 && h < 1.0)) throw InputError("frac_laplacian: h must lie in (0, 1)");
  if (!(cutoff > h)) throw InputError("frac_laplacian: cutoff must exceed h");
  check_support(u, x, cutoff);
  const double s = params.s;
  const double ux = u(x);

  // Near field. The symmetric difference is -2 sum_m u^(2m)(x) y^(2m)/(2m)!,
  // integrated term by term against y^(-1-2s) on [0, h]. Keep h and the
  // difference stencils inside the smooth region around x.
  const double kink = nearest_break(x, breakpoints);
  const double h_eff = std::min(h, 0.25 * kink);
  const double step = std::min(1e-2, kink / 8.0);
  const double u2 = central_derivative(u, x, 2, step, 8);
  const double u4 = central_derivative(u, x, 4, step, 6);
  const double near = -2.0 * (u2 / 2.0 * std::pow(h_eff, 2.0 - 2.0 * s) / (2.0 - 2.0 * s) +
                              u4 / 24.0 * std::pow(h_eff, 4.0 - 2.0 * s) / (4.0 - 2.0 * s));

  // Mid field, split where x +- y crosses a kink of u.
  std::vector<double> breaks;
  for (double b : breakpoints) breaks.push_back(std::abs(b - x));
  const RealFn mid_integrand = [&](double y) {
    return (2.0 * ux - u(x + y) - u(x - y)) * std::pow(y, -1.0 - 2.0 * s);
  };
  const double mid = integrate_with_breaks(mid_integrand, h_eff, cutoff, breaks, quad);

  const double tail = 2.0 * ux * std::pow(cutoff, -2.0 * s) / (2.0 * s);
  return near + mid + tail;
}

double frac_laplacian(const RealFn& u, double x, const FracParams& params, double support_radius,
                      const FracLapSettings& settings) {
  const double cutoff =
      settings.cutoff > 0.0 ? settings.cutoff : support_radius + std::abs(x) + 1.0;
  return frac_laplacian(u, x, params, settings.h, cutoff, settings.quad, settings.breakpoints);
}

ResidualReport residual_report(const RealFn& u, double support_radius, const Ball& region,
                               std::span<const double> grid, const FracParams& params,
                               const FracLapSettings& settings) {
  region.validate();
  return report_impl(u, support_radius, region, region, grid, params, settings);
}

ResidualReport residual_report(const SHarmonicFn& fn, std::span<const double> grid,
                               const FracParams& params, const FracLapSettings& settings) {
  if (params.s != fn.params().s || params.n != fn.params().n) {
    throw InputError("residual_report: parameters differ from those of the function");
  }
  FracLapSettings local = settings;
  const std::vector<double> own = fn.breakpoints();
  local.breakpoints.insert(local.breakpoints.end(), own.begin(), own.end());
  const Ball certification{fn.ball().center, 0.9 * fn.ball().radius};
  const RealFn u = [&fn](double x) { return extend(fn, x); };
  return report_impl(u, fn.support_radius(), certification, fn.ball(), grid, params, local);
}

std::vector<double> uniform_interior_grid(double center, double half_width, int count) {
  if (count < 1) throw InputError("grid needs at least one point");
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    out.push_back(center + half_width * (-1.0 + 2.0 * (i + 1) / static_cast<double>(count + 1)));
  }
  return out;
}

}  // namespace fracdense
