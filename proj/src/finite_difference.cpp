#include "fracdense/finite_difference.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fracdense/errors.hpp"

namespace fracdense {
namespace {

// Fornberg (1988): weights for derivatives 0..m at x0 from nodes x.
std::vector<std::vector<double>> fornberg(double x0, const std::vector<double>& x, int m) {
  const std::size_t n = x.size();
  const auto mm = static_cast<std::size_t>(m);
  std::vector<std::vector<double>> c(n, std::vector<double>(mm + 1, 0.0));
  double c1 = 1.0;
  double c4 = x[0] - x0;
  c[0][0] = 1.0;
  for (std::size_t i = 1; i < n; ++i) {
    const std::size_t mn = std::min(i, mm);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[i] - x0;
    for (std::size_t j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (std::size_t k = mn; k >= 1; --k) {
          c[i][k] = c1 * (static_cast<double>(k) * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        }
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (std::size_t k = mn; k >= 1; --k) {
        c[j][k] = (c4 * c[j][k] - static_cast<double>(k) * c[j][k - 1]) / c3;
      }
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  return c;
}

}  // namespace

int central_stencil_radius(int derivative, int accuracy) {
  return (derivative + 1) / 2 - 1 + accuracy / 2;
}

std::vector<double> central_weights(int derivative, int accuracy) {
  if (derivative < 0) throw InputError("central_weights: derivative must be >= 0");
  if (accuracy < 2 || accuracy % 2 != 0) {
    throw InputError("central_weights: accuracy must be a positive even integer");
  }
  const int radius = central_stencil_radius(derivative, accuracy);
  std::vector<double> nodes;
  for (int i = -radius; i <= radius; ++i) nodes.push_back(static_cast<double>(i));
  const auto c = fornberg(0.0, nodes, derivative);
  std::vector<double> w(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) w[i] = c[i][static_cast<std::size_t>(derivative)];
  return w;
}

double central_derivative(const RealFn& f, double x, int derivative, double h, int accuracy) {
  if (derivative == 0) return f(x);
  if (!(h > 0.0)) throw InputError("central_derivative: step must be positive");
  const std::vector<double> w = central_weights(derivative, accuracy);
  const int radius = static_cast<int>(w.size() / 2);
  double acc = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    const double wi = w[static_cast<std::size_t>(i + radius)];
    if (wi != 0.0) acc += wi * f(x + i * h);
  }
  return acc / std::pow(h, derivative);
}

std::vector<double> ck_error_by_order(const RealFn& u, const RealFn& f, int k,
                                      const CkErrorOptions& options) {
  if (k < 0) throw InputError("ck_error: k must be >= 0");
  if (options.grid_points < 2) throw InputError("ck_error: need at least 2 grid points");
  const double spacing = 2.0 / (options.grid_points - 1);
  const double h = options.step > 0.0 ? options.step : spacing;
  const RealFn diff = [&](double x) { return u(x) - f(x); };
  std::vector<double> out(static_cast<std::size_t>(k + 1), 0.0);
  for (int i = 0; i < options.grid_points; ++i) {
    const double x = i + 1 == options.grid_points ? 1.0 : -1.0 + i * spacing;
    // Share samples between orders by caching the stencil values.
    const int radius = central_stencil_radius(std::max(k, 1), options.accuracy);
    std::vector<double> samples(static_cast<std::size_t>(2 * radius + 1));
    for (int j = -radius; j <= radius; ++j) {
      if (k == 0 && j != 0) continue;
      samples[static_cast<std::size_t>(j + radius)] = diff(x + j * h);
    }
    out[0] = std::max(out[0], std::abs(samples[static_cast<std::size_t>(radius)]));
    for (int g = 1; g <= k; ++g) {
      const std::vector<double> w = central_weights(g, options.accuracy);
      const int r = static_cast<int>(w.size() / 2);
      double acc = 0.0;
      for (int j = -r; j <= r; ++j) {
        acc += w[static_cast<std::size_t>(j + r)] * samples[static_cast<std::size_t>(j + radius)];
      }
      out[static_cast<std::size_t>(g)] =
          std::max(out[static_cast<std::size_t>(g)], std::abs(acc / std::pow(h, g)));
    }
  }
  return out;
}

double ck_error(const RealFn& u, const RealFn& f, int k, const CkErrorOptions& options) {
  const std::vector<double> by_order = ck_error_by_order(u, f, k, options);
  return *std::max_element(by_order.begin(), by_order.end());
}

}  // namespace fracdense
