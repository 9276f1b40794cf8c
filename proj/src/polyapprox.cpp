#include "fracdense/polyapprox.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "fracdense/errors.hpp"
#include "fracdense/finite_difference.hpp"

namespace fracdense {

namespace {

// Largest natural log we allow for a coefficient before declaring overflow.
constexpr double kLogOverflow = 690.0;
// Tail terms below exp(kLogNegligible) are dropped.
constexpr double kLogNegligible = -45.0;

double log_sum_exp(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(std::min(a, b) - m));
}

double log_tail_term(double eta, int j) {
  return j * std::log(9.0) - std::lgamma(j + 1.0) - j * std::log(eta);
}

void check_eta(double eta) {
  if (!(eta > 0.0) || !(eta <= 1.0) || !std::isfinite(eta)) {
    std::ostringstream msg;
    msg << "eta must lie in (0, 1], got " << eta;
    throw BadEta(msg.str());
  }
}

}  // namespace

Polynomial::Polynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
  for (double c : coeffs_) {
    if (!std::isfinite(c)) throw NonFinite("polynomial coefficient is not finite");
  }
  while (!coeffs_.empty() && coeffs_.back() == 0.0) coeffs_.pop_back();
}

double Polynomial::coefficient(int i) const {
  if (i < 0 || i >= static_cast<int>(coeffs_.size())) return 0.0;
  return coeffs_[static_cast<std::size_t>(i)];
}

std::vector<std::pair<MultiIndex, double>> Polynomial::monomials() const {
  std::vector<std::pair<MultiIndex, double>> out;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (coeffs_[i] != 0.0) out.emplace_back(MultiIndex::scalar(static_cast<int>(i)), coeffs_[i]);
  }
  return out;
}

double Polynomial::operator()(double x) const {
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

Polynomial Polynomial::derivative(int order) const {
  if (order < 0) throw InputError("derivative order must be >= 0");
  std::vector<double> c = coeffs_;
  for (int d = 0; d < order && !c.empty(); ++d) {
    std::vector<double> next(c.size() - 1);
    for (std::size_t i = 1; i < c.size(); ++i) next[i - 1] = c[i] * static_cast<double>(i);
    c = std::move(next);
  }
  return Polynomial(std::move(c));
}

Polynomial Polynomial::scaled(double factor) const {
  std::vector<double> c = coeffs_;
  for (double& v : c) v *= factor;
  return Polynomial(std::move(c));
}

double log_strengthened_tail(double eta, int truncation) {
  check_eta(eta);
  if (truncation < 0) throw InputError("truncation index must be >= 0");
  double acc = -std::numeric_limits<double>::infinity();
  // Terms increase until j ~ 9/eta and then decay faster than geometrically.
  const int peak = static_cast<int>(std::ceil(9.0 / eta));
  for (int j = truncation + 1;; ++j) {
    const double t = log_tail_term(eta, j);
    acc = log_sum_exp(acc, t);
    if (j > peak && t < acc - 40.0) break;
  }
  return acc;
}

int truncation_for(double eta) {
  check_eta(eta);
  const double target = -1.0 / std::sqrt(eta);
  // Walk the suffix sums from far out back to 0 so the search is one pass.
  const int peak = static_cast<int>(std::ceil(9.0 / eta));
  int far = peak;
  while (!(far > peak && log_tail_term(eta, far) < target - 60.0)) far += 16;
  std::vector<double> suffix(static_cast<std::size_t>(far) + 2,
                             -std::numeric_limits<double>::infinity());
  for (int j = far; j >= 1; --j) {
    suffix[static_cast<std::size_t>(j)] =
        log_sum_exp(suffix[static_cast<std::size_t>(j) + 1], log_tail_term(eta, j));
  }
  for (int J = 0; J < far; ++J) {
    if (suffix[static_cast<std::size_t>(J) + 1] <= target) return J;
  }
  return far;
}

double gauss_tail_radius(double epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw InputError("gauss_tail_radius: epsilon must be positive");
  }
  const double root_pi = std::sqrt(std::numbers::pi);
  if (root_pi * std::erfc(0.0) <= epsilon) return 0.0;
  double lo = 0.0;
  double hi = 1.0;
  while (root_pi * std::erfc(hi) > epsilon) hi *= 2.0;
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    (root_pi * std::erfc(mid) > epsilon ? lo : hi) = mid;
  }
  return hi;
}

MollifierPlan choose_plan(double epsilon, int k, double eta) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw InputError("epsilon must be positive");
  }
  if (k < 0) throw InputError("k must be >= 0");
  check_eta(eta);
  MollifierPlan plan;
  plan.eta = eta;
  plan.k = k;
  plan.epsilon = epsilon;
  plan.truncation = truncation_for(eta);
  plan.gauss_radius = gauss_tail_radius(epsilon);
  return plan;
}

Polynomial mollifier_polynomial(const MollifierPlan& plan) {
  check_eta(plan.eta);
  const double log_norm = -0.5 * std::log(std::numbers::pi * plan.eta);
  std::vector<double> c(2 * static_cast<std::size_t>(plan.truncation) + 1, 0.0);
  for (int j = 0; j <= plan.truncation; ++j) {
    const double lg = log_norm - std::lgamma(j + 1.0) - j * std::log(plan.eta);
    if (lg > kLogOverflow) throw OverflowRisk("mollifier coefficient overflows double");
    c[2 * static_cast<std::size_t>(j)] = (j % 2 == 0 ? 1.0 : -1.0) * std::exp(lg);
  }
  return Polynomial(std::move(c));
}

Polynomial convolve_to_polynomial(const RealFn& f, const MollifierPlan& plan,
                                  const QuadSettings& quad) {
  check_eta(plan.eta);
  quad.validate();
  const int J = plan.truncation;
  const std::size_t dim = 2 * static_cast<std::size_t>(J) + 1;
  const double eta = plan.eta;
  const double root_eta = std::sqrt(eta);
  const double norm = 1.0 / std::sqrt(std::numbers::pi * eta);
  const double log_eta = std::log(eta);

  // lgamma tables shared by every integrand call.
  const int jmax_hint = J + 1;
  std::vector<double> lfact(4 * static_cast<std::size_t>(jmax_hint) + 64);
  for (std::size_t m = 0; m < lfact.size(); ++m) lfact[m] = std::lgamma(static_cast<double>(m) + 1.0);
  auto lf = [&](int m) {
    if (m < static_cast<int>(lfact.size())) return lfact[static_cast<std::size_t>(m)];
    return std::lgamma(m + 1.0);
  };

  const VectorFn integrand = [&](double y, std::span<double> out) {
    const double fy = f(y);
    if (!std::isfinite(fy)) throw NonFinite("target is not finite at a quadrature node");
    if (fy == 0.0) {
      std::fill(out.begin(), out.end(), 0.0);
      return;
    }
    // Taylor coefficients of G(. - y) at 0, via the Hermite recurrence.
    const double T = y / root_eta;
    const double e0 = std::exp(-T * T);
    double prev = e0;
    out[0] = e0;
    if (dim > 1) out[1] = 2.0 * T * e0 / root_eta;
    for (std::size_t i = 1; i + 1 < dim; ++i) {
      const double ip1 = static_cast<double>(i + 1);
      const double next = 2.0 * T * out[i] / (ip1 * root_eta) - 2.0 * prev / (ip1 * eta);
      prev = out[i];
      out[i + 1] = next;
    }
    // Subtract the discarded terms j > J of the series.
    const double ay = std::abs(y);
    const double log_ay = ay > 0.0 ? std::log(ay) : -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < dim; ++i) {
      const int ii = static_cast<int>(i);
      double tail = 0.0;
      double prev_lg = std::numeric_limits<double>::infinity();
      for (int j = std::max(J + 1, (ii + 1) / 2);; ++j) {
        const int pw = 2 * j - ii;
        double lg = lf(2 * j) - lf(ii) - lf(pw) - lf(j) - j * log_eta;
        if (pw > 0) lg += pw * log_ay;
        if (pw > 0 && ay == 0.0) break;
        double term = std::exp(lg);
        if (((j + ii) % 2) != 0) term = -term;
        if (y < 0.0 && (pw % 2) != 0) term = -term;
        tail += term;
        // Successive-term ratios decrease in j, so once the terms fall they
        // keep falling.
        if (lg < kLogNegligible && lg < prev_lg) break;
        prev_lg = lg;
      }
      out[i] = fy * norm * (out[i] - tail);
    }
  };

  const double half = 2.0;
  std::vector<double> p = integrate_vector(integrand, dim, -half, half, quad);
  for (double v : p) {
    if (!std::isfinite(v)) throw NonFinite("convolution coefficient is not finite");
  }
  return Polynomial(std::move(p));
}

double target_cutoff(double x, double mu) {
  if (!(mu > 0.0)) throw InputError("cutoff margin mu must be positive");
  const double inner = 1.0 + 0.5 * mu;
  const double outer = std::min(1.0 + mu, 2.0);
  const double ax = std::abs(x);
  if (ax <= inner) return 1.0;
  if (ax >= outer) return 0.0;
  const double t = (outer - ax) / (outer - inner);
  const double a = std::exp(-1.0 / t);
  const double b = std::exp(-1.0 / (1.0 - t));
  return a / (a + b);
}

WeierstrassResult weierstrass_approx(const Target& target, int k, double epsilon,
                                     const QuadSettings& quad, int max_halvings) {
  if (!target.f) throw InputError("target function is empty");
  if (!(target.mu > 0.0)) throw InputError("target margin mu must be positive");
  if (k < 0) throw InputError("k must be >= 0");
  if (!(epsilon > 0.0)) throw InputError("epsilon must be positive");
  const double mu = target.mu;
  const RealFn cut = [&](double y) {
    const double c = target_cutoff(y, mu);
    return c == 0.0 ? 0.0 : c * target.f(y);
  };
  double best = std::numeric_limits<double>::infinity();
  double eta = 0.5;
  for (int it = 0; it <= max_halvings; ++it, eta *= 0.5) {
    const MollifierPlan plan = choose_plan(epsilon, k, eta);
    Polynomial p = convolve_to_polynomial(cut, plan, quad);
    const RealFn pf = [&p](double x) { return p(x); };
    const double err = ck_error(pf, target.f, k);
    best = std::min(best, err);
    if (err <= epsilon) {
      // Drop high monomials whose C^k(B_1) contribution is negligible.
      std::vector<double> c = p.coefficients();
      double dropped = 0.0;
      while (!c.empty()) {
        const double i = static_cast<double>(c.size() - 1);
        const double weight = std::abs(c.back()) * std::pow(std::max(i, 1.0), k);
        if (dropped + weight > 1e-3 * epsilon) break;
        dropped += weight;
        c.pop_back();
      }
      Polynomial trimmed(std::move(c));
      const RealFn tf = [&trimmed](double x) { return trimmed(x); };
      WeierstrassResult r{trimmed, plan, ck_error(tf, target.f, k), it + 1};
      return r;
    }
  }
  std::ostringstream msg;
  msg << "polynomial approximation did not reach " << epsilon << " in C^" << k
      << " (best " << best << ")";
  throw NonConvergence(msg.str());
}

}  // namespace fracdense
