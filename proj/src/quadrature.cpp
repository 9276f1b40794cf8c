#include "fracdense/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <string>
#include <tuple>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "fracdense/errors.hpp"

namespace fracdense {
namespace {

// Kronrod nodes on [0, 1] (the rule is symmetric) with both weight sets. The
// Gauss weight is zero on Kronrod-only nodes.
struct KronrodRule {
  std::vector<double> nodes;
  std::vector<double> kronrod_weights;
  std::vector<double> gauss_weights;
};

template <unsigned N>
KronrodRule make_rule() {
  namespace bq = boost::math::quadrature;
  using gk = bq::gauss_kronrod<double, N>;
  using g = bq::gauss<double, (N - 1) / 2>;
  KronrodRule rule;
  const auto& x = gk::abscissa();
  const auto& wk = gk::weights();
  const auto& wg = g::weights();
  rule.nodes.assign(x.begin(), x.end());
  rule.kronrod_weights.assign(wk.begin(), wk.end());
  rule.gauss_weights.assign(x.size(), 0.0);
  // Same indexing as boost's non-adaptive routine: when the Gauss order is
  // odd, the centre and the even-indexed nodes are Gauss nodes; otherwise the
  // odd-indexed ones are.
  constexpr unsigned gauss_order = (N - 1) / 2;
  if (gauss_order & 1U) {
    rule.gauss_weights[0] = wg[0];
    for (std::size_t i = 2; i < x.size(); i += 2) rule.gauss_weights[i] = wg[i / 2];
  } else {
    for (std::size_t i = 1; i < x.size(); i += 2) rule.gauss_weights[i] = wg[i / 2];
  }
  return rule;
}

const KronrodRule& rule_for(int order) {
  static const KronrodRule r15 = make_rule<15>();
  static const KronrodRule r21 = make_rule<21>();
  static const KronrodRule r31 = make_rule<31>();
  static const KronrodRule r41 = make_rule<41>();
  static const KronrodRule r51 = make_rule<51>();
  static const KronrodRule r61 = make_rule<61>();
  switch (order) {
    case 15: return r15;
    case 21: return r21;
    case 31: return r31;
    case 41: return r41;
    case 51: return r51;
    case 61: return r61;
    default: throw InputError("unsupported base_rule_order " + std::to_string(order));
  }
}

struct Panel {
  double a;
  double b;
  double value;
  double error;
  bool operator<(const Panel& other) const { return error < other.error; }
};

double checked(const RealFn& f, double t) {
  const double v = f(t);
  if (!std::isfinite(v)) {
    throw NonFinite("integrand is not finite at t = " + std::to_string(t));
  }
  return v;
}

Panel apply_rule(const RealFn& f, double a, double b, const KronrodRule& rule) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  const double f0 = checked(f, mid);
  double kronrod = f0 * rule.kronrod_weights[0];
  double gauss = f0 * rule.gauss_weights[0];
  double abs_sum = std::abs(kronrod);
  // Largest supported rule has 61 points.
  std::array<double, 61> values{};
  values[0] = f0;
  for (std::size_t i = 1; i < rule.nodes.size(); ++i) {
    const double fp = checked(f, mid + half * rule.nodes[i]);
    const double fm = checked(f, mid - half * rule.nodes[i]);
    kronrod += (fp + fm) * rule.kronrod_weights[i];
    gauss += (fp + fm) * rule.gauss_weights[i];
    abs_sum += (std::abs(fp) + std::abs(fm)) * rule.kronrod_weights[i];
    values[2 * i - 1] = fp;
    values[2 * i] = fm;
  }
  // QUADPACK-style error scaling.
  const double mean = 0.5 * kronrod;
  double asc = std::abs(f0 - mean) * rule.kronrod_weights[0];
  for (std::size_t i = 1; i < rule.nodes.size(); ++i) {
    asc += (std::abs(values[2 * i - 1] - mean) + std::abs(values[2 * i] - mean)) *
           rule.kronrod_weights[i];
  }
  const double result = kronrod * half;
  const double res_abs = abs_sum * std::abs(half);
  const double res_asc = asc * std::abs(half);
  double err = std::abs((kronrod - gauss) * half);
  if (res_asc != 0.0 && err != 0.0) {
    err = res_asc * std::min(1.0, std::pow(200.0 * err / res_asc, 1.5));
  }
  constexpr double eps = std::numeric_limits<double>::epsilon();
  if (res_abs > std::numeric_limits<double>::min() / (50.0 * eps)) {
    err = std::max(50.0 * eps * res_abs, err);
  }
  return Panel{a, b, result, err};
}

QuadResult adaptive(const RealFn& f, const std::vector<double>& cuts,
                    const QuadSettings& settings) {
  settings.validate();
  const KronrodRule& rule = rule_for(settings.base_rule_order);
  std::priority_queue<Panel> heap;
  // Panels too narrow to bisect in double precision; they keep their values.
  std::vector<Panel> frozen;
  double total = 0.0;
  double total_err = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    Panel p = apply_rule(f, cuts[i], cuts[i + 1], rule);
    total += p.value;
    total_err += p.error;
    heap.push(p);
  }
  int panels = static_cast<int>(heap.size());
  const auto target = [&] {
    return std::max(settings.abs_tol, settings.rel_tol * std::abs(total));
  };
  while (total_err > target() && !heap.empty()) {
    if (panels >= settings.max_subdivisions) {
      throw NonConvergence("quadrature budget of " +
                           std::to_string(settings.max_subdivisions) +
                           " subdivisions exhausted; error estimate " +
                           std::to_string(total_err));
    }
    const Panel worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    const double width_floor = 64.0 * std::numeric_limits<double>::epsilon() *
                               std::max(std::abs(worst.a), std::abs(worst.b));
    if (!(mid > worst.a && mid < worst.b) || worst.b - worst.a < width_floor) {
      frozen.push_back(worst);
      continue;
    }
    const Panel left = apply_rule(f, worst.a, mid, rule);
    const Panel right = apply_rule(f, mid, worst.b, rule);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++panels;
  }
  // Resum to shed the drift of the running totals.
  total = 0.0;
  total_err = 0.0;
  for (const Panel& p : frozen) {
    total += p.value;
    total_err += p.error;
  }
  while (!heap.empty()) {
    total += heap.top().value;
    total_err += heap.top().error;
    heap.pop();
  }
  if (total_err > target()) {
    throw NonConvergence("quadrature stalled at the floating-point resolution floor; "
                         "error estimate " + std::to_string(total_err));
  }
  return QuadResult{total, total_err, panels};
}

}  // namespace

void QuadSettings::validate() const {
  if (!(abs_tol > 0.0)) throw InputError("QuadSettings: abs_tol must be > 0");
  if (!(rel_tol >= 0.0)) throw InputError("QuadSettings: rel_tol must be >= 0");
  if (max_subdivisions < 1) throw InputError("QuadSettings: max_subdivisions must be >= 1");
  if (base_rule_order < 2) throw InputError("QuadSettings: base_rule_order must be >= 2");
  (void)rule_for(base_rule_order);
}

QuadSettings QuadSettings::scaled(double factor) const {
  QuadSettings out = *this;
  out.abs_tol *= factor;
  out.rel_tol *= factor;
  return out;
}

QuadResult integrate_detailed(const RealFn& f, double a, double b,
                              const QuadSettings& settings) {
  if (!(a < b)) throw InputError("integrate: require a < b");
  return adaptive(f, {a, b}, settings);
}

double integrate(const RealFn& f, double a, double b, const QuadSettings& settings) {
  return integrate_detailed(f, a, b, settings).value;
}

double integrate_with_breaks(const RealFn& f, double a, double b,
                             std::span<const double> breaks,
                             const QuadSettings& settings) {
  if (!(a < b)) throw InputError("integrate: require a < b");
  std::vector<double> cuts{a, b};
  for (double t : breaks) {
    if (t > a && t < b) cuts.push_back(t);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end(),
                         [](double x, double y) {
                           return std::abs(x - y) <=
                                  1e-14 * std::max({1.0, std::abs(x), std::abs(y)});
                         }),
             cuts.end());
  if (cuts.back() != b) cuts.back() = b;
  return adaptive(f, cuts, settings).value;
}

std::vector<double> integrate_vector(const VectorFn& f, std::size_t dim, double a, double b,
                                     const QuadSettings& settings) {
  settings.validate();
  if (!(a < b)) throw InputError("integrate_vector: require a < b");
  const KronrodRule& rule = rule_for(settings.base_rule_order);
  struct VPanel {
    double a;
    double b;
    double error;
    /// Largest componentwise integral of |f| over the panel.
    double magnitude;
    std::vector<double> value;
    bool operator<(const VPanel& o) const { return error < o.error; }
  };
  std::vector<double> fp(dim);
  std::vector<double> fm(dim);
  const auto apply = [&](double lo, double hi) {
    const double half = 0.5 * (hi - lo);
    const double mid = 0.5 * (lo + hi);
    std::vector<double> kron(dim, 0.0);
    std::vector<double> gauss(dim, 0.0);
    std::vector<double> mass(dim, 0.0);
    f(mid, fp);
    for (std::size_t c = 0; c < dim; ++c) {
      if (!std::isfinite(fp[c])) throw NonFinite("vector integrand is not finite");
      kron[c] = fp[c] * rule.kronrod_weights[0];
      gauss[c] = fp[c] * rule.gauss_weights[0];
      mass[c] = std::abs(fp[c]) * rule.kronrod_weights[0];
    }
    for (std::size_t i = 1; i < rule.nodes.size(); ++i) {
      f(mid + half * rule.nodes[i], fp);
      f(mid - half * rule.nodes[i], fm);
      for (std::size_t c = 0; c < dim; ++c) {
        const double sum = fp[c] + fm[c];
        if (!std::isfinite(sum)) throw NonFinite("vector integrand is not finite");
        kron[c] += sum * rule.kronrod_weights[i];
        gauss[c] += sum * rule.gauss_weights[i];
        mass[c] += (std::abs(fp[c]) + std::abs(fm[c])) * rule.kronrod_weights[i];
      }
    }
    double err = 0.0;
    double magnitude = 0.0;
    for (std::size_t c = 0; c < dim; ++c) {
      err = std::max(err, std::abs((kron[c] - gauss[c]) * half));
      magnitude = std::max(magnitude, mass[c] * half);
      kron[c] *= half;
    }
    return VPanel{lo, hi, err, magnitude, std::move(kron)};
  };
  std::priority_queue<VPanel> heap;
  heap.push(apply(a, b));
  std::vector<VPanel> frozen;
  int panels = 1;
  const auto totals = [&] {
    std::vector<double> sum(dim, 0.0);
    double err = 0.0;
    double mass = 0.0;
    std::priority_queue<VPanel> copy = heap;
    for (const VPanel& p : frozen) {
      for (std::size_t c = 0; c < dim; ++c) sum[c] += p.value[c];
      err += p.error;
      mass += p.magnitude;
    }
    while (!copy.empty()) {
      for (std::size_t c = 0; c < dim; ++c) sum[c] += copy.top().value[c];
      err += copy.top().error;
      mass += copy.top().magnitude;
      copy.pop();
    }
    double scale = 0.0;
    for (double v : sum) scale = std::max(scale, std::abs(v));
    // Cancelling components cannot be resolved below the rounding level of
    // their absolute mass.
    const double floor = 50.0 * std::numeric_limits<double>::epsilon() * mass;
    return std::tuple{sum, err,
                      std::max({settings.abs_tol, settings.rel_tol * scale, floor})};
  };
  for (;;) {
    auto [sum, err, target] = totals();
    if (err <= target || heap.empty()) {
      if (err > target) {
        throw NonConvergence("vector quadrature stalled at the resolution floor");
      }
      return sum;
    }
    // Bisect every panel whose error exceeds its share of the target, which
    // keeps the number of full re-summations logarithmic.
    std::vector<VPanel> work;
    while (!heap.empty() && (work.empty() || heap.top().error > target / (2.0 * panels))) {
      work.push_back(heap.top());
      heap.pop();
    }
    for (VPanel& p : work) {
      const double mid = 0.5 * (p.a + p.b);
      if (!(mid > p.a && mid < p.b)) {
        frozen.push_back(std::move(p));
        continue;
      }
      if (panels >= settings.max_subdivisions) {
        throw NonConvergence("vector quadrature budget exhausted");
      }
      heap.push(apply(p.a, mid));
      heap.push(apply(mid, p.b));
      ++panels;
    }
  }
}

double integrate_endpoint_singular(const RealFn& f, double a, double b, double sigma,
                                   const QuadSettings& settings) {
  if (!(sigma > 0.0 && sigma < 1.0)) {
    throw BadExponent("integrate_endpoint_singular: sigma must lie in (0, 1)");
  }
  if (!(a < b)) throw InputError("integrate_endpoint_singular: require a < b");
  // t = a + tau^q with q = 1/(1 - sigma) turns (t - a)^-sigma dt into q dtau.
  const double q = 1.0 / (1.0 - sigma);
  const double upper = std::pow(b - a, 1.0 - sigma);
  const RealFn g = [&](double tau) { return q * f(a + std::pow(tau, q)); };
  return integrate(g, 0.0, upper, settings);
}

}  // namespace fracdense
