#include "fracdense/density.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "fracdense/errors.hpp"
#include "fracdense/parallel.hpp"

namespace fracdense {

namespace {

// Neumaier summation.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  [[nodiscard]] double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

double monomial_value(double x, int order) {
  double fact = 1.0;
  for (int i = 2; i <= order; ++i) fact *= i;
  return std::pow(x, order) / fact;
}

void require_sign(int e) {
  if (e != 1 && e != -1) throw InputError("direction e must be +1 or -1");
}

// Uniform double in [0, 1) from the top 53 bits, identical on every platform.
double unit_uniform(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

}  // namespace

// ---------------------------------------------------------------------------
// Boundary growth and blow-up

Bump standard_growth_bump(double amplitude) { return Bump{2.5, 0.5, amplitude}; }

SHarmonicFn growth_function(const Bump& bump, const FracParams& params, const QuadSettings& quad) {
  const Bump mirror{-bump.center, bump.half_width, bump.amplitude};
  return SHarmonicFn(params, Ball{0.0, 1.0}, ExteriorData({mirror, bump}), quad);
}

double boundary_growth_constant(const Bump& bump, const FracParams& params,
                                const QuadSettings& quad) {
  params.require_line();
  if (!(bump.half_width > 0.0) || bump.lower() < 2.0 - 1e-12 || bump.upper() > 3.0 + 1e-12) {
    throw GeometryError("growth bump must be supported in (2, 3)");
  }
  const double s = params.s;
  const RealFn integrand = [&](double rho) {
    const double g = bump(rho);
    if (g == 0.0) return 0.0;
    return g * std::pow(rho * rho - 1.0, -s) * (1.0 / (rho - 1.0) + 1.0 / (rho + 1.0));
  };
  const double integral = integrate(integrand, bump.lower(), bump.upper(), quad);
  return std::pow(2.0, s) * poisson_constant(params) * integral;
}

std::vector<double> default_growth_grid() {
  std::vector<double> g;
  for (int i = 4; i <= 9; ++i) g.push_back(std::ldexp(1.0, -i));
  return g;
}

GrowthFit fit_boundary_growth(const SHarmonicFn& fn, const std::vector<double>& eps_grid) {
  std::vector<double> eps = eps_grid;
  std::sort(eps.begin(), eps.end());
  eps.erase(std::unique(eps.begin(), eps.end()), eps.end());
  if (eps.size() < 6) throw InputError("fit_boundary_growth: need at least 6 distinct eps");
  for (double e : eps) {
    if (!(e > 0.0 && e <= 0.1)) throw InputError("fit_boundary_growth: eps must lie in (0, 0.1]");
  }
  const double edge = fn.ball().center + fn.ball().radius;
  Eigen::MatrixXd a(static_cast<Eigen::Index>(eps.size()), 3);
  Eigen::VectorXd b(static_cast<Eigen::Index>(eps.size()));
  for (std::size_t i = 0; i < eps.size(); ++i) {
    const double psi = fn(edge - eps[i] * fn.ball().radius);
    if (!(psi > 0.0)) throw NumericalError("fit_boundary_growth: psi must be positive near the boundary");
    const auto r = static_cast<Eigen::Index>(i);
    a(r, 0) = 1.0;
    a(r, 1) = std::log(eps[i]);
    a(r, 2) = eps[i];
    b(r) = std::log(psi);
  }
  const Eigen::Vector3d coef = a.colPivHouseholderQr().solve(b);
  return GrowthFit{std::exp(coef(0)), coef(1), coef(2)};
}

SHarmonicFn blowup_member(int e, int j, const SHarmonicFn& base) {
  require_sign(e);
  if (j < 1) throw InputError("blowup index j must be >= 1");
  const double jd = static_cast<double>(j);
  return rescale(base, 1.0 / jd, -static_cast<double>(e), std::pow(jd, base.params().s));
}

double blowup_l1_error(int e, int j, double kappa, const SHarmonicFn& base,
                       const QuadSettings& quad) {
  const SHarmonicFn v = blowup_member(e, j, base);
  const double s = base.params().s;
  // x = e t^q with q = 1/s turns the x^s behaviour at 0 into a smooth one.
  const double q = 1.0 / s;
  const RealFn integrand = [&](double t) {
    if (t <= 0.0) return 0.0;
    const double x = e * std::pow(t, q);
    const double limit = kappa * std::pow(std::abs(x), s);
    return std::abs(v(x) - limit) * q * std::pow(t, q - 1.0);
  };
  QuadSettings qs = quad;
  qs.max_subdivisions = std::max(qs.max_subdivisions, 20000);
  return integrate(integrand, 0.0, std::pow(2.0, s), qs);
}

// ---------------------------------------------------------------------------
// Derivative spanning

Dictionary build_dictionary(const FracParams& params, int count, const Placement& placement,
                            const QuadSettings& quad) {
  params.require_line();
  if (count < 1) throw InputError("dictionary size must be >= 1");
  static constexpr double kCenters[] = {1.6, 2.2, 3.0, 4.0, 5.2};
  static constexpr double kWidths[] = {0.1, 0.25, 0.5};
  // Signed pattern over the five base centres; no member has its mirror in
  // the same block, so both parities are excited.
  static constexpr double kPattern[] = {1.6, -2.2, 3.0, -1.6, 2.2, -4.0, 5.2, -3.0, 4.0, -5.2};
  constexpr double kJitter = 0.04;
  std::mt19937_64 gen(placement.seed);
  const Ball ball{0.0, 1.0};
  Dictionary dict;
  dict.members.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    double center = 0.0;
    double width = 0.0;
    if (placement.mirror) {
      const int pair = i / 2;
      const int block = pair / 5;
      const double base = kCenters[pair % 5] + 0.35 * block;
      width = kWidths[(pair + block) % 3];
      if (i % 2 == 0) {
        // Jitter drawn once per pair keeps the pair exactly symmetric.
        center = base + kJitter * (2.0 * unit_uniform(gen) - 1.0);
      } else {
        center = -dict.members.back().exterior().bumps().front().center;
      }
    } else {
      const int block = i / 10;
      const double base = kPattern[i % 10];
      width = kWidths[(i + block) % 3];
      center = base + std::copysign(0.35 * block, base) + kJitter * (2.0 * unit_uniform(gen) - 1.0);
    }
    const Bump bump{center, width, 1.0};
    dict.members.emplace_back(params, ball, ExteriorData({bump}), quad);
    std::ostringstream label;
    label.precision(6);
    label << "bump(c=" << center << ",w=" << width << ")";
    dict.labels.push_back(label.str());
  }
  return dict;
}

Eigen::MatrixXd derivative_matrix(const Dictionary& dict, double p, int m) {
  if (dict.members.empty()) throw InputError("derivative_matrix: empty dictionary");
  if (m < 0) throw InputError("derivative_matrix: order must be >= 0");
  if (m > kMaxDerivativeOrder) throw OrderTooHigh("derivative_matrix: order above 8");
  const Ball& ball = dict.ball();
  for (const SHarmonicFn& f : dict.members) {
    if (f.ball().center != ball.center || f.ball().radius != ball.radius) {
      throw GeometryError("dictionary members must share one ball");
    }
  }
  if (!ball.contains(p)) throw GeometryError("derivative_matrix: point outside the common ball");
  Eigen::MatrixXd a(m + 1, static_cast<Eigen::Index>(dict.size()));
  parallel_for(dict.size(), [&](std::size_t i) {
    const DerivativeVector d = extend_derivatives(dict.members[i], p, m);
    for (int r = 0; r <= m; ++r) a(r, static_cast<Eigen::Index>(i)) = d[static_cast<std::size_t>(r)];
  });
  return a;
}

SpanSolution span_solve(const Dictionary& dict, const MultiIndex& beta, double p) {
  if (beta.dimension() != 1) throw InputError("span_solve: only n = 1 is supported");
  const int m = beta.order();
  const Eigen::MatrixXd a = derivative_matrix(dict, p, m);
  const int n_rows = m + 1;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double smax = sv.size() > 0 ? sv(0) : 0.0;
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > kRankTol * smax) ++rank;
  }
  if (rank < n_rows) {
    std::ostringstream msg;
    msg << "derivative matrix has numerical rank " << rank << " < " << n_rows
        << "; enlarge the dictionary";
    throw RankDeficient(msg.str());
  }
  const double cond = smax / sv(n_rows - 1);
  svd.setThreshold(kRankTol);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n_rows);
  rhs(m) = 1.0;
  const Eigen::VectorXd c = svd.solve(rhs);

  std::vector<Bump> bumps;
  std::vector<double> coeffs(static_cast<std::size_t>(c.size()));
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    coeffs[static_cast<std::size_t>(i)] = c(i);
    for (const Bump& b : dict.members[static_cast<std::size_t>(i)].exterior().bumps()) {
      bumps.push_back(Bump{b.center, b.half_width, b.amplitude * c(i)});
    }
  }
  const SHarmonicFn& first = dict.members.front();
  SHarmonicFn v(first.params(), first.ball(), ExteriorData(std::move(bumps)), first.quad());
  DerivativeVector achieved = extend_derivatives(v, p, m);
  return SpanSolution{std::move(coeffs), beta,     p,    std::move(achieved),
                      cond,              cond > kIllConditioned, rank, std::move(v)};
}

double rescaled_gap(const SpanSolution& sol, double eta, int k, const CkErrorOptions& options) {
  const int order = sol.beta.order();
  const SHarmonicFn u = transform(sol.v, eta, sol.point, order);
  const RealFn uf = [&u](double x) { return u(x); };
  const RealFn target = [order](double x) { return monomial_value(x, order); };
  return ck_error(uf, target, k, options);
}

RescaleResult rescale_for_monomial(const SpanSolution& sol, int k, double budget,
                                   const CkErrorOptions& options) {
  if (!(budget > 0.0)) throw InputError("rescale_for_monomial: budget must be positive");
  if (k < 0) throw InputError("rescale_for_monomial: k must be >= 0");
  const int order = sol.beta.order();
  std::vector<std::pair<double, double>> history;
  for (int i = 1; i <= kEtaFloorExponent; ++i) {
    const double eta = std::ldexp(1.0, -i);
    SHarmonicFn u = transform(sol.v, eta, sol.point, order);
    const RealFn uf = [&u](double x) { return u(x); };
    const RealFn target = [order](double x) { return monomial_value(x, order); };
    const double err = ck_error(uf, target, k, options);
    history.emplace_back(eta, err);
    if (err <= budget) return RescaleResult{std::move(u), eta, err, std::move(history)};
  }
  double best = history.front().second;
  for (const auto& h : history) best = std::min(best, h.second);
  std::ostringstream msg;
  msg << "rescaling reached eta = 2^-" << kEtaFloorExponent << " without meeting budget "
      << budget << " (best gap " << best << ")";
  throw NonConvergence(msg.str());
}

// ---------------------------------------------------------------------------
// End-to-end approximation

void SHarmonicSum::add(double weight, SHarmonicFn piece) {
  if (!std::isfinite(weight)) throw NonFinite("SHarmonicSum: weight is not finite");
  if (!(piece.ball().center - piece.ball().radius <= -1.0 &&
        piece.ball().center + piece.ball().radius >= 1.0)) {
    throw GeometryError("SHarmonicSum: every piece must be s-harmonic on B_1(0)");
  }
  pieces_.emplace_back(weight, std::move(piece));
}

double SHarmonicSum::operator()(double x) const {
  CompensatedSum acc;
  for (const auto& [w, f] : pieces_) acc.add(w * f(x));
  return acc.value();
}

double SHarmonicSum::support_radius() const {
  double r = 0.0;
  for (const auto& pf : pieces_) r = std::max(r, pf.second.support_radius());
  return r;
}

std::vector<double> SHarmonicSum::breakpoints() const {
  std::vector<double> out;
  for (const auto& pf : pieces_) {
    const std::vector<double> b = pf.second.breakpoints();
    out.insert(out.end(), b.begin(), b.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::string method_name(Method m) {
  return m == Method::TaylorRescale ? "taylor-rescale" : "global-lsq";
}

Method parse_method(const std::string& name) {
  if (name == "taylor-rescale") return Method::TaylorRescale;
  if (name == "global-lsq") return Method::GlobalLsq;
  throw InputError("unknown method '" + name + "' (expected taylor-rescale or global-lsq)");
}

namespace {

constexpr int kMaxMonomialOrder = 4;
constexpr int kGlobalLsqDefaultSize = 24;

void taylor_rescale(const Polynomial& poly, int k, double budget_total, const ApproxOptions& opt,
                    SHarmonicSum& u, ApproximationReport& report) {
  const auto monomials = poly.monomials();
  if (monomials.empty()) return;
  const double count = static_cast<double>(monomials.size());
  for (const auto& [alpha, a] : monomials) {
    const int order = alpha.order();
    if (order > kMaxMonomialOrder) {
      std::ostringstream msg;
      msg << "monomial of degree " << order << " exceeds the supported degree "
          << kMaxMonomialOrder << "; use method global-lsq";
      throw BudgetInfeasible(msg.str());
    }
    const double weight = a * alpha.factorial();
    const double budget = budget_total / (count * std::abs(weight));
    if (!(budget > 1e-12)) {
      throw BudgetInfeasible("per-monomial budget underflows; loosen epsilon");
    }
    const int size = opt.dictionary_size > 0 ? opt.dictionary_size : 2 * (order + 1) + 4;
    const Dictionary dict = build_dictionary(opt.params, size, opt.placement, opt.quad);
    const SpanSolution sol = span_solve(dict, alpha, 0.0);
    RescaleResult rr = rescale_for_monomial(sol, k, budget, opt.grid);
    MonomialRecord rec;
    rec.order = order;
    rec.coefficient = a;
    rec.eta = rr.eta;
    rec.budget = budget;
    rec.error = rr.error;
    rec.condition_number = sol.condition_number;
    rec.support_radius = rr.u.support_radius();
    report.monomials.push_back(rec);
    report.condition_numbers.push_back(sol.condition_number);
    u.add(weight, std::move(rr.u));
  }
}

double target_derivative(const ApproxTarget& target, double x, int order) {
  if (const auto* p = std::get_if<Polynomial>(&target)) return p->derivative(order)(x);
  const RealFn& f = std::get<Target>(target).f;
  return order == 0 ? f(x) : central_derivative(f, x, order, 1e-2, 8);
}

void global_lsq(const ApproxTarget& target, int k, double epsilon, const ApproxOptions& opt,
                SHarmonicSum& u, ApproximationReport& report) {
  const int size = opt.dictionary_size > 0 ? opt.dictionary_size : kGlobalLsqDefaultSize;
  const Dictionary base = build_dictionary(opt.params, size, opt.placement, opt.quad);
  // Stretch the dictionary to B_2 so B_1 sits well inside every member's ball.
  std::vector<SHarmonicFn> members;
  members.reserve(base.size());
  for (const SHarmonicFn& m : base.members) members.push_back(transform(m, 0.5, 0.0, 0));
  const int points = opt.grid.grid_points;
  std::vector<double> xs(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) xs[static_cast<std::size_t>(i)] = -1.0 + 2.0 * i / (points - 1.0);
  const Eigen::Index rows = static_cast<Eigen::Index>(points) * (k + 1);
  Eigen::MatrixXd a(rows, static_cast<Eigen::Index>(members.size()));
  Eigen::VectorXd b(rows);
  parallel_for(members.size(), [&](std::size_t j) {
    for (int i = 0; i < points; ++i) {
      const DerivativeVector d = extend_derivatives(members[j], xs[static_cast<std::size_t>(i)], k);
      for (int g = 0; g <= k; ++g) {
        a(static_cast<Eigen::Index>(g) * points + i, static_cast<Eigen::Index>(j)) =
            d[static_cast<std::size_t>(g)];
      }
    }
  });
  for (int g = 0; g <= k; ++g) {
    for (int i = 0; i < points; ++i) {
      b(static_cast<Eigen::Index>(g) * points + i) =
          target_derivative(target, xs[static_cast<std::size_t>(i)], g);
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double lambda = opt.ridge * sv(0) * sv(0);
  const Eigen::VectorXd utb = svd.matrixU().transpose() * b;
  Eigen::VectorXd scaled(sv.size());
  for (Eigen::Index i = 0; i < sv.size(); ++i) scaled(i) = sv(i) / (sv(i) * sv(i) + lambda) * utb(i);
  const Eigen::VectorXd c = svd.matrixV() * scaled;
  std::vector<Bump> bumps;
  for (std::size_t j = 0; j < members.size(); ++j) {
    for (const Bump& bb : members[j].exterior().bumps()) {
      bumps.push_back(Bump{bb.center, bb.half_width, bb.amplitude * c(static_cast<Eigen::Index>(j))});
    }
  }
  const SHarmonicFn& first = members.front();
  SHarmonicFn v(first.params(), first.ball(), ExteriorData(std::move(bumps)), first.quad());
  const double smin = sv(sv.size() - 1);
  report.condition_numbers.push_back(smin > 0.0 ? sv(0) / smin
                                                : std::numeric_limits<double>::infinity());
  MonomialRecord rec;
  rec.order = -1;
  rec.budget = epsilon;
  rec.condition_number = report.condition_numbers.back();
  rec.support_radius = v.support_radius();
  report.monomials.push_back(rec);
  u.add(1.0, std::move(v));
}

}  // namespace

Approximation approximate(const ApproxTarget& target, int k, double epsilon,
                          const ApproxOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  options.params.require_line();
  options.quad.validate();
  if (k < 0) throw InputError("k must be >= 0");
  if (k > 3) throw OrderTooHigh("approximate supports k <= 3");
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw InputError("epsilon must be positive");
  if (options.residual_points < 1) throw InputError("residual grid needs at least one point");

  ApproximationReport report;
  report.method = method_name(options.method);
  report.k = k;
  report.epsilon = epsilon;
  report.params = options.params;

  RealFn f;
  double budget = epsilon;
  if (const auto* p = std::get_if<Polynomial>(&target)) {
    report.polynomial = *p;
    const Polynomial poly = *p;
    f = [poly](double x) { return poly(x); };
  } else {
    const Target& t = std::get<Target>(target);
    if (!t.f) throw InputError("target function is empty");
    f = t.f;
    if (options.method == Method::TaylorRescale) {
      const WeierstrassResult w = weierstrass_approx(t, k, 0.5 * epsilon, options.quad);
      report.polynomial = w.polynomial;
      report.polynomial_error = w.error;
      report.plan = w.plan;
      budget = epsilon - w.error;
    }
  }

  SHarmonicSum u;
  if (options.method == Method::TaylorRescale) {
    taylor_rescale(report.polynomial, k, budget, options, u, report);
  } else {
    global_lsq(target, k, epsilon, options, u, report);
  }

  const RealFn uf = [&u](double x) { return u(x); };
  report.errors = ck_error_by_order(uf, f, k, options.grid);
  report.error = *std::max_element(report.errors.begin(), report.errors.end());
  report.r_total = std::max(u.support_radius(), 1.0);

  // Ten points beyond R_total, five on each side.
  for (int i = 0; i < 5; ++i) {
    const double d = report.r_total * (1.0 + 0.01 + 0.2 * i);
    report.outside_samples.emplace_back(d, u(d));
    report.outside_samples.emplace_back(-d, u(-d));
  }
  report.support_ok = std::all_of(report.outside_samples.begin(), report.outside_samples.end(),
                                  [](const auto& s) { return s.second == 0.0; });

  if (options.check_residual && u.size() > 0) {
    FracLapSettings fl = options.fraclap;
    // The integrand inherits the absolute error of the inner extension
    // integrals, which grows with the total exterior amplitude.
    double mass = 0.0;
    for (const auto& [w, piece] : u.pieces()) {
      for (const Bump& b : piece.exterior().bumps()) mass += std::abs(w * b.amplitude);
    }
    fl.quad.abs_tol = std::max(fl.quad.abs_tol, options.quad.abs_tol * std::max(1.0, mass));
    const std::vector<double> br = u.breakpoints();
    fl.breakpoints.insert(fl.breakpoints.end(), br.begin(), br.end());
    const std::vector<double> grid = uniform_interior_grid(0.0, 0.9, options.residual_points);
    report.residual = residual_report(uf, u.support_radius(), Ball{0.0, 1.0}, grid, options.params, fl);
  } else if (options.check_residual) {
    report.residual = ResidualReport{};
    for (double x : uniform_interior_grid(0.0, 0.9, options.residual_points)) {
      report.residual->points.push_back(ResidualPoint{x, 0.0});
    }
  }

  report.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (options.method == Method::GlobalLsq && report.error > epsilon) {
    std::ostringstream msg;
    msg << "global-lsq misfit " << report.error << " exceeds epsilon " << epsilon
        << "; enlarge the dictionary or use taylor-rescale";
    throw NonConvergence(msg.str());
  }
  return Approximation{std::move(u), std::move(report)};
}

}  // namespace fracdense
