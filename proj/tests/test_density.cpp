#include <doctest.h>

#include <cmath>

#include "fracdense/density.hpp"
#include "fracdense/errors.hpp"

using namespace fracdense;
using doctest::Approx;

namespace {

struct KappaRef {
  double s, kappa;
};
// From tests/oracles/oracle_values.py.
constexpr KappaRef kKappa[] = {
    {0.25, 0.10397665530313603474},
    {0.5, 0.11686458818775874865},
    {0.75, 0.065829012429444091556},
};

// Regression fixture, s = 1/2 and the standard growth bump.
struct BlowupRef {
  int j;
  double l1;
};
constexpr BlowupRef kBlowup[] = {
    {1, 0.10748823745711707},    {4, 0.035362798743625426},  {8, 0.01945721003259963},
    {16, 0.010265462134213482},  {32, 0.0052812690512904405}, {64, 0.0026797791325486593},
};

}  // namespace

TEST_CASE("growth constant against the oracle") {
  for (const KappaRef& r : kKappa) {
    CHECK(boundary_growth_constant(standard_growth_bump(), FracParams{r.s, 1}) ==
          Approx(r.kappa).epsilon(1e-9));
  }
  CHECK_THROWS_AS(boundary_growth_constant(Bump{1.8, 0.5, 1.0}, FracParams{0.5, 1}), GeometryError);
}

TEST_CASE("growth fit recovers kappa and s") {
  for (const KappaRef& r : kKappa) {
    const FracParams p{r.s, 1};
    const GrowthFit fit = fit_boundary_growth(growth_function(standard_growth_bump(), p), default_growth_grid());
    CHECK(fit.kappa == Approx(r.kappa).epsilon(0.02));
    CHECK(std::abs(fit.s - r.s) <= 0.02);
  }
  const SHarmonicFn fn = growth_function(standard_growth_bump(), FracParams{0.5, 1});
  CHECK_THROWS_AS(fit_boundary_growth(fn, {0.01, 0.02, 0.03}), InputError);
}

TEST_CASE("growth function is even") {
  const SHarmonicFn fn = growth_function(standard_growth_bump(), FracParams{0.25, 1});
  for (double x : {0.1, 0.5, 0.9}) CHECK(fn(x) == Approx(fn(-x)).epsilon(1e-12));
}

TEST_CASE("blow-up error against the fixture") {
  const FracParams p{0.5, 1};
  const SHarmonicFn base = growth_function(standard_growth_bump(), p);
  const double kappa = boundary_growth_constant(standard_growth_bump(), p);
  for (const BlowupRef& r : kBlowup) {
    CHECK(blowup_l1_error(1, r.j, kappa, base) == Approx(r.l1).epsilon(1e-6));
    CHECK(blowup_l1_error(-1, r.j, kappa, base) == Approx(r.l1).epsilon(1e-6));
  }
  CHECK_THROWS_AS(blowup_l1_error(0, 4, kappa, base), InputError);
}

TEST_CASE("blow-up member is the rescaled base") {
  const SHarmonicFn base = growth_function(standard_growth_bump(), FracParams{0.5, 1});
  const SHarmonicFn v = blowup_member(1, 4, base);
  CHECK(v(1.0) == Approx(2.0 * base(0.25 - 1.0)).epsilon(1e-11));
  CHECK(v.ball().center == Approx(4.0));
  CHECK(v.ball().radius == Approx(4.0));
}

TEST_CASE("dictionary layout") {
  const FracParams p{0.5, 1};
  const Dictionary d = build_dictionary(p, 12, Placement{3, false});
  CHECK(d.size() == 12);
  CHECK(d.labels.size() == 12);
  for (const SHarmonicFn& m : d.members) {
    REQUIRE(m.exterior().bumps().size() == 1);
    const Bump& b = m.exterior().bumps().front();
    CHECK(std::abs(b.center) - b.half_width >= 1.0 + kClearanceMin);
  }
  const Dictionary again = build_dictionary(p, 12, Placement{3, false});
  CHECK(again.members[5](0.2) == d.members[5](0.2));

  const Dictionary mirror = build_dictionary(p, 8, Placement{0, true});
  for (std::size_t i = 0; i + 1 < mirror.size(); i += 2) {
    const Bump& a = mirror.members[i].exterior().bumps().front();
    const Bump& b = mirror.members[i + 1].exterior().bumps().front();
    CHECK(a.center == -b.center);
    CHECK(a.half_width == b.half_width);
  }
}

TEST_CASE("derivative matrix") {
  const Dictionary d = build_dictionary(FracParams{0.5, 1}, 10);
  const Eigen::MatrixXd a = derivative_matrix(d, 0.0, 3);
  CHECK(a.rows() == 4);
  CHECK(a.cols() == 10);
  // Nonnegative data give positive values.
  for (Eigen::Index i = 0; i < a.cols(); ++i) CHECK(a(0, i) > 0.0);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
  CHECK(svd.rank() == 4);
}

TEST_CASE("span solutions") {
  const FracParams p{0.5, 1};
  for (int beta = 0; beta <= 2; ++beta) {
    const Dictionary d = build_dictionary(p, 2 * (beta + 1) + 4);
    const SpanSolution sol = span_solve(d, MultiIndex::scalar(beta));
    CHECK(sol.rank == beta + 1);
    CHECK_FALSE(sol.ill_conditioned);
    for (int a = 0; a <= beta; ++a) {
      const double want = a == beta ? 1.0 : 0.0;
      CHECK(std::abs(sol.achieved[static_cast<std::size_t>(a)] - want) <= kSpanTol);
    }
  }
  const Dictionary small = build_dictionary(p, 2);
  CHECK_THROWS_AS(span_solve(small, MultiIndex::scalar(3)), RankDeficient);
}

TEST_CASE("rescaled member has the monomial jet") {
  const Dictionary d = build_dictionary(FracParams{0.5, 1}, 10);
  const SpanSolution sol = span_solve(d, MultiIndex::scalar(2));
  const SHarmonicFn u = transform(sol.v, 0.25, 0.0, 2);
  const DerivativeVector j = extend_derivatives(u, 0.0, 3);
  CHECK(j[2] == Approx(1.0).epsilon(1e-6));
  CHECK(std::abs(j[0]) <= 1e-6);
  CHECK(std::abs(j[1]) <= 1e-6);
  const DerivativeVector j0 = extend_derivatives(sol.v, 0.0, 3);
  CHECK(j[3] == Approx(0.25 * j0[3]).epsilon(1e-8));

  const double g1 = rescaled_gap(sol, 0.25, 1);
  const double g2 = rescaled_gap(sol, 0.125, 1);
  CHECK(g2 < g1);
  const RescaleResult r = rescale_for_monomial(sol, 1, 0.05);
  CHECK(r.error <= 0.05);
  CHECK_FALSE(r.history.empty());
}

TEST_CASE("approximating zero") {
  const Approximation a = approximate(Polynomial(), 1, 0.1);
  CHECK(a.u.size() == 0);
  CHECK(a.report.error == 0.0);
  CHECK(a.u(0.3) == 0.0);
}

TEST_CASE("global least squares on x^2") {
  ApproxOptions opt;
  opt.method = Method::GlobalLsq;
  const Approximation a = approximate(Polynomial({0.0, 0.0, 1.0}), 1, 0.05, opt);
  CHECK(a.report.error <= 0.05);
  CHECK(a.report.support_ok);
  REQUIRE(a.report.residual.has_value());
  CHECK(a.report.residual->relative_max <= 1e-3);
  for (const auto& [x, v] : a.report.outside_samples) CHECK(v == 0.0);
}

TEST_CASE("method names and order limits") {
  CHECK(parse_method("taylor-rescale") == Method::TaylorRescale);
  CHECK(parse_method("global-lsq") == Method::GlobalLsq);
  CHECK(method_name(Method::GlobalLsq) == "global-lsq");
  CHECK_THROWS_AS(parse_method("newton"), InputError);
  CHECK_THROWS_AS(approximate(Polynomial({1.0}), 4, 0.1), OrderTooHigh);
}
