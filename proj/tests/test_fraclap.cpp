#include <doctest.h>

#include <cmath>

#include "fracdense/errors.hpp"
#include "fracdense/fraclap.hpp"

using namespace fracdense;
using doctest::Approx;

namespace {

// int_0^inf (2 phi(0) - phi(y) - phi(-y)) y^(-1-2s) dy for the unit profile,
// from tests/oracles/oracle_values.py.
struct LapRef {
  double s, value;
};
constexpr LapRef kProfile[] = {
    {0.25, 5.5415142384263215794},
    {0.5, 4.2551190939856952963},
    {0.75, 5.6550957740286595091},
};

}  // namespace

TEST_CASE("operator on the bare profile against the oracle") {
  FracLapSettings settings;
  settings.breakpoints = {-1.0, 1.0};
  for (const LapRef& r : kProfile) {
    const FracParams p{r.s, 1};
    const double v = frac_laplacian([](double y) { return bump_profile(y); }, 0.0, p, 1.0, settings);
    CHECK(v == Approx(r.value).epsilon(1e-7));
  }
}

TEST_CASE("extensions have vanishing residual") {
  for (double s : {0.25, 0.5, 0.75}) {
    const FracParams p{s, 1};
    const SHarmonicFn fn(p, Ball{0.0, 1.0}, ExteriorData({Bump{-2.0, 0.4, 1.5}, Bump{1.8, 0.2, -0.5}}));
    const ResidualReport r = residual_report(fn, uniform_interior_grid(0.0, 0.9, 9), p);
    CHECK(r.points.size() == 9);
    CHECK(r.scale > 0.0);
    CHECK(r.relative_max <= 1e-6);
  }
}

TEST_CASE("a bump inside the ball is not s-harmonic") {
  const FracParams p{0.5, 1};
  const RealFn u = [](double x) { return bump_profile(2.0 * x); };
  FracLapSettings fl;
  fl.breakpoints = {-0.5, 0.5};
  const ResidualReport r = residual_report(u, 0.5, Ball{0.0, 1.0}, uniform_interior_grid(0.0, 0.9, 9), p, fl);
  CHECK(r.relative_max > 1.0);
}

TEST_CASE("support check and grid validation") {
  const FracParams p{0.5, 1};
  CHECK_THROWS_AS(frac_laplacian([](double) { return 1.0; }, 0.0, p, 1e-3, 2.0, QuadSettings{}),
                  SupportError);
  const SHarmonicFn fn(p, Ball{0.0, 1.0}, ExteriorData({Bump{2.5, 0.5, 1.0}}));
  const double outside[] = {0.95};
  CHECK_THROWS_AS(residual_report(fn, outside, p), GeometryError);
  CHECK_THROWS_AS(residual_report(fn, uniform_interior_grid(0.0, 0.9, 3), FracParams{0.25, 1}), InputError);
}

TEST_CASE("interior grid") {
  const auto g = uniform_interior_grid(0.0, 0.9, 9);
  REQUIRE(g.size() == 9);
  CHECK(g.front() > -0.9);
  CHECK(g.back() < 0.9);
  CHECK(g[4] == Approx(0.0).epsilon(1e-15));
}
