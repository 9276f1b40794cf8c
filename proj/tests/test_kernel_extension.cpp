#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "fracdense/errors.hpp"
#include "fracdense/kernel_extension.hpp"

using namespace fracdense;
using doctest::Approx;

namespace {

// Reference values from tests/oracles/oracle_values.py (mpmath, 25 digits).
constexpr double kC_half = 0.31830988618379067154;
constexpr double kC_quarter = 0.22507907903927651739;
constexpr double kKernel_0_2 = 0.091888149236965339035;
struct ExtRef {
  double s, at0, at_half;
};
constexpr ExtRef kExt[] = {
    {0.25, 0.036399454799921450032, 0.042539022595804046739},
    {0.5, 0.034348192777019031843, 0.037393358668643364959},
    {0.75, 0.01624413442056652916, 0.016473521578333943983},
};
constexpr double kDeriv_0_3[] = {0.0051016989120949967941, -0.040203059283371253943,
                                 -0.10059017062195187628};

SHarmonicFn standard(double s) {
  return SHarmonicFn(FracParams{s, 1}, Ball{0.0, 1.0}, ExteriorData({Bump{2.5, 0.5, 1.0}}));
}

}  // namespace

TEST_CASE("bump profile") {
  CHECK(bump_profile(0.0) == 1.0);
  CHECK(bump_profile(1.0) == 0.0);
  CHECK(bump_profile(-1.0) == 0.0);
  CHECK(bump_profile(0.5) == Approx(0.71653131057378925043).epsilon(1e-15));
  for (double t = -1.5; t <= 1.5; t += 0.01) {
    CHECK(bump_profile(t) >= 0.0);
    CHECK(bump_profile(t) <= 1.0);
  }
}

TEST_CASE("normalization constant") {
  CHECK(poisson_constant(FracParams{0.5, 1}) == Approx(kC_half).epsilon(1e-15));
  CHECK(poisson_constant(FracParams{0.25, 1}) == Approx(kC_quarter).epsilon(1e-15));
  CHECK(poisson_constant(FracParams{0.5, 1}) == Approx(1.0 / std::numbers::pi).epsilon(1e-15));
}

TEST_CASE("kernel values") {
  const FracParams p{0.5, 1};
  CHECK(poisson_kernel(p, Ball{0.0, 1.0}, 0.0, 2.0) == Approx(kKernel_0_2).epsilon(1e-15));
  const double c[] = {0.0}, x[] = {0.0}, y[] = {2.0};
  CHECK(poisson_kernel(p, c, 1.0, x, y) == Approx(kKernel_0_2).epsilon(1e-15));
  CHECK_THROWS_AS(poisson_kernel(p, Ball{0.0, 1.0}, 1.5, 2.0), GeometryError);
  CHECK_THROWS_AS(poisson_kernel(p, Ball{0.0, 1.0}, 0.0, 0.5), GeometryError);
  // General-n formula: positive and decaying in |y|.
  const double c3[] = {0.0, 0.0, 0.0}, x3[] = {0.1, 0.0, 0.0}, y3a[] = {2.0, 0.0, 0.0},
               y3b[] = {4.0, 0.0, 0.0};
  const FracParams p3{0.5, 3};
  CHECK(poisson_kernel(p3, c3, 1.0, x3, y3a) > poisson_kernel(p3, c3, 1.0, x3, y3b));
  CHECK(poisson_kernel(p3, c3, 1.0, x3, y3b) > 0.0);
}

TEST_CASE("kernel mass is one") {
  CHECK(kernel_mass(FracParams{0.5, 1}, Ball{0.0, 1.0}, 0.0) == Approx(1.0).epsilon(1e-10));
  CHECK(kernel_mass(FracParams{0.25, 1}, Ball{0.0, 1.0}, 0.9) == Approx(1.0).epsilon(1e-10));
  CHECK(kernel_mass(FracParams{0.75, 1}, Ball{3.0, 2.0}, 1.5) == Approx(1.0).epsilon(1e-10));
}

TEST_CASE("single-bump extension against the oracle") {
  for (const ExtRef& r : kExt) {
    const SHarmonicFn fn = standard(r.s);
    CHECK(fn(0.0) == Approx(r.at0).epsilon(1e-9));
    CHECK(fn(0.5) == Approx(r.at_half).epsilon(1e-9));
  }
}

TEST_CASE("extension equals the data outside the ball") {
  const SHarmonicFn fn = standard(0.5);
  CHECK(fn(2.5) == 1.0);
  CHECK(fn(2.75) == Approx(bump_profile(0.5)).epsilon(1e-15));
  CHECK(fn(10.0) == 0.0);
  CHECK(fn(-2.5) == 0.0);
  CHECK(fn.support_radius() == Approx(3.0));
}

TEST_CASE("extension is continuous at the boundary with C^s growth") {
  const SHarmonicFn fn = standard(0.5);
  CHECK(std::abs(fn(1.0 - 1e-10)) < 1e-4);
  CHECK(fn(1.0 - 1e-4) < fn(1.0 - 1e-2));
}

TEST_CASE("derivatives against the oracle") {
  const DerivativeVector d = extend_derivatives(standard(0.5), 0.3, 3);
  REQUIRE(d.size() == 4);
  CHECK(d[0] == Approx(standard(0.5)(0.3)).epsilon(1e-9));
  for (int k = 1; k <= 3; ++k) CHECK(d[static_cast<std::size_t>(k)] == Approx(kDeriv_0_3[k - 1]).epsilon(1e-8));
}

TEST_CASE("derivatives agree with finite differences of the values") {
  const SHarmonicFn fn = standard(0.25);
  const DerivativeVector d = extend_derivatives(fn, -0.2, 2);
  const double h = 1e-3;
  const double fd1 = (fn(-0.2 + h) - fn(-0.2 - h)) / (2 * h);
  const double fd2 = (fn(-0.2 + h) - 2 * fn(-0.2) + fn(-0.2 - h)) / (h * h);
  CHECK(d[1] == Approx(fd1).epsilon(1e-5));
  CHECK(d[2] == Approx(fd2).epsilon(1e-4));
}

TEST_CASE("validation") {
  CHECK_THROWS_AS(FracParams({1.0, 1}).validate(), BadExponent);
  CHECK_THROWS_AS(FracParams({0.0, 1}).validate(), BadExponent);
  CHECK_THROWS_AS(FracParams({0.5, 2}).require_line(), InputError);
  CHECK_THROWS_AS(SHarmonicFn(FracParams{0.5, 1}, Ball{0.0, 1.0}, ExteriorData({Bump{1.3, 0.3, 1.0}})),
                  GeometryError);
  const SHarmonicFn fn = standard(0.5);
  CHECK_THROWS_AS(extend_derivatives(fn, 0.99999, 1), TooCloseToBoundary);
  CHECK_THROWS_AS(extend_derivatives(fn, 0.0, 9), OrderTooHigh);
  CHECK_THROWS_AS(transform(fn, 2.0, 0.0, 1), BadEta);
  CHECK_THROWS_AS(transform(fn, 0.0, 0.0, 1), BadEta);
}

TEST_CASE("affine rescaling is exact") {
  const SHarmonicFn fn = standard(0.5);
  const SHarmonicFn g = rescale(fn, 0.25, 0.1, 3.0);
  for (double x : {-3.0, -1.0, 0.0, 0.7, 2.0}) {
    CHECK(g(x) == Approx(3.0 * fn(0.25 * x + 0.1)).epsilon(1e-11));
  }
  const SHarmonicFn t = transform(fn, 0.5, 0.0, 2);
  const DerivativeVector d0 = extend_derivatives(fn, 0.0, 2);
  const DerivativeVector d1 = extend_derivatives(t, 0.0, 2);
  // Chain rule: D^k u_eta(0) = eta^(k - 2) D^k v(0).
  CHECK(d1[2] == Approx(d0[2]).epsilon(1e-10));
  CHECK(d1[1] == Approx(2.0 * d0[1]).epsilon(1e-10));
}

TEST_CASE("empty data gives the zero function") {
  const SHarmonicFn fn(FracParams{0.5, 1}, Ball{0.0, 1.0}, ExteriorData{});
  CHECK(fn(0.3) == 0.0);
  CHECK(fn(3.0) == 0.0);
}
