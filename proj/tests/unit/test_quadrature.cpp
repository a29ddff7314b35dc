#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "fraclab/quadrature.hpp"

using namespace fraclab;

TEST_CASE("gauss-legendre integrates polynomials exactly") {
  auto cubic = [](double x) { return 3.0 * x * x * x - x + 2.0; };
  CHECK(quad::gauss_legendre(cubic, -1.0, 2.0, 4) ==
        doctest::Approx(3.0 * (16.0 - 1.0) / 4.0 - (4.0 - 1.0) / 2.0 + 2.0 * 3.0)
            .epsilon(1e-13));
}

TEST_CASE("panels and adaptive agree on a smooth integrand") {
  auto f = [](double x) { return std::exp(-x * x); };
  const double a = quad::gauss_legendre_panels(f, 0.0, 3.0, 8, 16);
  const double b = quad::adaptive(f, 0.0, 3.0, 1e-12);
  CHECK(a == doctest::Approx(b).epsilon(1e-11));
  CHECK(a == doctest::Approx(0.8862269254527579).epsilon(1e-10));  // sqrt(pi)/2 erf(3)
}

TEST_CASE("adaptive handles mild endpoint steepness") {
  // int_0^1 1/(2 sqrt(x)) dx = 1 after x = w^2 regularization by the caller.
  auto g = [](double w) { return 1.0; };
  CHECK(quad::adaptive(g, 0.0, 1.0, 1e-12) == doctest::Approx(1.0));
  auto steep = [](double x) { return std::pow(x, -0.25); };
  CHECK(quad::adaptive(steep, 1e-10, 1.0, 1e-9, 40) ==
        doctest::Approx(4.0 / 3.0).epsilon(1e-5));
}

TEST_CASE("gauss-hermite mean matches moments of the normal law") {
  CHECK(quad::gauss_hermite_mean([](double x) { return x * x; }, 0.0, 2.0) ==
        doctest::Approx(4.0).epsilon(1e-12));
  CHECK(quad::gauss_hermite_mean([](double x) { return std::cos(x); }, 0.0, 1.0) ==
        doctest::Approx(std::exp(-0.5)).epsilon(1e-10));
}
