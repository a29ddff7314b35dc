#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "fraclab/gaussian.hpp"
#include "fraclab/quadrature.hpp"
#include "oracles.hpp"

using namespace fraclab;

TEST_CASE("gamma density closed forms") {
  CHECK(gamma_density(1.0, 0.0) == doctest::Approx(0.3989422804014327).epsilon(1e-14));
  const double p2[2] = {0.0, 0.0};
  CHECK(gamma_density(1.0, std::span<const double>(p2, 2)) ==
        doctest::Approx(0.15915494309189535).epsilon(1e-14));
  CHECK(gamma_density(0.7, 1.3) == gamma_density(0.7, -1.3));
  CHECK_THROWS_AS(gamma_density(0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(gamma_density(-1.0, 1.0), std::invalid_argument);
}

TEST_CASE("heat kernels integrate to one") {
  for (DomainKind bc : {DomainKind::periodic, DomainKind::neumann}) {
    HeatKernelSpec spec{bc, 1, 8, 256};
    for (double t : {0.01, 0.1, 1.0})
      for (double x : {0.0, 0.31, 0.5, 0.97}) {
        const double mass = quad::gauss_legendre_panels(
            [&](double y) { return heat_kernel(t, x, y, spec); }, 0.0, 1.0, 16, 32);
        CHECK(mass == doctest::Approx(1.0).epsilon(1e-10));
      }
  }
}

TEST_CASE("neumann kernel is symmetric, domain is validated") {
  HeatKernelSpec spec{DomainKind::neumann, 1, 8, 256};
  CHECK(heat_kernel(0.05, 0.2, 0.7, spec) == heat_kernel(0.05, 0.7, 0.2, spec));
  CHECK_THROWS_AS(heat_kernel(0.05, -0.1, 0.5, spec), std::invalid_argument);
  CHECK_THROWS_AS(heat_kernel(0.0, 0.1, 0.5, spec), std::invalid_argument);
}

TEST_CASE("periodic kernel flattens at large t and matches the Fourier oracle") {
  HeatKernelSpec spec{DomainKind::periodic, 1, 8, 256};
  CHECK(heat_kernel(10.0, 0.3, 0.9, spec) == doctest::Approx(1.0).epsilon(1e-8));
  for (double t : {0.05, 0.2})
    for (double x : {0.1, 0.6})
      CHECK(heat_kernel(t, x, 0.25, spec) ==
            doctest::Approx(oracles::periodic_kernel_fourier(t, x, 0.25)).epsilon(1e-10));
}

TEST_CASE("doubling the image truncation changes nothing above 1e-12") {
  for (DomainKind bc : {DomainKind::periodic, DomainKind::neumann}) {
    HeatKernelSpec s8{bc, 1, 8, 256}, s16{bc, 1, 16, 256};
    for (double t : {0.01, 0.5, 1.0})
      CHECK(std::abs(heat_kernel(t, 0.3, 0.8, s8) - heat_kernel(t, 0.3, 0.8, s16)) <
            1e-12);
  }
}

TEST_CASE("semigroup identity, constants, and composition") {
  HeatKernelSpec spec{DomainKind::periodic, 1, 8, 256};
  GridFunction f = GridFunction::sample(0.0, 1.0, 257, [](double x) {
    return std::sin(2.0 * M_PI * x) + 0.3 * std::cos(6.0 * M_PI * x);
  });
  const auto id = apply_semigroup(f, 0.0, spec);
  for (std::size_t i = 0; i < f.size(); ++i) CHECK(id.values[i] == f.values[i]);

  GridFunction c = GridFunction::sample(0.0, 1.0, 257, [](double) { return 0.7; });
  const auto cs = apply_semigroup(c, 0.3, spec);
  for (double v : cs.values) CHECK(v == doctest::Approx(0.7).epsilon(1e-12));

  const auto ab = apply_semigroup(apply_semigroup(f, 0.07, spec), 0.13, spec);
  const auto once = apply_semigroup(f, 0.2, spec);
  for (std::size_t i = 0; i < f.size(); ++i)
    CHECK(ab.values[i] == doctest::Approx(once.values[i]).epsilon(1e-8));
}

TEST_CASE("spectral and quadrature semigroup routes agree on smooth data") {
  for (DomainKind bc : {DomainKind::periodic, DomainKind::neumann}) {
    HeatKernelSpec spec{bc, 1, 8, 256};
    GridFunction f = GridFunction::sample(0.0, 1.0, 257, [&](double x) {
      return bc == DomainKind::periodic ? std::cos(2.0 * M_PI * x)
                                        : std::cos(3.0 * M_PI * x);
    });
    const auto a = apply_semigroup(f, 0.1, spec, SemigroupRoute::spectral);
    const auto b = apply_semigroup(f, 0.1, spec, SemigroupRoute::quadrature);
    for (std::size_t i = 0; i < f.size(); ++i)
      CHECK(a.values[i] == doctest::Approx(b.values[i]).epsilon(1e-8));
  }
}

TEST_CASE("besov surrogate: zero, homogeneity, alpha monotonicity") {
  GridFunction z = GridFunction::uniform(-2.0, 2.0, 129);
  CHECK(besov_norm_neg(z, -1.0) == 0.0);

  GridFunction f = GridFunction::sample(-2.0, 2.0, 257,
                                        [](double x) { return std::exp(-4.0 * x * x); });
  GridFunction f3 = f;
  for (double& v : f3.values) v *= -3.0;
  CHECK(besov_norm_neg(f3, -0.5) ==
        doctest::Approx(3.0 * besov_norm_neg(f, -0.5)).epsilon(1e-12));

  const double n1 = besov_norm_neg(f, -1.0);
  const double n2 = besov_norm_neg(f, -0.5);
  CHECK(n2 >= n1);  // t <= 1 levels only

  CHECK_THROWS_AS(besov_norm_neg(f, 0.1), std::invalid_argument);
}
