#pragma once

#include <functional>

namespace fraclab::quad {

/// Fixed-order Gauss-Legendre rule on [a,b]. Supported orders: 4, 8, 16, 32.
double gauss_legendre(const std::function<double(double)>& f, double a, double b,
                      int order = 16);

/// Composite Gauss-Legendre over equal panels.
double gauss_legendre_panels(const std::function<double(double)>& f, double a, double b,
                             int panels, int order = 16);

/// Adaptive bisection built on GL16/GL32 error estimates. Integrand must be
/// finite on the open interval; endpoint singularities should be removed by
/// substitution before calling.
double adaptive(const std::function<double(double)>& f, double a, double b,
                double tol = 1e-10, int max_depth = 24);

/// Gauss-Hermite expectation: returns E f(mu + sigma*Z) for Z ~ N(0,1),
/// exact for polynomials of degree <= 65.
double gauss_hermite_mean(const std::function<double(double)>& f, double mu, double sigma);

}  // namespace fraclab::quad
