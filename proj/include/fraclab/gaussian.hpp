#pragma once

#include <span>
#include <vector>

#include "fraclab/grid.hpp"

namespace fraclab {

enum class DomainKind { whole_line, periodic, neumann };

/// Heat kernel selector: periodic and Neumann kernels live on [0,1] and are
/// evaluated by truncated image sums; whole_line is the Gaussian on R^d.
struct HeatKernelSpec {
  DomainKind domain = DomainKind::whole_line;
  int dim = 1;               // whole_line only
  int image_truncation = 8;  // image terms per side; widened automatically for large t
  int spectral_modes = 256;  // used by the spectral semigroup route
};

/// Gaussian density of a d-dimensional N(0, t*I) vector at x.
double gamma_density(double t, std::span<const double> x);
/// Scalar convenience overload (d = 1).
double gamma_density(double t, double x);

/// Kernel value p_t(x,y) for the given spec. Periodic/Neumann require
/// x,y in [0,1]; whole_line treats (x,y) as scalar positions on R.
double heat_kernel(double t, double x, double y, const HeatKernelSpec& spec);

enum class SemigroupRoute { spectral, quadrature };

/// Applies the heat semigroup at time t to a grid function. t = 0 is the
/// identity. Periodic/Neumann default to the spectral route (exact per-mode
/// decay); whole_line uses trapezoid quadrature of the Gaussian kernel against
/// f extended by zero outside its grid.
GridFunction apply_semigroup(const GridFunction& f, double t, const HeatKernelSpec& spec,
                             SemigroupRoute route = SemigroupRoute::spectral);

/// Mollification levels 2^-k, k = 0..16.
std::vector<double> default_t_levels();

/// Heat-semigroup surrogate for the negative-regularity Besov norm:
/// max over t_levels of t^{-alpha/2} * sup |G_t f| on the grid. Whole-line
/// smoothing; alpha must be negative.
double besov_norm_neg(const GridFunction& f, double alpha,
                      std::span<const double> t_levels);
double besov_norm_neg(const GridFunction& f, double alpha);

}  // namespace fraclab
