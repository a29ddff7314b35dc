#pragma once

#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace fraclab {

enum class DriftKind { dirac_comb, signed_measure, holder_derivative, smooth };

/// Symbolic drift b in a negative-regularity Holder-Besov class. All kinds
/// admit closed-form Gaussian smoothing, so mollifications and their further
/// heat smoothings are evaluated exactly (no quadrature except for the smooth
/// kind, which uses Gauss-Hermite).
struct DistributionalDrift {
  DriftKind kind = DriftKind::smooth;
  double nominal_alpha = -0.1;
  int dimension = 1;
  double scale = 1.0;
  /// Pre-applied Gaussian smoothing variance; lets a mollified drift be reused
  /// as a drift (semigroup composition stays exact).
  double base_tau = 0.0;

  // dirac_comb and point atoms of a signed measure: (mass, location)
  std::vector<std::pair<double, double>> atoms;
  // absolutely continuous pieces of a signed measure: uniform on [a,b] with
  // total weight w (density w/(b-a))
  struct UniformPiece {
    double a, b, weight;
  };
  std::vector<UniformPiece> pieces;

  // holder_derivative: b = F' with F(x) = sum_j 2^{-j*gamma} cos(2^j pi x)
  double holder_gamma = 0.5;
  int series_terms = 48;

  // smooth: bounded callable
  std::function<double(double)> fn;

  std::string id;  // catalog identifier, echoed into reports

  /// G_tau b evaluated at x, with tau counted on top of base_tau.
  /// tau + base_tau must be positive except for smooth and density-only
  /// measures, where 0 is allowed.
  double heat_eval(double tau, double x) const;

  DistributionalDrift scaled(double c) const;

  /// Largest |x| at which the drift is non-negligible; used to size
  /// evaluation boxes.
  double support_radius() const;

  bool is_nonneg_measure() const;
};

/// Smoothed drift b_n = G_{1/n} b.
struct MollifiedDrift {
  DistributionalDrift source;
  int level = 1;

  double operator()(double x) const { return source.heat_eval(1.0 / level, x); }
  /// G_{extra_var} b_n (x); exact Gaussian-semigroup composition.
  double smoothed(double extra_var, double x) const {
    return source.heat_eval(1.0 / level + extra_var, x);
  }
  /// The mollification reinterpreted as a drift (base_tau absorbed).
  DistributionalDrift as_drift() const;
};

MollifiedDrift mollify(const DistributionalDrift& b, int n);

/// Parses catalog identifiers:
///   dirac@X:mass=M        single atom (mass may be negative)
///   dirac-pair@X:mass=M   atoms +M at X and -M at -X
///   measure:uniform[A,B]  nonnegative measure, total mass 1
///   weierstrass:gamma=G:deriv
///   smooth:zero | smooth:const=C | smooth:cos | smooth:neg-x | smooth:bump
DistributionalDrift parse_drift(const std::string& id);

/// Catalog identifiers shipped with the library.
std::vector<std::string> drift_catalog();

/// Heat-surrogate Besov norm of the drift: max over t_levels of
/// t^{-alpha/2} sup_x |G_t b|, with the sup taken over an evaluation box
/// covering the drift support.
double besov_norm_neg(const DistributionalDrift& b, double alpha,
                      std::span<const double> t_levels);
double besov_norm_neg(const DistributionalDrift& b, double alpha);

/// Surrogate C^{alpha'} distance between two drifts: both are smoothed at a
/// fine common level first, then the difference norm is measured.
double c_alpha_minus_distance(const DistributionalDrift& b, const DistributionalDrift& g,
                              double alpha_prime);

/// Weak well-posedness range: alpha > 1/2 - 1/(2H), strict.
bool admissible_weak(double alpha, double H);

/// d=1 strong well-posedness: (1 + alpha*H)(alpha + 1/(2H)) > 1/2, or b a
/// nonnegative measure. Meaningful on top of admissible_weak.
bool admissible_strong_d1(double alpha, double H, bool nonneg_measure);

}  // namespace fraclab
