#pragma once

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "fraclab/drift.hpp"
#include "fraclab/fbm.hpp"
#include "fraclab/metrics_types.hpp"

namespace fraclab {

/// Two-parameter germ A_{s,t}; evaluator(s,s) must be 0. The conditional flag
/// records that A_{s,t} is measurable with respect to time-s information.
struct Germ {
  std::function<double(double, double)> eval;
  bool conditional = false;
};

struct SewingReport {
  std::vector<int> levels;
  std::vector<double> sums;    // dyadic Riemann sums per level
  std::vector<double> cauchy;  // |S_{k+1} - S_k|
  bool converged = false;      // geometric decay across the last increments
  double fitted_defect_exponent = 0.0;  // slope of log |dS| against log mesh
  double limit = 0.0;                   // finest-level sum
};

/// Dyadic-refinement sewing integrator on [s,t]. Non-convergence is reported,
/// not thrown.
SewingReport sew(const Germ& germ, double s, double t, int max_level);

/// delta A_{s,u,t} = A_{s,t} - A_{s,u} - A_{u,t}.
double delta_defect(const Germ& germ, double s, double u, double t);

/// Conditional-expectation germ for drift functionals of fBM:
/// A_{s,t} = int_s^t [G_{sigma^2(s,r)} f](E^s B^H_r + phi_s) dr, with the
/// conditional mean and variance taken from the stored driver and kernel
/// table, and the Gaussian smoothing evaluated in closed form. phi holds node
/// values (empty = zero shift). s,t must be grid times of the path.
Germ conditional_drift_germ(const MollifiedDrift& f, std::vector<double> phi,
                            std::shared_ptr<const FbmPath> fbm);

struct DefectSample {
  double s, u, t;
  double defect;
};

struct ControlPowerFit {
  bool exact_additive = false;
  SlopeFit fit;  // log |defect| against log w(s,t); slope is the fitted 1+eps
};

/// Fits |delta A| against a control w(s,t); reports exact additivity when all
/// sampled defects vanish.
ControlPowerFit control_power_check(std::span<const DefectSample> samples,
                                    const std::function<double(double, double)>& control);

}  // namespace fraclab
