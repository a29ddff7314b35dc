#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "fraclab/drift.hpp"
#include "fraclab/fbm.hpp"
#include "fraclab/metrics_types.hpp"

namespace fraclab {

struct SdeConfig {
  std::vector<double> x0{0.0};
  DistributionalDrift drift;
  int n_moll = 256;
  double hurst = 0.25;
  std::size_t n_steps = 1024;
  double dt = 1.0 / 1024.0;
  std::uint64_t seed = 0;

  int dim() const { return static_cast<int>(x0.size()); }
};

/// Weak-uniqueness parameter gate for the configured (alpha, H); supercritical
/// runs are allowed for contrast, callers surface the flag.
bool sde_config_admissible(const SdeConfig& cfg);

struct SamplePath {
  std::vector<double> times;
  std::vector<double> x;    // (n+1) * dim
  std::vector<double> psi;  // x - x0 - B^H, accumulated exactly
  std::shared_ptr<const FbmPath> fbm;
  int dim = 1;

  double value(std::size_t node, int c = 0) const { return x[node * dim + c]; }
  double psi_value(std::size_t node, int c = 0) const { return psi[node * dim + c]; }
  std::size_t n_steps() const { return times.size() - 1; }
};

/// Left-point explicit Euler for dX = b_n(X) dt + dB^H. The fbm grid must
/// match the config grid. Throws std::runtime_error (with the step index)
/// if the state leaves the finite range.
SamplePath solve_euler(const SdeConfig& cfg, std::shared_ptr<const FbmPath> fbm);

/// Same scheme over an arbitrary vector field; used by tests and the coupled
/// solvers.
SamplePath solve_euler_callable(
    std::span<const double> x0,
    const std::function<void(std::span<const double>, std::span<double>)>& b,
    std::shared_ptr<const FbmPath> fbm);

enum class CouplingScheme {
  explicit_euler,
  exponential  // integrating factor exp(-lambda t) on the push term
};

struct CouplingRun {
  SamplePath X;        // solution under b_n
  SamplePath Y_tilde;  // solution under g with the lambda-push
  SamplePath Y;        // strong solution under g, same noise (for TV sanity)
  double lambda = 0.0;
  std::vector<double> B_tilde;  // transformed noise nodes, (n+1)*dim
  std::vector<double> v;        // Girsanov weight on v_times
  std::vector<double> v_times;
  double sup_gap = 0.0;  // sup_t |X - Y_tilde|
};

/// Generalized-coupling pair driven by one noise realization. Requires
/// lambda > 1 and dt < 1/(2 lambda) (explicit schemes are unstable beyond).
CouplingRun coupled_pair(const SdeConfig& b_cfg, const MollifiedDrift& g,
                         std::span<const double> y0, double lambda,
                         std::shared_ptr<const FbmPath> fbm,
                         CouplingScheme scheme = CouplingScheme::explicit_euler,
                         std::size_t v_stride = 1);

struct GirsanovTvReport {
  Estimate pinsker_direct;  // (1/2) sqrt(int E|v|^2) from the stored weights
  Estimate paper_bound;     // (1/2) c_H B(3/2-H,1/2-H) lambda ||sup gap||_{L2}
  double hist_tv = 0.0;     // binned TV of the time-1 marginals of (Y, Y_tilde)
  double lambda = 0.0;
  std::size_t n = 0;
};

/// Ensemble Girsanov/Pinsker total-variation report; refuses fewer than 100
/// runs (Monte Carlo error dominates below that).
GirsanovTvReport girsanov_tv_report(std::span<const CouplingRun> runs, int bins = 64);

/// Pointwise minimum of two d=1 solutions sharing one driver; psi is rebuilt
/// against the common noise.
SamplePath min_solution(const SamplePath& x1, const SamplePath& x2);

/// sup_t | int_0^t g(X_r) dr - psi_t | by left-point quadrature (d=1).
double residual(const SamplePath& path, const MollifiedDrift& g);

/// Empirical C^kappa L_m seminorm of an ensemble of (n+1)-node scalar paths
/// over dyadic pairs. Needs m >= 2 and at least 100 members.
double holder_seminorm_lm(std::span<const std::vector<double>> ensemble,
                          std::span<const double> times, double kappa, double m);

/// int_s^t e^{-lambda(t-r)} f(B^H_r + phi_r) dr, left-point quadrature; phi
/// empty means zero shift, size 1 means a constant shift.
double exp_weighted_functional(const MollifiedDrift& f, std::span<const double> phi,
                               double lambda, const FbmPath& fbm, std::size_t s_idx,
                               std::size_t t_idx);

}  // namespace fraclab
