#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "fraclab/drift.hpp"
#include "fraclab/gaussian.hpp"
#include "fraclab/grid.hpp"
#include "fraclab/metrics_types.hpp"

namespace fraclab {

enum class Bc { periodic, neumann };

/// Real eigenbasis of (1/2) d^2/dx^2 on [0,1]. Periodic keeps the constant
/// plus cos/sin pairs up to frequency modes/2; Neumann keeps cosines
/// k = 0..modes. Projections use trapezoid quadrature on the uniform grid,
/// which is exact for band-limited functions below the aliasing cap.
class SpectralBasis {
 public:
  static std::shared_ptr<const SpectralBasis> make(Bc bc, int modes,
                                                   std::size_t n_nodes);

  Bc bc() const { return bc_; }
  int modes() const { return modes_; }
  std::size_t n_nodes() const { return n_nodes_; }
  std::size_t n_basis() const { return lambda_.size(); }
  const std::vector<double>& grid() const { return grid_; }
  std::span<const double> eigenvalues() const { return lambda_; }
  double basis_value(std::size_t k, std::size_t node) const {
    return phi_[k * n_nodes_ + node];
  }

  void to_modes(std::span<const double> values, std::span<double> coeffs) const;
  void to_values(std::span<const double> coeffs, std::span<double> values) const;

 private:
  Bc bc_ = Bc::periodic;
  int modes_ = 0;
  std::size_t n_nodes_ = 0;
  std::vector<double> grid_;
  std::vector<double> lambda_;
  std::vector<double> phi_;    // n_basis x n_nodes
  std::vector<double> quadw_;  // projection weights
};

struct SheConfig {
  GridFunction u0;  // empty grid means u0 == 0
  DistributionalDrift drift;
  int n_moll = 256;
  Bc bc = Bc::periodic;
  int modes = 128;
  std::size_t n_nodes = 257;
  std::size_t n_steps = 1024;
  double dt = 1.0 / 1024.0;
  std::uint64_t seed = 0;
};

/// Condition for the weak-uniqueness regime (alpha > -3/2).
bool she_config_admissible(const SheConfig& cfg);

/// Per-step, per-mode OU innovations driving the spectral Galerkin solvers;
/// one noise realization shared by coupled solves.
struct SheNoise {
  std::shared_ptr<const SpectralBasis> basis;
  double dt = 0.0;
  std::vector<double> eta;  // n_steps x n_basis

  std::size_t n_steps() const { return eta.size() / basis->n_basis(); }
};

SheNoise sample_she_noise(std::shared_ptr<const SpectralBasis> basis,
                          std::size_t n_steps, double dt, std::uint64_t seed);

/// Time-space field with its retained spectral state; values are always the
/// inverse transform of modes.
struct SpaceTimeField {
  std::vector<double> times;
  std::shared_ptr<const SpectralBasis> basis;
  std::vector<double> values;  // (nt+1) x n_nodes
  std::vector<double> modes;   // (nt+1) x n_basis

  std::size_t n_steps() const { return times.size() - 1; }
  double value(std::size_t t_idx, std::size_t node) const {
    return values[t_idx * basis->n_nodes() + node];
  }
  std::span<const double> mode_slice(std::size_t t_idx) const {
    return {modes.data() + t_idx * basis->n_basis(), basis->n_basis()};
  }
};

/// Stochastic convolution: every retained mode is an exact-law OU process
/// started at 0.
SpaceTimeField stochastic_convolution(const SheNoise& noise);
SpaceTimeField sample_stochastic_convolution(const SheConfig& cfg, std::uint64_t seed);

/// Exponential-Euler mild solver: u_{i+1} = P_dt(u_i + dt b_n(u_i)) + dV_i.
SpaceTimeField solve_mild(const SheConfig& cfg, const SheNoise& noise);

/// Drift component K = u - P_t u0 - V, with V rebuilt from the same noise.
SpaceTimeField drift_component(const SheConfig& cfg, const SpaceTimeField& u,
                               const SheNoise& noise);

SpaceTimeField field_diff(const SpaceTimeField& a, const SpaceTimeField& b);

struct SheCouplingRun {
  SpaceTimeField u;        // solution under b_n
  SpaceTimeField v_tilde;  // solution under g with the lambda-push
  SpaceTimeField v;        // strong solution under g, same noise
  double lambda = 0.0;
  double sup_gap = 0.0;  // sup over grid of |u - v_tilde|
};

SheCouplingRun coupled_field(const SheConfig& b_cfg, const MollifiedDrift& g,
                             double lambda, const SheNoise& noise);

/// Weighted norm sup_{t,x} |P_{2-t} f_t(x)| through the spectral route.
double weighted_norm(const SpaceTimeField& f);

struct ShePinskerReport {
  Estimate paper_bound;  // (1/2) lambda Leb(D)^{1/2} C^{0,0}L_2 norm of u - v_tilde
  Estimate kl_direct;    // (1/2) sqrt(int int E beta^2)
  double hist_tv = 0.0;  // marginals of (v, v_tilde) at (t,x) = (1, 1/2)
  double lambda = 0.0;
  std::size_t n = 0;
};

/// Streaming accumulator so large ensembles never hold all fields at once.
class ShePinskerAccumulator {
 public:
  void add(const SheCouplingRun& run);
  ShePinskerReport report(int bins = 64) const;

 private:
  std::size_t n_ = 0;
  double lambda_ = 0.0;
  double dt_ = 0.0;
  std::vector<double> gap_sq_sum_;  // per (t,x)
  std::vector<double> kl_members_;  // per member int int beta^2
  std::vector<double> marg_v_, marg_vt_;
};

/// Ensemble report; refuses fewer than 100 runs.
ShePinskerReport pinsker_bound_she(std::span<const SheCouplingRun> runs, int bins = 64);

struct LipschitzCheck {
  std::vector<double> t_levels;
  std::vector<double> fitted;  // per t: max over probes and pairs of the ratio
  double max_constant = 0.0;
};

/// max over (x,y) pairs of |P_t f(x) - P_t f(y)| t^{1/2} / |x-y| for sup-norm-1
/// probes; quadrature route so discontinuous probes are handled exactly.
LipschitzCheck kernel_lipschitz_check(const HeatKernelSpec& spec,
                                      std::span<const double> t_levels,
                                      std::span<const GridFunction> probes);

/// One noise realization's exponentially weighted smoothed occupation
/// functionals int_s^t int_D e^{-lambda(t'-r)} p_{t'-r}(x,y) f(V_r(y)) dy dr,
/// evaluated at x = grid[x_node] for every lambda and every snapshot time
/// t' in t_snap_idx. Returned as [snapshot][lambda].
std::vector<std::vector<double>> she_exp_functional(
    const SheNoise& noise, std::size_t s_idx, std::span<const std::size_t> t_snap_idx,
    std::span<const double> lambdas, const MollifiedDrift& f, std::size_t x_node);

}  // namespace fraclab
