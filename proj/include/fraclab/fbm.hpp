#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "fraclab/metrics_types.hpp"

namespace fraclab {

/// Hurst index in (0, 1/2]; the H > 1/2 branch is outside every result this
/// library verifies and is rejected at construction.
struct HurstIndex {
  double value;
  explicit HurstIndex(double v);
};

/// Normalization constant C(H) fixing Var B^H_t = t^{2H} exactly.
double volterra_norm_const(double H);

/// Pointwise kernel K_H(t,s) for 0 < s < t (H < 1/2 two-term form; K == 1 at
/// H = 1/2). s >= t returns 0. s <= 0 is rejected: the endpoint is singular
/// and must be handled by cell averaging.
double volterra_kernel(double t, double s, HurstIndex H);

struct BrownianDriver {
  double dt = 0.0;
  int dim = 1;
  std::uint64_t seed = 0;
  std::vector<double> increments;  // n_steps * dim, step-major, N(0, dt) entries

  std::size_t n_steps() const { return increments.size() / dim; }
};

BrownianDriver sample_driver(std::size_t n_steps, double dt, int dim,
                             std::uint64_t seed);

/// Lower-triangular table of cell averages of K_H on the unit-step grid
/// (t_i = i): cell(i,j) ~ integral of K_H(i, s) over [j, j+1]. Physical grids
/// of step dt reuse a table through the exact scaling
/// K_H(dt*i, dt*s) = dt^{H-1/2} K_H(i, s).
class VolterraKernelTable {
 public:
  static VolterraKernelTable build(double H, std::size_t n_steps, int workers = 0);

  double hurst() const { return H_; }
  std::size_t n_steps() const { return n_; }
  /// Row i (1-based time index): i unit-grid cell averages, j = 0..i-1.
  std::span<const double> row(std::size_t i) const;
  /// dt^{H-1/2}; multiplies unit-grid cells into physical ones.
  double scale(double dt) const;

  /// Discrete conditional variance sigma^2(t_s, t_r) = Var(B_r - E^s B_r) of
  /// the table-generated process, in physical units.
  double conditional_variance(double dt, std::size_t s_idx, std::size_t r_idx) const;

  void save(const std::string& path) const;
  /// Loads and validates the embedded checksum; returns nullptr on any
  /// mismatch (missing file, wrong key, corruption).
  static std::shared_ptr<const VolterraKernelTable> load(const std::string& path,
                                                         double H, std::size_t n_steps);

 private:
  double H_ = 0.5;
  std::size_t n_ = 0;
  std::vector<double> cells_;  // packed rows: row i starts at i*(i-1)/2
};

/// Process-wide memoized table (keyed by H and n_steps).
std::shared_ptr<const VolterraKernelTable> kernel_table(double H, std::size_t n_steps,
                                                        int workers = 0);

struct FbmPath {
  double dt = 0.0;
  int dim = 1;
  std::vector<double> times;   // n+1 nodes
  std::vector<double> values;  // (n+1)*dim, values at node 0 are 0
  BrownianDriver driver;
  std::shared_ptr<const VolterraKernelTable> table;

  std::size_t n_steps() const { return driver.n_steps(); }
  double hurst() const { return table->hurst(); }
  double value(std::size_t node, int component = 0) const {
    return values[node * dim + component];
  }
};

/// Discrete Volterra transform of the driver; deterministic given the table.
FbmPath fbm_from_driver(BrownianDriver driver,
                        std::shared_ptr<const VolterraKernelTable> table);

FbmPath sample_fbm(std::size_t n_steps, double dt, HurstIndex H, int dim,
                   std::uint64_t seed);

/// Exact-law generator through the Cholesky factor of the fBM covariance;
/// covariance-test oracle only (no driver is produced).
std::vector<double> sample_fbm_cholesky(std::span<const double> times, double H,
                                        std::uint64_t seed);

/// (1/2)(s^{2H} + t^{2H} - |t-s|^{2H}).
double fbm_covariance(double s, double t, double H);

/// E[B_r | F_s] of the discrete process, from the stored driver. Node indices
/// must satisfy s_idx <= r_idx.
std::vector<double> conditional_mean(const FbmPath& path, std::size_t s_idx,
                                     std::size_t r_idx);

/// Calibrated constant in the Brownian-shift transform; determined once per H
/// by the forward/inverse self-consistency least squares and memoized.
double girsanov_c(double H);

/// Transformed Brownian shift v for a drift perturbation beta of the fBM:
/// v_t = c_H t^{H-1/2} int_0^t (t-s)^{-H-1/2} s^{1/2-H} beta_s ds (H < 1/2),
/// v = beta at H = 1/2. beta holds node values on the uniform grid
/// times[0..n]; v is returned on nodes 0, stride, 2*stride, ...
/// Product integration: beta piecewise linear, singular factor integrated
/// in closed form, so the s = t endpoint is exact.
std::vector<double> girsanov_v(std::span<const double> times,
                               std::span<const double> beta, int dim, HurstIndex H,
                               std::size_t stride = 1);

/// Pinsker/KL total-variation bound (1/2) sqrt(int_0^T E|v_s|^2 ds) from an
/// ensemble of v paths (each (n+1)*dim values on common nodes v_times).
Estimate pinsker_tv_bound(std::span<const double> v_times,
                          std::span<const std::vector<double>> v_ensemble, int dim);

/// CSV export: t, value components, driver increments.
void write_fbm_csv(const std::string& path, const FbmPath& p);

}  // namespace fraclab
