#pragma once

#include <span>

#include "fraclab/metrics_types.hpp"

namespace fraclab {

/// Sample mean with standard error.
Estimate mean_estimate(std::span<const double> xs);

/// Exact W1 between real-valued empirical laws (sorted matching). Unequal
/// sample counts are handled by evaluating both quantile functions on the
/// finer midpoint grid.
double wasserstein1_1d(std::span<const double> a, std::span<const double> b);

/// Synchronous-coupling upper bound for W_{||.||^1}: mean of min(gap, 1)
/// over paired sup-norm gaps.
Estimate sync_coupling_wbound(std::span<const double> sup_gaps);

/// Binned total-variation estimate on a common range (pooled mean +- 5
/// pooled standard deviations).
double tv_histogram(std::span<const double> a, std::span<const double> b, int bins = 64);

/// Exact grid p-variation seminorm via dynamic programming over all grid
/// partitions, O(N^2).
double p_variation(std::span<const double> values, double p);

/// Least squares on (log x, log y); rejects nonpositive data and needs >= 3
/// distinct abscissae.
SlopeFit scaling_exponent(std::span<const double> xs, std::span<const double> ys);

}  // namespace fraclab
