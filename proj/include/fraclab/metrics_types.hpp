#pragma once

#include <cstddef>
#include <vector>

namespace fraclab {

/// Monte Carlo estimate with its standard error and sample count.
struct Estimate {
  double value = 0.0;
  double stderr_ = 0.0;
  std::size_t n = 0;
};

/// Log-log least-squares fit.
struct SlopeFit {
  std::vector<double> xs, ys;  // raw (positive) data
  double slope = 0.0;
  double intercept = 0.0;
  double stderr_ = 0.0;  // standard error of the slope
  double r2 = 1.0;
};

}  // namespace fraclab
