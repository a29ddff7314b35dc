#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace fraclab {

/// Discrete carrier for f : [a,b] -> R sampled on a strictly increasing grid.
struct GridFunction {
  std::vector<double> grid;
  std::vector<double> values;

  static GridFunction uniform(double a, double b, std::size_t n_nodes);
  static GridFunction sample(double a, double b, std::size_t n_nodes,
                             const std::function<double(double)>& f);

  std::size_t size() const { return grid.size(); }
  /// Node spacing; requires a uniform grid with >= 2 nodes.
  double spacing() const;
  double sup_norm() const;
  void validate() const;  // finite values, strictly increasing grid
};

/// Uniform nodes including both endpoints.
std::vector<double> linspace(double a, double b, std::size_t n_nodes);

}  // namespace fraclab
