#include "fraclab/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace fraclab {

std::vector<double> linspace(double a, double b, std::size_t n_nodes) {
  if (n_nodes < 2) throw std::invalid_argument("linspace: need at least 2 nodes");
  std::vector<double> out(n_nodes);
  const double h = (b - a) / static_cast<double>(n_nodes - 1);
  for (std::size_t i = 0; i < n_nodes; ++i) out[i] = a + h * static_cast<double>(i);
  out.back() = b;
  return out;
}

GridFunction GridFunction::uniform(double a, double b, std::size_t n_nodes) {
  GridFunction g;
  g.grid = linspace(a, b, n_nodes);
  g.values.assign(n_nodes, 0.0);
  return g;
}

GridFunction GridFunction::sample(double a, double b, std::size_t n_nodes,
                                  const std::function<double(double)>& f) {
  GridFunction g = uniform(a, b, n_nodes);
  for (std::size_t i = 0; i < n_nodes; ++i) g.values[i] = f(g.grid[i]);
  return g;
}

double GridFunction::spacing() const {
  if (grid.size() < 2) throw std::invalid_argument("GridFunction: single-point grid");
  return grid[1] - grid[0];
}

double GridFunction::sup_norm() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

void GridFunction::validate() const {
  if (grid.empty() || grid.size() != values.size())
    throw std::invalid_argument("GridFunction: grid/values size mismatch");
  for (std::size_t i = 0; i + 1 < grid.size(); ++i)
    if (!(grid[i] < grid[i + 1]))
      throw std::invalid_argument("GridFunction: grid not strictly increasing");
  for (double v : values)
    if (!std::isfinite(v)) throw std::invalid_argument("GridFunction: non-finite value");
}

}  // namespace fraclab
