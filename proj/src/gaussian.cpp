#include "fraclab/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fraclab {

namespace {

constexpr double kTwoPi = 6.2831853071795864769;

int effective_truncation(double t, int requested) {
  // Image tails decay like exp(-n^2/(2t)); widen the window once t exceeds 1
  // so the dropped tail stays below 1e-12.
  if (t <= 1.0) return requested;
  return std::max(requested, static_cast<int>(std::ceil(6.0 * std::sqrt(t))) + 2);
}

void require_unit_interval(double x, const char* what) {
  if (x < 0.0 || x > 1.0)
    throw std::invalid_argument(std::string(what) + ": point outside [0,1]");
}

struct SpectralBasis1d {
  // periodic: [1, sqrt2*cos(2pi k x), sqrt2*sin(2pi k x)], k = 1..K
  // neumann:  [1, sqrt2*cos(pi k x)], k = 1..M
  std::vector<double> lambda;  // eigenvalues of -(1/2) d^2/dx^2
  std::vector<double> phi;     // n_basis x n_nodes, row-major
  std::size_t n_basis = 0;
  std::size_t n_nodes = 0;
};

SpectralBasis1d make_basis(DomainKind domain, std::span<const double> grid, int modes) {
  const std::size_t n = grid.size();
  const std::size_t intervals = n - 1;
  SpectralBasis1d b;
  b.n_nodes = n;
  if (domain == DomainKind::periodic) {
    const int kmax = std::min<int>(modes / 2, static_cast<int>(intervals) / 2 - 1);
    b.n_basis = 1 + 2 * static_cast<std::size_t>(std::max(kmax, 0));
    b.lambda.resize(b.n_basis);
    b.phi.resize(b.n_basis * n);
    b.lambda[0] = 0.0;
    for (std::size_t i = 0; i < n; ++i) b.phi[i] = 1.0;
    std::size_t row = 1;
    for (int k = 1; k <= kmax; ++k) {
      const double lam = 2.0 * M_PI * M_PI * k * k;
      b.lambda[row] = lam;
      b.lambda[row + 1] = lam;
      for (std::size_t i = 0; i < n; ++i) {
        const double arg = kTwoPi * k * grid[i];
        b.phi[row * n + i] = M_SQRT2 * std::cos(arg);
        b.phi[(row + 1) * n + i] = M_SQRT2 * std::sin(arg);
      }
      row += 2;
    }
  } else {
    const int kmax = std::min<int>(modes, static_cast<int>(intervals) - 1);
    b.n_basis = static_cast<std::size_t>(kmax) + 1;
    b.lambda.resize(b.n_basis);
    b.phi.resize(b.n_basis * n);
    for (int k = 0; k <= kmax; ++k) {
      b.lambda[k] = 0.5 * M_PI * M_PI * k * k;
      const double amp = (k == 0) ? 1.0 : M_SQRT2;
      for (std::size_t i = 0; i < n; ++i)
        b.phi[static_cast<std::size_t>(k) * n + i] = amp * std::cos(M_PI * k * grid[i]);
    }
  }
  return b;
}

std::vector<double> trapezoid_weights(std::span<const double> grid) {
  const std::size_t n = grid.size();
  std::vector<double> w(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double h = grid[i + 1] - grid[i];
    w[i] += 0.5 * h;
    w[i + 1] += 0.5 * h;
  }
  return w;
}

}  // namespace

double gamma_density(double t, std::span<const double> x) {
  if (t <= 0.0) throw std::invalid_argument("gamma_density: t must be positive");
  const std::size_t d = x.size();
  if (d == 0) throw std::invalid_argument("gamma_density: empty point");
  double sq = 0.0;
  for (double xi : x) sq += xi * xi;
  return std::pow(kTwoPi * t, -0.5 * static_cast<double>(d)) * std::exp(-sq / (2.0 * t));
}

double gamma_density(double t, double x) {
  return gamma_density(t, std::span<const double>(&x, 1));
}

double heat_kernel(double t, double x, double y, const HeatKernelSpec& spec) {
  if (t <= 0.0) throw std::invalid_argument("heat_kernel: t must be positive");
  switch (spec.domain) {
    case DomainKind::whole_line: {
      if (spec.dim != 1)
        throw std::invalid_argument("heat_kernel: scalar evaluation requires dim=1");
      return gamma_density(t, x - y);
    }
    case DomainKind::periodic: {
      require_unit_interval(x, "heat_kernel");
      require_unit_interval(y, "heat_kernel");
      const int m = effective_truncation(t, spec.image_truncation);
      double acc = 0.0;
      for (int n = -m; n <= m; ++n) acc += gamma_density(t, x - y + n);
      return acc;
    }
    case DomainKind::neumann: {
      require_unit_interval(x, "heat_kernel");
      require_unit_interval(y, "heat_kernel");
      const int m = effective_truncation(t, spec.image_truncation);
      double acc = 0.0;
      for (int n = -m; n <= m; ++n)
        acc += gamma_density(t, x - y + 2.0 * n) + gamma_density(t, x + y + 2.0 * n);
      return acc;
    }
  }
  throw std::logic_error("heat_kernel: unreachable");
}

GridFunction apply_semigroup(const GridFunction& f, double t, const HeatKernelSpec& spec,
                             SemigroupRoute route) {
  f.validate();
  if (t < 0.0) throw std::invalid_argument("apply_semigroup: t must be nonnegative");
  if (t == 0.0) return f;

  GridFunction out = f;
  const std::size_t n = f.size();

  if (spec.domain == DomainKind::whole_line) {
    const auto w = trapezoid_weights(f.grid);
    for (std::size_t i = 0; i < n; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < n; ++j)
        acc += w[j] * gamma_density(t, f.grid[i] - f.grid[j]) * f.values[j];
      out.values[i] = acc;
    }
    return out;
  }

  if (f.grid.front() != 0.0 || f.grid.back() != 1.0)
    throw std::invalid_argument("apply_semigroup: interval kernels require a grid on [0,1]");

  if (route == SemigroupRoute::quadrature) {
    const auto w = trapezoid_weights(f.grid);
    for (std::size_t i = 0; i < n; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < n; ++j)
        acc += w[j] * heat_kernel(t, f.grid[i], f.grid[j], spec) * f.values[j];
      out.values[i] = acc;
    }
    return out;
  }

  const auto basis = make_basis(spec.domain, f.grid, spec.spectral_modes);
  const auto w = trapezoid_weights(f.grid);
  std::vector<double> coeff(basis.n_basis, 0.0);
  for (std::size_t k = 0; k < basis.n_basis; ++k) {
    double acc = 0.0;
    const double* row = basis.phi.data() + k * n;
    for (std::size_t j = 0; j < n; ++j) acc += w[j] * row[j] * f.values[j];
    coeff[k] = acc * std::exp(-basis.lambda[k] * t);
  }
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t k = 0; k < basis.n_basis; ++k)
      acc += coeff[k] * basis.phi[k * n + i];
    out.values[i] = acc;
  }
  return out;
}

std::vector<double> default_t_levels() {
  std::vector<double> levels(17);
  double t = 1.0;
  for (int k = 0; k <= 16; ++k, t *= 0.5) levels[k] = t;
  return levels;
}

double besov_norm_neg(const GridFunction& f, double alpha,
                      std::span<const double> t_levels) {
  if (alpha >= 0.0)
    throw std::invalid_argument("besov_norm_neg: surrogate defined for alpha < 0 only");
  if (t_levels.empty()) throw std::invalid_argument("besov_norm_neg: empty t_levels");
  HeatKernelSpec line{};
  double best = 0.0;
  for (double t : t_levels) {
    const GridFunction smoothed = apply_semigroup(f, t, line);
    best = std::max(best, std::pow(t, -0.5 * alpha) * smoothed.sup_norm());
  }
  return best;
}

double besov_norm_neg(const GridFunction& f, double alpha) {
  const auto levels = default_t_levels();
  return besov_norm_neg(f, alpha, levels);
}

}  // namespace fraclab
