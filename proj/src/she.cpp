#include "fraclab/she.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "fraclab/metrics.hpp"
#include "fraclab/rng.hpp"

namespace fraclab {

namespace {

constexpr double kTwoPi = 6.2831853071795864769;

/// OU transition variance (1 - e^{-2 lam dt})/(2 lam), with the lam -> 0 limit.
double ou_step_variance(double lam, double dt) {
  if (lam * dt < 1e-12) return dt * (1.0 - lam * dt);
  return (1.0 - std::exp(-2.0 * lam * dt)) / (2.0 * lam);
}

void check_same_basis(const SpaceTimeField& a, const SpaceTimeField& b) {
  if (a.basis != b.basis || a.times != b.times)
    throw std::invalid_argument("she: fields live on different discretizations");
}

}  // namespace

std::shared_ptr<const SpectralBasis> SpectralBasis::make(Bc bc, int modes,
                                                         std::size_t n_nodes) {
  if (modes < 1) throw std::invalid_argument("SpectralBasis: need modes >= 1");
  if (n_nodes < 9) throw std::invalid_argument("SpectralBasis: grid too coarse");
  auto out = std::make_shared<SpectralBasis>();
  auto& b = const_cast<SpectralBasis&>(*out);
  b.bc_ = bc;
  b.modes_ = modes;
  b.n_nodes_ = n_nodes;
  b.grid_ = linspace(0.0, 1.0, n_nodes);
  const std::size_t intervals = n_nodes - 1;

  if (bc == Bc::periodic) {
    const int kmax = std::min<int>(modes / 2, static_cast<int>(intervals) / 2 - 1);
    const std::size_t nb = 1 + 2 * static_cast<std::size_t>(kmax);
    b.lambda_.assign(nb, 0.0);
    b.phi_.assign(nb * n_nodes, 0.0);
    for (std::size_t i = 0; i < n_nodes; ++i) b.phi_[i] = 1.0;
    std::size_t row = 1;
    for (int k = 1; k <= kmax; ++k) {
      const double lam = 2.0 * M_PI * M_PI * k * k;
      b.lambda_[row] = lam;
      b.lambda_[row + 1] = lam;
      for (std::size_t i = 0; i < n_nodes; ++i) {
        const double arg = kTwoPi * k * b.grid_[i];
        b.phi_[row * n_nodes + i] = M_SQRT2 * std::cos(arg);
        b.phi_[(row + 1) * n_nodes + i] = M_SQRT2 * std::sin(arg);
      }
      row += 2;
    }
  } else {
    const int kmax = std::min<int>(modes, static_cast<int>(intervals) - 1);
    const std::size_t nb = static_cast<std::size_t>(kmax) + 1;
    b.lambda_.assign(nb, 0.0);
    b.phi_.assign(nb * n_nodes, 0.0);
    for (int k = 0; k <= kmax; ++k) {
      b.lambda_[k] = 0.5 * M_PI * M_PI * k * k;
      const double amp = k == 0 ? 1.0 : M_SQRT2;
      for (std::size_t i = 0; i < n_nodes; ++i)
        b.phi_[static_cast<std::size_t>(k) * n_nodes + i] =
            amp * std::cos(M_PI * k * b.grid_[i]);
    }
  }
  b.quadw_.assign(n_nodes, 1.0 / static_cast<double>(intervals));
  b.quadw_.front() *= 0.5;
  b.quadw_.back() *= 0.5;
  return out;
}

void SpectralBasis::to_modes(std::span<const double> values,
                             std::span<double> coeffs) const {
  if (values.size() != n_nodes_ || coeffs.size() != n_basis())
    throw std::invalid_argument("to_modes: size mismatch");
  for (std::size_t k = 0; k < n_basis(); ++k) {
    const double* row = phi_.data() + k * n_nodes_;
    double acc = 0.0;
    for (std::size_t i = 0; i < n_nodes_; ++i) acc += quadw_[i] * row[i] * values[i];
    coeffs[k] = acc;
  }
}

void SpectralBasis::to_values(std::span<const double> coeffs,
                              std::span<double> values) const {
  if (values.size() != n_nodes_ || coeffs.size() != n_basis())
    throw std::invalid_argument("to_values: size mismatch");
  for (std::size_t i = 0; i < n_nodes_; ++i) values[i] = 0.0;
  for (std::size_t k = 0; k < n_basis(); ++k) {
    const double c = coeffs[k];
    if (c == 0.0) continue;
    const double* row = phi_.data() + k * n_nodes_;
    for (std::size_t i = 0; i < n_nodes_; ++i) values[i] += c * row[i];
  }
}

bool she_config_admissible(const SheConfig& cfg) {
  return cfg.drift.nominal_alpha > -1.5;
}

SheNoise sample_she_noise(std::shared_ptr<const SpectralBasis> basis,
                          std::size_t n_steps, double dt, std::uint64_t seed) {
  if (!basis) throw std::invalid_argument("sample_she_noise: null basis");
  SheNoise noise;
  noise.basis = std::move(basis);
  noise.dt = dt;
  const std::size_t nb = noise.basis->n_basis();
  noise.eta.resize(n_steps * nb);
  std::vector<double> sd(nb);
  for (std::size_t k = 0; k < nb; ++k)
    sd[k] = std::sqrt(ou_step_variance(noise.basis->eigenvalues()[k], dt));
  Rng rng(seed);
  for (std::size_t i = 0; i < n_steps; ++i)
    for (std::size_t k = 0; k < nb; ++k) noise.eta[i * nb + k] = sd[k] * rng.gaussian();
  return noise;
}

namespace {

/// Drift callback: (value, node, step) -> drift value.
using SheDriftFn = std::function<double(double, std::size_t, std::size_t)>;

/// Shared exponential-Euler stepper. drift == nullptr solves the linear
/// equation (the stochastic convolution when u0 == 0).
SpaceTimeField evolve(const SheNoise& noise, std::span<const double> u0_modes,
                      const SheDriftFn* drift) {
  const auto& basis = *noise.basis;
  const std::size_t nb = basis.n_basis();
  const std::size_t nx = basis.n_nodes();
  const std::size_t n = noise.n_steps();
  const double dt = noise.dt;

  SpaceTimeField f;
  f.basis = noise.basis;
  f.times.resize(n + 1);
  for (std::size_t i = 0; i <= n; ++i) f.times[i] = dt * static_cast<double>(i);
  f.values.assign((n + 1) * nx, 0.0);
  f.modes.assign((n + 1) * nb, 0.0);

  std::vector<double> decay(nb);
  for (std::size_t k = 0; k < nb; ++k)
    decay[k] = std::exp(-basis.eigenvalues()[k] * dt);

  std::copy(u0_modes.begin(), u0_modes.end(), f.modes.begin());
  basis.to_values({f.modes.data(), nb}, {f.values.data(), nx});

  std::vector<double> w(nx), what(nb);
  for (std::size_t i = 0; i < n; ++i) {
    const double* cur_m = f.modes.data() + i * nb;
    const double* cur_v = f.values.data() + i * nx;
    double* next_m = f.modes.data() + (i + 1) * nb;
    double* next_v = f.values.data() + (i + 1) * nx;
    if (drift) {
      for (std::size_t j = 0; j < nx; ++j) w[j] = (*drift)(cur_v[j], j, i);
      basis.to_modes(w, what);
      for (std::size_t k = 0; k < nb; ++k)
        next_m[k] = decay[k] * (cur_m[k] + dt * what[k]) + noise.eta[i * nb + k];
    } else {
      for (std::size_t k = 0; k < nb; ++k)
        next_m[k] = decay[k] * cur_m[k] + noise.eta[i * nb + k];
    }
    basis.to_values({next_m, nb}, {next_v, nx});
    for (std::size_t j = 0; j < nx; ++j)
      if (!std::isfinite(next_v[j]))
        throw std::runtime_error("she: non-finite value at step " + std::to_string(i) +
                                 ", node " + std::to_string(j));
  }
  return f;
}

std::vector<double> initial_modes(const SheConfig& cfg, const SpectralBasis& basis) {
  std::vector<double> m(basis.n_basis(), 0.0);
  if (!cfg.u0.grid.empty()) {
    if (cfg.u0.grid.size() != basis.n_nodes())
      throw std::invalid_argument("she: u0 grid does not match the field grid");
    basis.to_modes(cfg.u0.values, m);
  }
  return m;
}

}  // namespace

SpaceTimeField stochastic_convolution(const SheNoise& noise) {
  std::vector<double> zeros(noise.basis->n_basis(), 0.0);
  return evolve(noise, zeros, nullptr);
}

SpaceTimeField sample_stochastic_convolution(const SheConfig& cfg, std::uint64_t seed) {
  auto basis = SpectralBasis::make(cfg.bc, cfg.modes, cfg.n_nodes);
  if (cfg.modes < 16) throw std::invalid_argument("she: need at least 16 modes");
  return stochastic_convolution(sample_she_noise(basis, cfg.n_steps, cfg.dt, seed));
}

SpaceTimeField solve_mild(const SheConfig& cfg, const SheNoise& noise) {
  if (noise.n_steps() != cfg.n_steps || noise.dt != cfg.dt)
    throw std::invalid_argument("solve_mild: noise grid mismatch");
  const MollifiedDrift bn = mollify(cfg.drift, cfg.n_moll);
  SheDriftFn drift = [&bn](double u, std::size_t, std::size_t) { return bn(u); };
  return evolve(noise, initial_modes(cfg, *noise.basis), &drift);
}

SpaceTimeField drift_component(const SheConfig& cfg, const SpaceTimeField& u,
                               const SheNoise& noise) {
  const SpaceTimeField v = stochastic_convolution(noise);
  check_same_basis(u, v);
  const auto& basis = *u.basis;
  const std::size_t nb = basis.n_basis();
  const std::size_t nx = basis.n_nodes();
  const auto u0m = initial_modes(cfg, basis);

  SpaceTimeField k;
  k.basis = u.basis;
  k.times = u.times;
  k.values.assign(u.values.size(), 0.0);
  k.modes.assign(u.modes.size(), 0.0);
  for (std::size_t i = 0; i < u.times.size(); ++i) {
    const double t = u.times[i];
    for (std::size_t m = 0; m < nb; ++m) {
      const double pu0 = std::exp(-basis.eigenvalues()[m] * t) * u0m[m];
      k.modes[i * nb + m] = u.modes[i * nb + m] - pu0 - v.modes[i * nb + m];
    }
    basis.to_values({k.modes.data() + i * nb, nb}, {k.values.data() + i * nx, nx});
  }
  return k;
}

SpaceTimeField field_diff(const SpaceTimeField& a, const SpaceTimeField& b) {
  check_same_basis(a, b);
  SpaceTimeField d = a;
  for (std::size_t i = 0; i < d.values.size(); ++i) d.values[i] -= b.values[i];
  for (std::size_t i = 0; i < d.modes.size(); ++i) d.modes[i] -= b.modes[i];
  return d;
}

SheCouplingRun coupled_field(const SheConfig& b_cfg, const MollifiedDrift& g,
                             double lambda, const SheNoise& noise) {
  if (!(lambda > 1.0)) throw std::invalid_argument("coupled_field: lambda must exceed 1");
  if (b_cfg.dt * lambda >= 0.5)
    throw std::invalid_argument(
        "coupled_field: stiffness guard, need dt < 1/(2 lambda)");
  SheCouplingRun run;
  run.lambda = lambda;
  run.u = solve_mild(b_cfg, noise);

  const auto u0m = initial_modes(b_cfg, *noise.basis);
  SheDriftFn plain = [&g](double u, std::size_t, std::size_t) { return g(u); };
  run.v = evolve(noise, u0m, &plain);

  const SpaceTimeField& u = run.u;
  SheDriftFn pushed = [&](double vt, std::size_t j, std::size_t step) {
    return g(vt) + lambda * (u.value(step, j) - vt);
  };
  run.v_tilde = evolve(noise, u0m, &pushed);

  double sup = 0.0;
  for (std::size_t i = 0; i < u.values.size(); ++i)
    sup = std::max(sup, std::abs(u.values[i] - run.v_tilde.values[i]));
  run.sup_gap = sup;
  return run;
}

double weighted_norm(const SpaceTimeField& f) {
  const auto& basis = *f.basis;
  const std::size_t nb = basis.n_basis();
  const std::size_t nx = basis.n_nodes();
  std::vector<double> damped(nb), slice(nx);
  double best = 0.0;
  for (std::size_t i = 0; i < f.times.size(); ++i) {
    const double horizon = 2.0 - f.times[i];
    const auto m = f.mode_slice(i);
    for (std::size_t k = 0; k < nb; ++k)
      damped[k] = m[k] * std::exp(-basis.eigenvalues()[k] * horizon);
    basis.to_values(damped, slice);
    for (double v : slice) best = std::max(best, std::abs(v));
  }
  return best;
}

void ShePinskerAccumulator::add(const SheCouplingRun& run) {
  const auto& u = run.u;
  const std::size_t nx = u.basis->n_nodes();
  const std::size_t nt = u.times.size();
  if (n_ == 0) {
    lambda_ = run.lambda;
    dt_ = u.times[1] - u.times[0];
    gap_sq_sum_.assign(nt * nx, 0.0);
  }
  if (gap_sq_sum_.size() != nt * nx)
    throw std::invalid_argument("ShePinskerAccumulator: member shape mismatch");
  double kl = 0.0;
  const auto& qw_dt = dt_;
  for (std::size_t i = 0; i < nt; ++i) {
    double slice = 0.0;
    for (std::size_t j = 0; j < nx; ++j) {
      const double gap = u.value(i, j) - run.v_tilde.value(i, j);
      gap_sq_sum_[i * nx + j] += gap * gap;
      const double w = (j == 0 || j + 1 == nx) ? 0.5 : 1.0;
      slice += w * gap * gap;
    }
    if (i + 1 < nt) kl += slice / static_cast<double>(nx - 1) * qw_dt;
  }
  kl_members_.push_back(run.lambda * run.lambda * kl);
  marg_v_.push_back(run.v.value(nt - 1, nx / 2));
  marg_vt_.push_back(run.v_tilde.value(nt - 1, nx / 2));
  ++n_;
}

ShePinskerReport ShePinskerAccumulator::report(int bins) const {
  if (n_ < 100)
    throw std::invalid_argument(
        "pinsker_bound_she: need at least 100 runs (MC error dominates below)");
  ShePinskerReport rep;
  rep.n = n_;
  rep.lambda = lambda_;
  // sup over (t,x) of the empirical L2 norm; Leb(D) = 1.
  double sup_sq = 0.0;
  for (double s : gap_sq_sum_) sup_sq = std::max(sup_sq, s / static_cast<double>(n_));
  rep.paper_bound.value = 0.5 * lambda_ * std::sqrt(sup_sq);
  rep.paper_bound.stderr_ =
      0.5 * lambda_ * std::sqrt(sup_sq / (2.0 * static_cast<double>(n_)));
  rep.paper_bound.n = n_;
  const Estimate kl = mean_estimate(kl_members_);
  rep.kl_direct.value = 0.5 * std::sqrt(std::max(0.0, kl.value));
  rep.kl_direct.stderr_ =
      kl.value > 1e-300 ? 0.25 * kl.stderr_ / std::sqrt(kl.value) : 0.0;
  rep.kl_direct.n = n_;
  rep.hist_tv = tv_histogram(marg_v_, marg_vt_, bins);
  return rep;
}

ShePinskerReport pinsker_bound_she(std::span<const SheCouplingRun> runs, int bins) {
  ShePinskerAccumulator acc;
  for (const auto& r : runs) acc.add(r);
  return acc.report(bins);
}

LipschitzCheck kernel_lipschitz_check(const HeatKernelSpec& spec,
                                      std::span<const double> t_levels,
                                      std::span<const GridFunction> probes) {
  LipschitzCheck out;
  out.t_levels.assign(t_levels.begin(), t_levels.end());
  for (double t : t_levels) {
    if (t <= 0.0) throw std::invalid_argument("kernel_lipschitz_check: t must be > 0");
    double fitted = 0.0;
    for (const auto& probe : probes) {
      const GridFunction sm = apply_semigroup(probe, t, spec, SemigroupRoute::quadrature);
      const std::size_t n = sm.size();
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
          const double ratio = std::abs(sm.values[i] - sm.values[j]) * std::sqrt(t) /
                               (sm.grid[j] - sm.grid[i]);
          fitted = std::max(fitted, ratio);
        }
    }
    out.fitted.push_back(fitted);
    out.max_constant = std::max(out.max_constant, fitted);
  }
  return out;
}

std::vector<std::vector<double>> she_exp_functional(
    const SheNoise& noise, std::size_t s_idx, std::span<const std::size_t> t_snap_idx,
    std::span<const double> lambdas, const MollifiedDrift& f, std::size_t x_node) {
  const auto& basis = *noise.basis;
  const std::size_t nb = basis.n_basis();
  const std::size_t nx = basis.n_nodes();
  const std::size_t n = noise.n_steps();
  const double dt = noise.dt;
  for (std::size_t t : t_snap_idx)
    if (t > n || t <= s_idx)
      throw std::invalid_argument("she_exp_functional: bad snapshot index");

  std::vector<double> vmodes(nb, 0.0), vvals(nx), w(nx), what(nb);
  std::vector<double> conv_decay(nb);
  for (std::size_t k = 0; k < nb; ++k)
    conv_decay[k] = std::exp(-basis.eigenvalues()[k] * dt);
  // One accumulator per lambda; decay applied after each added step keeps the
  // state equal to the integral against the running upper limit.
  std::vector<std::vector<double>> acc(lambdas.size(), std::vector<double>(nb, 0.0));
  std::vector<std::vector<double>> acc_decay(lambdas.size(), std::vector<double>(nb));
  for (std::size_t l = 0; l < lambdas.size(); ++l)
    for (std::size_t k = 0; k < nb; ++k)
      acc_decay[l][k] = std::exp(-(lambdas[l] + basis.eigenvalues()[k]) * dt);

  std::vector<std::vector<double>> result(t_snap_idx.size(),
                                          std::vector<double>(lambdas.size(), 0.0));
  auto snapshot = [&](std::size_t snap_row) {
    for (std::size_t l = 0; l < lambdas.size(); ++l) {
      double val = 0.0;
      for (std::size_t k = 0; k < nb; ++k)
        val += acc[l][k] * basis.basis_value(k, x_node);
      result[snap_row][l] = val;
    }
  };

  const std::size_t t_max = *std::max_element(t_snap_idx.begin(), t_snap_idx.end());
  for (std::size_t i = 0; i < t_max; ++i) {
    if (i >= s_idx) {
      basis.to_values(vmodes, vvals);
      for (std::size_t j = 0; j < nx; ++j) w[j] = f(vvals[j]);
      basis.to_modes(w, what);
      for (std::size_t l = 0; l < lambdas.size(); ++l) {
        auto& a = acc[l];
        const auto& d = acc_decay[l];
        for (std::size_t k = 0; k < nb; ++k) a[k] = (a[k] + dt * what[k]) * d[k];
      }
    }
    for (std::size_t k = 0; k < nb; ++k)
      vmodes[k] = conv_decay[k] * vmodes[k] + noise.eta[i * nb + k];
    for (std::size_t s = 0; s < t_snap_idx.size(); ++s)
      if (t_snap_idx[s] == i + 1) snapshot(s);
  }
  return result;
}

}  // namespace fraclab
