#include "fraclab/sde.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "fraclab/metrics.hpp"

namespace fraclab {

namespace {

double beta_fn(double a, double b) {
  return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
}

void check_grid(const SdeConfig& cfg, const FbmPath& fbm) {
  if (fbm.n_steps() != cfg.n_steps || fbm.dt != cfg.dt)
    throw std::invalid_argument("sde: fbm grid does not match config grid");
}

void check_finite(double x, std::size_t step) {
  if (!std::isfinite(x))
    throw std::runtime_error("sde: non-finite state at step " + std::to_string(step));
}

}  // namespace

bool sde_config_admissible(const SdeConfig& cfg) {
  return admissible_weak(cfg.drift.nominal_alpha, cfg.hurst);
}

SamplePath solve_euler_callable(
    std::span<const double> x0,
    const std::function<void(std::span<const double>, std::span<double>)>& b,
    std::shared_ptr<const FbmPath> fbm) {
  const int dim = fbm->dim;
  if (static_cast<int>(x0.size()) != dim)
    throw std::invalid_argument("sde: x0 dimension does not match noise dimension");
  const std::size_t n = fbm->n_steps();
  const double dt = fbm->dt;

  SamplePath p;
  p.dim = dim;
  p.times = fbm->times;
  p.x.assign((n + 1) * dim, 0.0);
  p.psi.assign((n + 1) * dim, 0.0);
  for (int c = 0; c < dim; ++c) p.x[c] = x0[c];

  std::vector<double> bval(dim);
  for (std::size_t i = 0; i < n; ++i) {
    b(std::span<const double>(p.x.data() + i * dim, dim), std::span<double>(bval));
    for (int c = 0; c < dim; ++c) {
      const double psi_next = p.psi[i * dim + c] + bval[c] * dt;
      check_finite(psi_next, i);
      p.psi[(i + 1) * dim + c] = psi_next;
      p.x[(i + 1) * dim + c] = x0[c] + psi_next + fbm->value(i + 1, c);
    }
  }
  p.fbm = std::move(fbm);
  return p;
}

SamplePath solve_euler(const SdeConfig& cfg, std::shared_ptr<const FbmPath> fbm) {
  check_grid(cfg, *fbm);
  if (cfg.dim() != 1 || fbm->dim != 1)
    throw std::invalid_argument("solve_euler: catalog drifts are scalar; use the callable overload for d > 1");
  const MollifiedDrift bn = mollify(cfg.drift, cfg.n_moll);
  return solve_euler_callable(
      cfg.x0,
      [&bn](std::span<const double> x, std::span<double> out) { out[0] = bn(x[0]); },
      std::move(fbm));
}

CouplingRun coupled_pair(const SdeConfig& b_cfg, const MollifiedDrift& g,
                         std::span<const double> y0, double lambda,
                         std::shared_ptr<const FbmPath> fbm, CouplingScheme scheme,
                         std::size_t v_stride) {
  if (!(lambda > 1.0)) throw std::invalid_argument("coupled_pair: lambda must exceed 1");
  if (b_cfg.dt * lambda >= 0.5)
    throw std::invalid_argument(
        "coupled_pair: stiffness guard, explicit Euler needs dt < 1/(2 lambda)");
  check_grid(b_cfg, *fbm);
  if (b_cfg.dim() != 1 || static_cast<int>(y0.size()) != 1)
    throw std::invalid_argument("coupled_pair: implemented for d = 1");

  CouplingRun run;
  run.lambda = lambda;
  run.X = solve_euler(b_cfg, fbm);
  run.Y = solve_euler_callable(
      y0, [&g](std::span<const double> x, std::span<double> out) { out[0] = g(x[0]); },
      fbm);

  const std::size_t n = b_cfg.n_steps;
  const double dt = b_cfg.dt;

  // Y_tilde under g with the push towards X, same noise.
  SamplePath yt;
  yt.dim = 1;
  yt.times = fbm->times;
  yt.x.assign(n + 1, 0.0);
  yt.psi.assign(n + 1, 0.0);
  yt.x[0] = y0[0];
  const double decay = std::exp(-lambda * dt);
  for (std::size_t i = 0; i < n; ++i) {
    double psi_next;
    if (scheme == CouplingScheme::explicit_euler) {
      const double drift_term = g(yt.x[i]) + lambda * (run.X.x[i] - yt.x[i]);
      psi_next = yt.psi[i] + drift_term * dt;
    } else {
      // Exact integrating factor on the linear push; drift weighted likewise.
      const double w = (1.0 - decay) / lambda;
      const double y_next = decay * yt.x[i] + (1.0 - decay) * run.X.x[i] +
                            w * g(yt.x[i]) + (fbm->value(i + 1) - fbm->value(i));
      psi_next = y_next - y0[0] - fbm->value(i + 1);
    }
    check_finite(psi_next, i);
    yt.psi[i + 1] = psi_next;
    yt.x[i + 1] = y0[0] + psi_next + fbm->value(i + 1);
  }
  yt.fbm = fbm;
  run.Y_tilde = std::move(yt);

  // Transformed noise and the Brownian shift of the gap.
  run.B_tilde.assign(n + 1, 0.0);
  std::vector<double> beta(n + 1, 0.0);
  double sup_gap = 0.0;
  for (std::size_t i = 0; i <= n; ++i) {
    const double gap = run.X.x[i] - run.Y_tilde.x[i];
    sup_gap = std::max(sup_gap, std::abs(gap));
    beta[i] = lambda * gap;
    if (i < n)
      run.B_tilde[i + 1] = run.B_tilde[i] + (fbm->value(i + 1) - fbm->value(i)) +
                           beta[i] * dt;
  }
  run.sup_gap = sup_gap;
  run.v = girsanov_v(run.X.times, beta, 1, HurstIndex(fbm->hurst()), v_stride);
  run.v_times.resize(n / v_stride + 1);
  for (std::size_t k = 0; k < run.v_times.size(); ++k)
    run.v_times[k] = run.X.times[k * v_stride];
  return run;
}

GirsanovTvReport girsanov_tv_report(std::span<const CouplingRun> runs, int bins) {
  if (runs.size() < 100)
    throw std::invalid_argument(
        "girsanov_tv_report: need at least 100 runs (MC error dominates below)");
  GirsanovTvReport rep;
  rep.n = runs.size();
  rep.lambda = runs.front().lambda;

  std::vector<std::vector<double>> vs;
  vs.reserve(runs.size());
  for (const auto& r : runs) vs.push_back(r.v);
  rep.pinsker_direct = pinsker_tv_bound(runs.front().v_times, vs, 1);

  // ||sup gap||_{L2} with a delta-method standard error, scaled by the
  // explicit constant sup_t |v_t| <= c_H B(3/2-H, 1/2-H) ||beta||_inf (t <= 1).
  const double H = runs.front().X.fbm->hurst();
  const double cshape =
      H == 0.5 ? 1.0 : girsanov_c(H) * beta_fn(1.5 - H, 0.5 - H);
  double sum = 0.0, sum_sq = 0.0;
  for (const auto& r : runs) {
    const double q = r.sup_gap * r.sup_gap;
    sum += q;
    sum_sq += q * q;
  }
  const double n = static_cast<double>(runs.size());
  const double mean_q = sum / n;
  const double se_q = std::sqrt(std::max(0.0, sum_sq / n - mean_q * mean_q) / n);
  const double factor = 0.5 * cshape * rep.lambda;
  rep.paper_bound.n = runs.size();
  rep.paper_bound.value = factor * std::sqrt(mean_q);
  rep.paper_bound.stderr_ =
      mean_q > 1e-300 ? factor * 0.5 * se_q / std::sqrt(mean_q) : factor * std::sqrt(se_q);

  std::vector<double> ya, yb;
  ya.reserve(runs.size());
  yb.reserve(runs.size());
  for (const auto& r : runs) {
    ya.push_back(r.Y.x.back());
    yb.push_back(r.Y_tilde.x.back());
  }
  rep.hist_tv = tv_histogram(ya, yb, bins);
  return rep;
}

SamplePath min_solution(const SamplePath& x1, const SamplePath& x2) {
  if (x1.dim != 1 || x2.dim != 1)
    throw std::invalid_argument("min_solution: defined for d = 1");
  if (!x1.fbm || !x2.fbm ||
      (x1.fbm != x2.fbm && x1.fbm->driver.increments != x2.fbm->driver.increments))
    throw std::invalid_argument("min_solution: paths must share one driver");
  if (x1.times != x2.times)
    throw std::invalid_argument("min_solution: paths must share one grid");
  SamplePath out;
  out.dim = 1;
  out.times = x1.times;
  out.fbm = x1.fbm;
  const std::size_t m = x1.x.size();
  out.x.resize(m);
  out.psi.resize(m);
  const double y0 = std::min(x1.x[0], x2.x[0]);
  for (std::size_t i = 0; i < m; ++i) {
    out.x[i] = std::min(x1.x[i], x2.x[i]);
    out.psi[i] = out.x[i] - y0 - out.fbm->value(i);
  }
  return out;
}

double residual(const SamplePath& path, const MollifiedDrift& g) {
  if (path.dim != 1) throw std::invalid_argument("residual: defined for d = 1");
  const std::size_t n = path.n_steps();
  const double dt = path.times[1] - path.times[0];
  double acc = 0.0, worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    worst = std::max(worst, std::abs(acc - path.psi[i]));
    acc += g(path.x[i]) * dt;
  }
  worst = std::max(worst, std::abs(acc - path.psi[n]));
  return worst;
}

double holder_seminorm_lm(std::span<const std::vector<double>> ensemble,
                          std::span<const double> times, double kappa, double m) {
  if (m < 2.0) throw std::invalid_argument("holder_seminorm_lm: need m >= 2");
  if (ensemble.size() < 100)
    throw std::invalid_argument("holder_seminorm_lm: need at least 100 paths");
  const std::size_t n = times.size() - 1;
  double best = 0.0;
  for (std::size_t step = n; step >= 1; step /= 2) {
    for (std::size_t i = 0; i + step <= n; i += step) {
      double acc = 0.0;
      for (const auto& path : ensemble)
        acc += std::pow(std::abs(path[i + step] - path[i]), m);
      const double lm = std::pow(acc / static_cast<double>(ensemble.size()), 1.0 / m);
      best = std::max(best, lm / std::pow(times[i + step] - times[i], kappa));
    }
    if (step == 1) break;
  }
  return best;
}

double exp_weighted_functional(const MollifiedDrift& f, std::span<const double> phi,
                               double lambda, const FbmPath& fbm, std::size_t s_idx,
                               std::size_t t_idx) {
  if (s_idx > t_idx || t_idx > fbm.n_steps())
    throw std::invalid_argument("exp_weighted_functional: need grid nodes s <= t");
  if (fbm.dim != 1)
    throw std::invalid_argument("exp_weighted_functional: defined for d = 1");
  const double dt = fbm.dt;
  const double t = fbm.times[t_idx];
  double acc = 0.0;
  for (std::size_t i = s_idx; i < t_idx; ++i) {
    double shift = 0.0;
    if (phi.size() == 1) shift = phi[0];
    else if (!phi.empty()) shift = phi[i];
    acc += std::exp(-lambda * (t - fbm.times[i])) * f(fbm.value(i) + shift) * dt;
  }
  return acc;
}

}  // namespace fraclab
