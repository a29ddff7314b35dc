#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "fraclab/rng.hpp"
#include "fraclab/she.hpp"

using namespace fraclab;

namespace {

SheConfig small_config(Bc bc = Bc::periodic) {
  SheConfig cfg;
  cfg.drift = parse_drift("dirac@0:mass=1");
  cfg.n_moll = 64;
  cfg.bc = bc;
  cfg.modes = 32;
  cfg.n_nodes = 65;
  cfg.n_steps = 128;
  cfg.dt = 1.0 / 128.0;
  return cfg;
}

}  // namespace

TEST_CASE("spectral transforms round-trip band-limited data") {
  for (Bc bc : {Bc::periodic, Bc::neumann}) {
    auto basis = SpectralBasis::make(bc, 32, 65);
    std::vector<double> coeffs(basis->n_basis(), 0.0);
    coeffs[0] = 0.5;
    coeffs[3] = -1.2;
    coeffs[basis->n_basis() - 2] = 0.7;
    std::vector<double> values(65), back(basis->n_basis());
    basis->to_values(coeffs, values);
    basis->to_modes(values, back);
    for (std::size_t k = 0; k < back.size(); ++k)
      CHECK(back[k] == doctest::Approx(coeffs[k]).epsilon(1e-10));
  }
}

TEST_CASE("stochastic convolution starts at zero and matches the variance series") {
  auto cfg = small_config();
  const auto v = sample_stochastic_convolution(cfg, 42);
  for (std::size_t j = 0; j < cfg.n_nodes; ++j) CHECK(v.value(0, j) == 0.0);

  auto basis = SpectralBasis::make(cfg.bc, cfg.modes, cfg.n_nodes);
  const std::size_t fields = 3000;
  const std::size_t ti = cfg.n_steps;  // t = 1
  const std::size_t xi = cfg.n_nodes / 2;
  double sum = 0.0, sq = 0.0;
  for (std::size_t m = 0; m < fields; ++m) {
    const auto noise = sample_she_noise(basis, cfg.n_steps, cfg.dt, seed_fanout(3, m));
    std::vector<double> modes(basis->n_basis(), 0.0);
    for (std::size_t i = 0; i < cfg.n_steps; ++i)
      for (std::size_t k = 0; k < basis->n_basis(); ++k)
        modes[k] = std::exp(-basis->eigenvalues()[k] * cfg.dt) * modes[k] +
                   noise.eta[i * basis->n_basis() + k];
    double val = 0.0;
    for (std::size_t k = 0; k < basis->n_basis(); ++k)
      val += modes[k] * basis->basis_value(k, xi);
    sum += val * val;
    sq += val * val * val * val;
  }
  const double mean = sum / fields;
  const double se = std::sqrt((sq / fields - mean * mean) / fields);
  double truth = 0.0;
  for (std::size_t k = 0; k < basis->n_basis(); ++k) {
    const double lam = basis->eigenvalues()[k];
    const double t = cfg.dt * static_cast<double>(ti);
    const double e = basis->basis_value(k, xi);
    truth += (lam * t < 1e-12 ? t : (1.0 - std::exp(-2.0 * lam * t)) / (2.0 * lam)) * e * e;
  }
  CHECK(std::abs(mean - truth) <= 3.0 * se);
}

TEST_CASE("mild solver: zero drift reproduces the linear solution exactly") {
  auto cfg = small_config();
  cfg.drift = parse_drift("smooth:zero");
  auto basis = SpectralBasis::make(cfg.bc, cfg.modes, cfg.n_nodes);
  const auto noise = sample_she_noise(basis, cfg.n_steps, cfg.dt, 77);
  const auto u = solve_mild(cfg, noise);
  const auto v = stochastic_convolution(noise);
  for (std::size_t i = 0; i < u.values.size(); ++i)
    CHECK(u.values[i] == doctest::Approx(v.values[i]).epsilon(1e-12));
}

TEST_CASE("constant drift gives K = c t exactly") {
  auto cfg = small_config();
  cfg.drift = parse_drift("smooth:const=0.6");
  auto basis = SpectralBasis::make(cfg.bc, cfg.modes, cfg.n_nodes);
  const auto noise = sample_she_noise(basis, cfg.n_steps, cfg.dt, 78);
  const auto u = solve_mild(cfg, noise);
  const auto k = drift_component(cfg, u, noise);
  for (std::size_t i = 0; i <= cfg.n_steps; i += 16)
    for (std::size_t j = 0; j < cfg.n_nodes; j += 8)
      CHECK(k.value(i, j) == doctest::Approx(0.6 * u.times[i]).epsilon(1e-10));
}

TEST_CASE("noise-free eigenfunction decays at its eigenvalue rate") {
  auto cfg = small_config(Bc::neumann);
  cfg.drift = parse_drift("smooth:zero");
  auto basis = SpectralBasis::make(cfg.bc, cfg.modes, cfg.n_nodes);
  cfg.u0 = GridFunction::sample(0.0, 1.0, cfg.n_nodes, [](double x) {
    return M_SQRT2 * std::cos(M_PI * x);  // first nonconstant Neumann mode
  });
  SheNoise silent;
  silent.basis = basis;
  silent.dt = cfg.dt;
  silent.eta.assign(cfg.n_steps * basis->n_basis(), 0.0);
  const auto u = solve_mild(cfg, silent);
  const double lam1 = basis->eigenvalues()[1];
  for (std::size_t i : {std::size_t{32}, std::size_t{128}}) {
    const double t = u.times[i];
    const double expected = std::exp(-lam1 * t) * M_SQRT2 * std::cos(M_PI * 0.25);
    CHECK(u.value(i, cfg.n_nodes / 4) == doctest::Approx(expected).epsilon(1e-6));
  }
}

TEST_CASE("weighted norm: zero field, eigenfunction decay, sup-norm contraction") {
  auto basis = SpectralBasis::make(Bc::neumann, 16, 65);
  SpaceTimeField f;
  f.basis = basis;
  f.times = {0.0, 0.5, 1.0};
  f.modes.assign(3 * basis->n_basis(), 0.0);
  f.values.assign(3 * 65, 0.0);
  CHECK(weighted_norm(f) == 0.0);

  // every slice equal to eigenfunction e_k: sup_t e^{-lam_k (2-t)} ||e_k||
  const std::size_t k = 2;
  for (std::size_t i = 0; i < 3; ++i) {
    f.modes[i * basis->n_basis() + k] = 1.0;
    for (std::size_t j = 0; j < 65; ++j)
      f.values[i * 65 + j] = basis->basis_value(k, j);
  }
  const double lam = basis->eigenvalues()[k];
  CHECK(weighted_norm(f) == doctest::Approx(std::exp(-lam) * M_SQRT2).epsilon(1e-10));

  double sup = 0.0;
  for (double v : f.values) sup = std::max(sup, std::abs(v));
  CHECK(weighted_norm(f) <= sup);
}

TEST_CASE("coupled fields: b = g collapses, stiffness guard trips") {
  auto cfg = small_config();
  auto basis = SpectralBasis::make(cfg.bc, cfg.modes, cfg.n_nodes);
  const auto noise = sample_she_noise(basis, cfg.n_steps, cfg.dt, 79);
  const auto g = mollify(cfg.drift, cfg.n_moll);
  const auto run = coupled_field(cfg, g, 8.0, noise);
  CHECK(run.sup_gap == 0.0);
  CHECK_THROWS_AS(coupled_field(cfg, g, 100.0, noise), std::invalid_argument);
}

TEST_CASE("pinsker report: homogeneity in lambda at frozen gap and dominance") {
  auto cfg = small_config();
  auto basis = SpectralBasis::make(cfg.bc, cfg.modes, cfg.n_nodes);
  const auto g = mollify(parse_drift("dirac@0:mass=1"), 8);
  std::vector<SheCouplingRun> runs(120);
  for (std::size_t m = 0; m < runs.size(); ++m) {
    const auto noise = sample_she_noise(basis, cfg.n_steps, cfg.dt, seed_fanout(5, m));
    runs[m] = coupled_field(cfg, g, 8.0, noise);
  }
  const auto rep = pinsker_bound_she(runs, 32);
  CHECK(rep.n == 120);
  CHECK(rep.paper_bound.value >= 0.0);
  CHECK(rep.kl_direct.value <= rep.paper_bound.value + 1e-12);

  // doubling lambda at frozen gap doubles the paper-shaped bound
  auto doubled = runs;
  for (auto& r : doubled) r.lambda = 16.0;
  const auto rep2 = pinsker_bound_she(doubled, 32);
  CHECK(rep2.paper_bound.value == doctest::Approx(2.0 * rep.paper_bound.value));

  std::vector<SheCouplingRun> few(3);
  for (std::size_t m = 0; m < 3; ++m) few[m] = runs[m];
  CHECK_THROWS_AS(pinsker_bound_she(few, 32), std::invalid_argument);
}

TEST_CASE("kernel lipschitz check: constant probes vanish, sign probe is finite") {
  HeatKernelSpec spec{DomainKind::periodic, 1, 8, 128};
  std::vector<GridFunction> probes;
  probes.push_back(GridFunction::sample(0.0, 1.0, 129, [](double) { return 1.0; }));
  const double ts[3] = {0.01, 0.1, 1.0};
  const auto flat = kernel_lipschitz_check(spec, std::span<const double>(ts, 3), probes);
  for (double v : flat.fitted) CHECK(v <= 1e-9);

  probes.clear();
  probes.push_back(
      GridFunction::sample(0.0, 1.0, 129, [](double x) { return x < 0.5 ? -1.0 : 1.0; }));
  const double small_ts[2] = {0.005, 0.01};
  const auto sign =
      kernel_lipschitz_check(spec, std::span<const double>(small_ts, 2), probes);
  CHECK(sign.max_constant > 0.1);
  CHECK(sign.max_constant < 2.0);
  // scale stability in the pre-mixing regime
  CHECK(sign.fitted[0] == doctest::Approx(sign.fitted[1]).epsilon(0.10));
}

TEST_CASE("exp functional: f == 1 has the closed form in lambda") {
  auto basis = SpectralBasis::make(Bc::periodic, 16, 65);
  const std::size_t steps = 512;
  const double dt = 1.0 / steps;
  const auto noise = sample_she_noise(basis, steps, dt, 80);
  const auto one = mollify(parse_drift("smooth:const=1"), 1);
  const std::vector<std::size_t> snaps = {steps};
  const std::vector<double> lambdas = {0.0, 4.0, 16.0};
  const auto out = she_exp_functional(noise, 0, snaps, lambdas, one, 32);
  CHECK(out[0][0] == doctest::Approx(1.0).epsilon(3e-3));
  for (std::size_t l = 1; l < lambdas.size(); ++l) {
    const double lam = lambdas[l];
    CHECK(out[0][l] == doctest::Approx((1.0 - std::exp(-lam)) / lam).epsilon(2e-2));
  }
}
