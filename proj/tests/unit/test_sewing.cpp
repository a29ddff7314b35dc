#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <memory>

#include "fraclab/gaussian.hpp"
#include "fraclab/metrics.hpp"
#include "fraclab/rng.hpp"
#include "fraclab/sewing.hpp"

using namespace fraclab;

TEST_CASE("additive germs are reproduced exactly at every level") {
  Germ germ{[](double s, double t) { return std::sin(t) - std::sin(s); }, false};
  const auto rep = sew(germ, 0.0, 1.0, 8);
  for (double s : rep.sums) CHECK(s == doctest::Approx(std::sin(1.0)).epsilon(1e-14));
  CHECK(rep.converged);
  CHECK(delta_defect(germ, 0.1, 0.5, 0.9) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("quadratic germ vanishes in the limit with the algebraic defect") {
  Germ germ{[](double s, double t) { return (t - s) * (t - s); }, false};
  const auto rep = sew(germ, 0.0, 1.0, 12);
  CHECK(rep.limit == doctest::Approx(std::pow(2.0, -12.0)).epsilon(1e-12));
  const double s = 0.1, u = 0.35, t = 0.8;
  CHECK(delta_defect(germ, s, u, t) ==
        doctest::Approx(2.0 * (u - s) * (t - u)).epsilon(1e-13));
}

TEST_CASE("left-point germ of a smooth function reproduces its Riemann integral") {
  const std::size_t n = 1 << 14;
  const auto fbm = std::make_shared<FbmPath>(
      sample_fbm(n, 1.0 / static_cast<double>(n), HurstIndex(0.25), 1, 37));
  auto f = [](double x) { return std::cos(x); };
  Germ germ{[&fbm, f, n](double s, double t) {
              const auto i = static_cast<std::size_t>(std::llround(s * n));
              return f(fbm->values[i]) * (t - s);
            },
            false};
  const auto rep = sew(germ, 0.0, 1.0, 14);
  double direct = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    direct += f(fbm->values[i]) / static_cast<double>(n);
  CHECK(rep.limit == doctest::Approx(direct).epsilon(1e-6));
}

TEST_CASE("conditional drift germ: constants and the s = 0 closed form") {
  const std::size_t n = 512;
  const auto fbm = std::make_shared<FbmPath>(
      sample_fbm(n, 1.0 / static_cast<double>(n), HurstIndex(0.25), 1, 38));
  const auto c = mollify(parse_drift("smooth:const=0.9"), 1);
  const auto germ_c = conditional_drift_germ(c, {}, fbm);
  CHECK(germ_c.eval(0.25, 0.75) == doctest::Approx(0.9 * 0.5).epsilon(1e-12));
  CHECK(germ_c.eval(0.5, 0.5) == 0.0);
  CHECK(germ_c.conditional);

  // At s = 0: A_{0,t} = int_0^t G_{sigma^2(0,r)} f(phi_0) dr with the discrete
  // sigma^2(0,r) collapsing onto r^{2H}; checked against direct quadrature of
  // the Gaussian-smoothed drift.
  const auto f = mollify(parse_drift("dirac@0:mass=1"), 64);
  const std::vector<double> phi(n + 1, 0.3);
  const auto germ = conditional_drift_germ(f, phi, fbm);
  const double got = germ.eval(0.0, 1.0);
  double want = 0.0;
  const double dt = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double var = fbm->table->conditional_variance(dt, 0, i);
    want += f.smoothed(var, 0.3) * dt;
  }
  CHECK(got == doctest::Approx(want).epsilon(1e-12));
  // and sigma^2(0,r) tracks r^{2H} closely enough to use the Gaussian closed form
  double want_analytic = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = dt * static_cast<double>(i);
    want_analytic += f.smoothed(std::pow(r, 0.5), 0.3) * dt;
  }
  CHECK(got == doctest::Approx(want_analytic).epsilon(2e-3));
}

TEST_CASE("sew of the conditional germ approaches the pathwise integral") {
  const std::size_t n = 2048;
  const std::size_t paths = 400;
  const auto f = mollify(parse_drift("dirac@0:mass=1"), 64);
  std::vector<double> diffs(paths);
  for (std::size_t p = 0; p < paths; ++p) {
    const auto fbm = std::make_shared<FbmPath>(sample_fbm(
        n, 1.0 / static_cast<double>(n), HurstIndex(0.25), 1, seed_fanout(39, p)));
    const auto germ = conditional_drift_germ(f, {}, fbm);
    const auto rep = sew(germ, 0.0, 1.0, 9);
    double direct = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      direct += f(fbm->values[i]) / static_cast<double>(n);
    diffs[p] = rep.limit - direct;
  }
  double mean = 0.0, sq = 0.0;
  for (double d : diffs) mean += d, sq += d * d;
  mean /= paths;
  const double se = std::sqrt((sq / paths - mean * mean) / paths);
  CHECK(std::abs(mean) <= 3.0 * se + 1e-3);
}

TEST_CASE("conditional-germ defect exponents satisfy the sewing premises") {
  // ||A_{s,t}||_{L2} ~ (t-s)^{1+beta H} (> 1/2) and, for a Lipschitz
  // deterministic shift, ||E^s delta A||_{L2} ~ (t-s)^{2+(beta-1)H} (> 1).
  const std::size_t n = 1024;
  const std::size_t paths = 200;
  const double H = 0.25;
  const auto f = mollify(parse_drift("dirac@0:mass=1"), 128);
  std::vector<double> spans = {1.0 / 64, 1.0 / 32, 1.0 / 16, 1.0 / 8};
  std::vector<double> a_l2(spans.size(), 0.0), d_l2(spans.size(), 0.0);
  for (std::size_t p = 0; p < paths; ++p) {
    const auto fbm = std::make_shared<FbmPath>(sample_fbm(
        n, 1.0 / static_cast<double>(n), HurstIndex(H), 1, seed_fanout(40, p)));
    std::vector<double> phi(n + 1);
    for (std::size_t i = 0; i <= n; ++i) phi[i] = fbm->times[i];
    const auto germ = conditional_drift_germ(f, phi, fbm);
    for (std::size_t k = 0; k < spans.size(); ++k) {
      const double s = 0.25, t = s + spans[k], u = s + 0.5 * spans[k];
      const double a = germ.eval(s, t);
      const double d = delta_defect(germ, s, u, t);
      a_l2[k] += a * a;
      d_l2[k] += d * d;
    }
  }
  for (auto& v : a_l2) v = std::sqrt(v / paths);
  for (auto& v : d_l2) v = std::sqrt(v / paths);
  const auto fit_a = scaling_exponent(spans, a_l2);
  const auto fit_d = scaling_exponent(spans, d_l2);
  CHECK(fit_a.slope > 0.5);
  CHECK(fit_d.slope > 1.0);
}

TEST_CASE("control power check: additivity report, synthetic fit, superadditivity") {
  std::vector<DefectSample> flat;
  for (int i = 0; i < 10; ++i)
    flat.push_back({0.1 * i, 0.1 * i + 0.05, 0.1 * i + 0.1, 0.0});
  auto w_span = [](double s, double t) { return t - s; };
  CHECK(control_power_check(flat, w_span).exact_additive);

  std::vector<DefectSample> synth;
  for (int i = 1; i <= 12; ++i) {
    const double span = 0.5 / i;
    synth.push_back({0.0, span / 2, span, std::pow(span, 1.4)});
  }
  const auto fit = control_power_check(synth, w_span);
  CHECK_FALSE(fit.exact_additive);
  CHECK(fit.fit.slope == doctest::Approx(1.4).epsilon(1e-9));
  CHECK(fit.fit.slope > 1.0);

  // superadditivity of the two canonical controls over sampled triples
  Rng rng(41);
  std::vector<double> path(65);
  for (auto& v : path) v = rng.gaussian();
  auto pvar_pow = [&path](std::size_t a, std::size_t b, double p) {
    std::vector<double> seg(path.begin() + a, path.begin() + b + 1);
    return std::pow(p_variation(seg, p), p);
  };
  for (std::size_t s : {std::size_t{0}, std::size_t{8}})
    for (std::size_t u : {std::size_t{24}, std::size_t{32}})
      for (std::size_t t : {std::size_t{48}, std::size_t{64}}) {
        CHECK((u - s) + (t - u) <= (t - s));
        CHECK(pvar_pow(s, u, 2.0) + pvar_pow(u, t, 2.0) <= pvar_pow(s, t, 2.0) + 1e-12);
      }
}
