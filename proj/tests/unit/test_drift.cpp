#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "fraclab/drift.hpp"
#include "fraclab/gaussian.hpp"

using namespace fraclab;

TEST_CASE("mollified dirac matches the gaussian closed form") {
  const auto b = parse_drift("dirac@0:mass=1");
  const auto b4 = mollify(b, 4);
  CHECK(b4(0.0) == doctest::Approx(0.7978845608028654).epsilon(1e-14));
  CHECK(b4(0.5) == doctest::Approx(gamma_density(0.25, 0.5)).epsilon(1e-14));
}

TEST_CASE("mollification is linear in the drift") {
  const auto b = parse_drift("dirac@0.3:mass=1");
  const auto scaled = b.scaled(-2.5);
  const auto m1 = mollify(b, 16);
  const auto m2 = mollify(scaled, 16);
  for (double x : {-1.0, 0.0, 0.3, 2.0})
    CHECK(m2(x) == doctest::Approx(-2.5 * m1(x)).epsilon(1e-13));
}

TEST_CASE("smooth drifts converge in sup norm under mollification") {
  const auto b = parse_drift("smooth:cos");
  double prev = 1e9;
  for (int n : {4, 16, 64}) {
    const auto bn = mollify(b, n);
    double sup = 0.0;
    for (double x = -3.0; x <= 3.0; x += 0.05)
      sup = std::max(sup, std::abs(bn(x) - std::cos(x)));
    CHECK(sup < prev);
    prev = sup;
  }
  CHECK(prev < 0.01);
}

TEST_CASE("gaussian semigroup composition of mollifications is exact") {
  const auto b = parse_drift("dirac@0:mass=1");
  const int n = 8, m = 24;
  const auto twice = mollify(mollify(b, n).as_drift(), m);
  // combined level nm/(n+m)
  const auto once = mollify(b, 1);
  const double combined_tau = 1.0 / n + 1.0 / m;
  for (double x : {-0.7, 0.0, 0.4})
    CHECK(twice(x) == doctest::Approx(b.heat_eval(combined_tau, x)).epsilon(1e-12));
}

TEST_CASE("catalog besov norms stay bounded along the mollification sequence") {
  for (const auto& id : drift_catalog()) {
    const auto b = parse_drift(id);
    double sup = 0.0;
    for (int n : {4, 16, 64, 256, 1024})
      sup = std::max(sup, besov_norm_neg(mollify(b, n).as_drift(), b.nominal_alpha));
    CHECK(sup < 50.0);
    CHECK((sup > 0.0 || id == "smooth:zero"));
  }
}

TEST_CASE("surrogate distance to the mollification decreases in n") {
  const auto b = parse_drift("dirac@0:mass=1");
  const double ap = b.nominal_alpha - 0.1;
  double prev = 1e9;
  for (int n : {4, 16, 64, 256}) {
    const double d = c_alpha_minus_distance(b, mollify(b, n).as_drift(), ap);
    CHECK(d < prev * 1.10);  // 10% estimator-noise allowance
    prev = d;
  }
}

TEST_CASE("surrogate distance: coincidence and triangle inequality") {
  const auto b = parse_drift("dirac@0:mass=1");
  const auto g = parse_drift("measure:uniform[0,0.5]");
  const auto h = parse_drift("smooth:bump");
  CHECK(c_alpha_minus_distance(b, b, -1.2) == 0.0);
  const double bg = c_alpha_minus_distance(b, g, -1.2);
  const double gh = c_alpha_minus_distance(g, h, -1.2);
  const double bh = c_alpha_minus_distance(b, h, -1.2);
  CHECK(bh <= bg + gh + 1e-12);
}

TEST_CASE("weak admissibility is a strict inequality in the displayed form") {
  CHECK(admissible_weak(-0.4, 0.5));
  CHECK(admissible_weak(-1.4, 0.25));
  CHECK_FALSE(admissible_weak(0.5 - 0.5 / 0.25, 0.25));
  CHECK_FALSE(admissible_weak(-0.51, 0.5));
}

TEST_CASE("strong d=1 admissibility: product condition and measure override") {
  // (1 + alpha H)(alpha + 1/(2H)) at alpha=-1, H=0.25: 0.75 * 1 = 0.75 > 0.5
  CHECK(admissible_strong_d1(-1.0, 0.25, false));
  CHECK(admissible_strong_d1(-1.05, 0.25, false));  // beyond alpha > 1 - 1/(2H)
  CHECK_FALSE(admissible_strong_d1(-1.4, 0.25, false));
  CHECK(admissible_strong_d1(-1.4, 0.25, true));
}

TEST_CASE("drift catalog ids parse and evaluate") {
  for (const auto& id : drift_catalog()) {
    const auto b = parse_drift(id);
    const auto bn = mollify(b, 64);
    CHECK(std::isfinite(bn(0.123)));
  }
  const auto pair = parse_drift("dirac-pair@0.5:mass=2");
  const auto pn = mollify(pair, 64);
  CHECK(pn(0.5) > 0.0);
  CHECK(pn(-0.5) < 0.0);
  CHECK(pn(0.0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(pair.is_nonneg_measure() == false);
  CHECK(parse_drift("measure:uniform[0,0.5]").is_nonneg_measure());
  CHECK_THROWS_AS(parse_drift("nonsense:id"), std::invalid_argument);
}

TEST_CASE("weierstrass-derivative drift has the declared regularity slot") {
  const auto w = parse_drift("weierstrass:gamma=0.3:deriv");
  CHECK(w.nominal_alpha == doctest::Approx(-0.7));
  const auto wn = mollify(w, 256);
  CHECK(std::isfinite(wn(0.37)));
  CHECK(wn(0.0) == doctest::Approx(0.0).epsilon(1e-9));  // odd series
}
