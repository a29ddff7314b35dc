#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <vector>

#include "fraclab/metrics.hpp"
#include "fraclab/rng.hpp"
#include "oracles.hpp"

using namespace fraclab;

TEST_CASE("wasserstein1: identity, point masses, shifted gaussians") {
  std::vector<double> a = {0.3, -1.0, 2.0};
  CHECK(wasserstein1_1d(a, a) == 0.0);

  std::vector<double> zeros(50, 0.0), cs(50, 1.7);
  CHECK(wasserstein1_1d(zeros, cs) == doctest::Approx(1.7));

  Rng rng(1);
  std::vector<double> x(10000), y(10000);
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = rng.gaussian();
    y[i] = rng.gaussian() + 0.8;
  }
  // W1 of N(0,1) vs N(m,1) is |m|; MC stderr ~ n^{-1/2}
  CHECK(wasserstein1_1d(x, y) == doctest::Approx(0.8).epsilon(0.06));

  std::vector<double> shorter(5000, 0.0);
  CHECK(wasserstein1_1d(zeros, shorter) == 0.0);  // unequal counts
}

TEST_CASE("wasserstein1 triangle inequality on sampled triples") {
  Rng rng(2);
  std::vector<double> a(2000), b(2000), c(2000);
  for (std::size_t i = 0; i < a.size(); ++i) {
    a[i] = rng.gaussian();
    b[i] = 0.5 * rng.gaussian() + 1.0;
    c[i] = 2.0 * rng.gaussian() - 0.5;
  }
  CHECK(wasserstein1_1d(a, c) <= wasserstein1_1d(a, b) + wasserstein1_1d(b, c) + 1e-12);
}

TEST_CASE("sync coupling bound clips at one and is relabel-invariant") {
  std::vector<double> gaps = {0.2, 3.0, 0.5, 7.0};
  const auto est = sync_coupling_wbound(gaps);
  CHECK(est.value == doctest::Approx((0.2 + 1.0 + 0.5 + 1.0) / 4.0));
  std::vector<double> relabeled = {7.0, 0.5, 3.0, 0.2};
  CHECK(sync_coupling_wbound(relabeled).value == est.value);
  std::vector<double> zeros(4, 0.0);
  CHECK(sync_coupling_wbound(zeros).value == 0.0);
  std::vector<double> big(4, 5.0);
  CHECK(sync_coupling_wbound(big).value == 1.0);
}

TEST_CASE("histogram TV: trivia and the shifted-gaussian value") {
  Rng rng(3);
  std::vector<double> x(100000), y(100000), z(100000);
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = rng.gaussian();
    y[i] = rng.gaussian() + 1.0;
    z[i] = rng.gaussian();
  }
  // TV(N(0,1), N(1,1)) = erf(1/(2 sqrt 2)) = 0.3829249...
  CHECK(tv_histogram(x, y, 64) == doctest::Approx(0.3829249225480261).epsilon(0.05));
  CHECK(tv_histogram(x, z, 64) < 0.05);
  CHECK(tv_histogram(x, y, 64) == tv_histogram(y, x, 64));

  std::vector<double> lo(5000), hi(5000);
  for (std::size_t i = 0; i < lo.size(); ++i) {
    lo[i] = -5.0 + 0.1 * rng.uniform01();
    hi[i] = 5.0 + 0.1 * rng.uniform01();
  }
  CHECK(tv_histogram(lo, hi, 64) == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(tv_histogram(x, y, 64) <= 1.0);
}

TEST_CASE("p-variation: monotone paths, jumps, zigzags, brute force") {
  std::vector<double> mono = {0.0, 0.5, 0.7, 1.4, 2.0};
  CHECK(p_variation(mono, 1.0) == doctest::Approx(2.0));

  std::vector<double> jump = {0.0, 0.0, 3.0, 3.0};
  for (double p : {1.0, 1.5, 2.0}) CHECK(p_variation(jump, p) == doctest::Approx(3.0));

  // zigzag with k = 4 teeth of height h = 1: 1-variation is k*h... each tooth
  // contributes rise plus fall except the boundary profile; brute force is the
  // reference on a 9-point instance.
  std::vector<double> zig = {0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0};
  CHECK(p_variation(zig, 1.0) ==
        doctest::Approx(oracles::brute_force_p_variation(zig, 1.0)));
  CHECK(p_variation(zig, 1.0) == doctest::Approx(8.0));
  for (double p : {1.3, 2.0, 3.0})
    CHECK(p_variation(zig, p) ==
          doctest::Approx(oracles::brute_force_p_variation(zig, p)).epsilon(1e-12));

  Rng rng(4);
  std::vector<double> rough(9);
  for (auto& v : rough) v = rng.gaussian();
  for (double p : {1.0, 1.7, 2.5})
    CHECK(p_variation(rough, p) ==
          doctest::Approx(oracles::brute_force_p_variation(rough, p)).epsilon(1e-12));
}

TEST_CASE("p-variation is nonincreasing in p and superadditive at power p") {
  Rng rng(5);
  std::vector<double> path(65);
  for (auto& v : path) v = rng.gaussian();
  double prev = 1e300;
  for (double p : {1.0, 1.5, 2.0, 3.0}) {
    const double cur = p_variation(path, p);
    CHECK(cur <= prev + 1e-12);
    prev = cur;
  }
  // control property of w(s,t) = [f]_{p-var;[s,t]}^p over a split
  const double p = 2.0;
  std::vector<double> left(path.begin(), path.begin() + 33);
  std::vector<double> right(path.begin() + 32, path.end());
  const double whole = std::pow(p_variation(path, p), p);
  const double parts =
      std::pow(p_variation(left, p), p) + std::pow(p_variation(right, p), p);
  CHECK(parts <= whole + 1e-12);
}

TEST_CASE("scaling exponent fits") {
  std::vector<double> xs = {1.0, 2.0, 4.0, 8.0};
  std::vector<double> quad(4), flat(4, 3.3);
  for (std::size_t i = 0; i < 4; ++i) quad[i] = xs[i] * xs[i];
  const auto f1 = scaling_exponent(xs, quad);
  CHECK(f1.slope == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(f1.stderr_ == doctest::Approx(0.0));
  const auto f2 = scaling_exponent(xs, flat);
  CHECK(f2.slope == doctest::Approx(0.0));

  Rng rng(6);
  std::vector<double> xs8, ys8;
  for (int i = 0; i < 8; ++i) {
    const double x = std::pow(2.0, i);
    xs8.push_back(x);
    ys8.push_back(std::pow(x, -0.75) * (1.0 + 0.05 * rng.gaussian()));
  }
  const auto f3 = scaling_exponent(xs8, ys8);
  CHECK(f3.slope == doctest::Approx(-0.75).epsilon(0.07));

  std::vector<double> bad = {1.0, -2.0, 3.0};
  CHECK_THROWS_AS(scaling_exponent(bad, bad), std::invalid_argument);
}
