#include "fraclab/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace fraclab {

Estimate mean_estimate(std::span<const double> xs) {
  if (xs.empty()) throw std::invalid_argument("mean_estimate: empty sample");
  double sum = 0.0;
  for (double x : xs) sum += x;
  const double mean = sum / static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  Estimate e;
  e.value = mean;
  e.n = xs.size();
  e.stderr_ = xs.size() > 1
                  ? std::sqrt(ss / (static_cast<double>(xs.size() - 1) *
                                    static_cast<double>(xs.size())))
                  : 0.0;
  return e;
}

double wasserstein1_1d(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("wasserstein1_1d: empty sample");
  std::vector<double> sa(a.begin(), a.end()), sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  if (sa.size() == sb.size()) {
    double acc = 0.0;
    for (std::size_t i = 0; i < sa.size(); ++i) acc += std::abs(sa[i] - sb[i]);
    return acc / static_cast<double>(sa.size());
  }
  const std::size_t m = std::max(sa.size(), sb.size());
  auto quantile = [](const std::vector<double>& s, double u) {
    const auto idx = static_cast<std::size_t>(u * static_cast<double>(s.size()));
    return s[std::min(idx, s.size() - 1)];
  };
  double acc = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double u = (static_cast<double>(i) + 0.5) / static_cast<double>(m);
    acc += std::abs(quantile(sa, u) - quantile(sb, u));
  }
  return acc / static_cast<double>(m);
}

Estimate sync_coupling_wbound(std::span<const double> sup_gaps) {
  if (sup_gaps.empty())
    throw std::invalid_argument("sync_coupling_wbound: empty ensemble");
  std::vector<double> clipped(sup_gaps.size());
  for (std::size_t i = 0; i < sup_gaps.size(); ++i)
    clipped[i] = std::min(sup_gaps[i], 1.0);
  return mean_estimate(clipped);
}

double tv_histogram(std::span<const double> a, std::span<const double> b, int bins) {
  if (a.empty() || b.empty()) throw std::invalid_argument("tv_histogram: empty sample");
  if (bins < 2) throw std::invalid_argument("tv_histogram: need >= 2 bins");
  double sum = 0.0, sum_sq = 0.0;
  for (double x : a) sum += x, sum_sq += x * x;
  for (double x : b) sum += x, sum_sq += x * x;
  const double n = static_cast<double>(a.size() + b.size());
  const double mean = sum / n;
  const double sd = std::sqrt(std::max(1e-300, sum_sq / n - mean * mean));
  const double lo = mean - 5.0 * sd;
  const double hi = mean + 5.0 * sd;
  const double width = (hi - lo) / bins;
  std::vector<double> pa(bins + 1, 0.0), pb(bins + 1, 0.0);  // last slot: out of range
  auto fill = [&](std::span<const double> xs, std::vector<double>& h) {
    for (double x : xs) {
      if (x < lo || x >= hi) {
        h[bins] += 1.0;
      } else {
        h[static_cast<std::size_t>((x - lo) / width)] += 1.0;
      }
    }
    for (double& v : h) v /= static_cast<double>(xs.size());
  };
  fill(a, pa);
  fill(b, pb);
  double tv = 0.0;
  for (int i = 0; i <= bins; ++i) tv += std::abs(pa[i] - pb[i]);
  return 0.5 * tv;
}

double p_variation(std::span<const double> values, double p) {
  if (p < 1.0) throw std::invalid_argument("p_variation: need p >= 1");
  const std::size_t n = values.size();
  if (n < 2) return 0.0;
  // dp[j] = max over partitions ending at node j of sum |increment|^p.
  std::vector<double> dp(n, 0.0);
  for (std::size_t j = 1; j < n; ++j) {
    double best = 0.0;
    for (std::size_t i = 0; i < j; ++i) {
      const double cand = dp[i] + std::pow(std::abs(values[j] - values[i]), p);
      best = std::max(best, cand);
    }
    dp[j] = best;
  }
  return std::pow(dp[n - 1], 1.0 / p);
}

SlopeFit scaling_exponent(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.size() < 3)
    throw std::invalid_argument("scaling_exponent: need >= 3 (x,y) pairs");
  SlopeFit fit;
  fit.xs.assign(xs.begin(), xs.end());
  fit.ys.assign(ys.begin(), ys.end());
  const std::size_t n = xs.size();
  std::vector<double> lx(n), ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (xs[i] <= 0.0 || ys[i] <= 0.0)
      throw std::invalid_argument("scaling_exponent: data must be positive");
    lx[i] = std::log(xs[i]);
    ly[i] = std::log(ys[i]);
  }
  for (std::size_t i = 0; i + 1 < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (lx[i] == lx[j])
        throw std::invalid_argument("scaling_exponent: abscissae must be distinct");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) mx += lx[i], my += ly[i];
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double rss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = ly[i] - (fit.intercept + fit.slope * lx[i]);
    rss += r * r;
  }
  fit.stderr_ = n > 2 ? std::sqrt(rss / (static_cast<double>(n - 2) * sxx)) : 0.0;
  fit.r2 = syy > 0.0 ? 1.0 - rss / syy : 1.0;
  return fit;
}

}  // namespace fraclab
