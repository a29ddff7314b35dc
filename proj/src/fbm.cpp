#include "fraclab/fbm.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <mutex>
#include <stdexcept>

#include "fraclab/parallel.hpp"
#include "fraclab/quadrature.hpp"
#include "fraclab/rng.hpp"

namespace fraclab {

namespace {

double beta_fn(double a, double b) {
  return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
}

/// J(s,t) = int_s^t u^{H-3/2} (u-s)^{H-1/2} du with the u = s endpoint
/// singularity removed by substitution. Fixed-cost quadrature: the kernel
/// table build calls this inside other quadratures, so no adaptivity here.
double inner_j(double s, double t, double H) {
  const double span = t - s;
  if (span <= 0.0) return 0.0;
  if (s >= 0.25 * span) {
    // u = s + span v^2 keeps the integrand smooth when s is not small.
    auto g = [&](double v) {
      return 2.0 * std::pow(v, 2.0 * H) * std::pow(s + span * v * v, H - 1.5);
    };
    return std::pow(span, H + 0.5) * quad::gauss_legendre(g, 0.0, 1.0, 16);
  }
  // Small s relative to the span: split at u = 2s. Below the split,
  // u = s(1 + wm y^2); above it, a log substitution tames the power tail.
  const double u_split = std::min(2.0 * s, t);
  const double wm = u_split / s - 1.0;
  auto near = [&](double y) {
    return std::pow(y, 2.0 * H) * std::pow(1.0 + wm * y * y, H - 1.5);
  };
  double out = std::pow(s, 2.0 * H - 1.0) * 2.0 * std::pow(wm, H + 0.5) *
               quad::gauss_legendre(near, 0.0, 1.0, 16);
  if (t > u_split) {
    const double a = std::log(u_split);
    const double b = std::log(t);
    auto far = [&](double x) {
      const double u = std::exp(x);
      return std::pow(u, H - 0.5) * std::pow(u - s, H - 0.5);
    };
    const int panels = std::min(64, std::max(2, static_cast<int>(1.5 * (b - a)) + 2));
    out += quad::gauss_legendre_panels(far, a, b, panels, 16);
  }
  return out;
}

constexpr std::uint64_t kTableMagic = 0x46524C4B54423031ull;  // "FRLKTB01"

std::uint64_t fnv1a(const unsigned char* data, std::size_t n) {
  std::uint64_t h = 1469598103934665603ull;
  for (std::size_t i = 0; i < n; ++i) {
    h ^= data[i];
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace

HurstIndex::HurstIndex(double v) : value(v) {
  if (!(v > 0.0 && v <= 0.5))
    throw std::invalid_argument("HurstIndex: value must lie in (0, 1/2]");
}

double volterra_norm_const(double H) {
  if (H == 0.5) return 1.0;
  return std::sqrt(2.0 * H / ((1.0 - 2.0 * H) * beta_fn(1.0 - 2.0 * H, H + 0.5)));
}

double volterra_kernel(double t, double s, HurstIndex H) {
  if (t <= 0.0) throw std::invalid_argument("volterra_kernel: t must be positive");
  if (s >= t) return 0.0;
  if (s <= 0.0)
    throw std::invalid_argument(
        "volterra_kernel: s = 0 endpoint is singular; use cell averages");
  const double h = H.value;
  if (h == 0.5) return 1.0;
  const double c = volterra_norm_const(h);
  const double term1 = std::pow(t / s, h - 0.5) * std::pow(t - s, h - 0.5);
  return c * (term1 + (0.5 - h) * std::pow(s, 0.5 - h) * inner_j(s, t, h));
}

BrownianDriver sample_driver(std::size_t n_steps, double dt, int dim,
                             std::uint64_t seed) {
  if (n_steps < 1) throw std::invalid_argument("sample_driver: need n_steps >= 1");
  if (dt <= 0.0) throw std::invalid_argument("sample_driver: dt must be positive");
  if (dim < 1) throw std::invalid_argument("sample_driver: dim must be >= 1");
  BrownianDriver d;
  d.dt = dt;
  d.dim = dim;
  d.seed = seed;
  d.increments.resize(n_steps * static_cast<std::size_t>(dim));
  Rng rng(seed);
  const double s = std::sqrt(dt);
  for (double& x : d.increments) x = s * rng.gaussian();
  return d;
}

VolterraKernelTable VolterraKernelTable::build(double H, std::size_t n_steps,
                                               int workers) {
  if (!(H > 0.0 && H <= 0.5))
    throw std::invalid_argument("VolterraKernelTable: H must lie in (0, 1/2]");
  if (n_steps < 1) throw std::invalid_argument("VolterraKernelTable: empty grid");

  VolterraKernelTable tab;
  tab.H_ = H;
  tab.n_ = n_steps;
  tab.cells_.assign(n_steps * (n_steps + 1) / 2, 1.0);
  if (H == 0.5) return tab;  // K == 1: Brownian case, all cell averages are 1

  const std::size_t n = n_steps;
  const double c = volterra_norm_const(H);
  const double hm = H - 0.5;   // kernel exponent
  const double hp = 0.5 - H;   // its negative
  auto cell_at = [&tab](std::size_t i, std::size_t j) -> double& {
    return tab.cells_[(i - 1) * i / 2 + j];
  };

  // GL nodes of the unit segment [i-1, i] with u^{H-3/2} folded into the
  // weights; shared by every column sweep.
  constexpr int kSegOrder = 4;
  const double segx[kSegOrder] = {-0.86113631159405257, -0.33998104358485626,
                                  0.33998104358485626, 0.86113631159405257};
  const double segw[kSegOrder] = {0.34785484513745368, 0.65214515486254621,
                                  0.65214515486254621, 0.34785484513745368};
  std::vector<double> seg_u(n * kSegOrder), seg_a(n * kSegOrder);
  std::vector<double> t_pow(n + 1, 0.0);  // t_i^{H-1/2}
  for (std::size_t i = 1; i <= n; ++i) {
    t_pow[i] = std::pow(static_cast<double>(i), hm);
    for (int g = 0; g < kSegOrder; ++g) {
      const double u = (static_cast<double>(i) - 0.5) + 0.5 * segx[g];
      seg_u[(i - 1) * kSegOrder + g] = u;
      seg_a[(i - 1) * kSegOrder + g] = 0.5 * segw[g] * std::pow(u, H - 1.5);
    }
  }

  // Diagonal cells: 2 * int_0^1 v K(t, t - v^2) dv, t = j+1 (j >= 1).
  auto diagonal_cell = [&](std::size_t j) {
    const double t = static_cast<double>(j + 1);
    auto f = [&](double v) {
      const double eps = v * v;
      const double s = t - eps;
      const double term1 = std::pow(t / s, hm) * std::pow(eps, hm);
      return v * (term1 + hp * std::pow(s, hp) * inner_j(s, t, H));
    };
    return 2.0 * c * quad::gauss_legendre(f, 0.0, 1.0, 32);
  };

  auto sweep_column = [&](std::size_t j, const std::vector<double>& sigma,
                          const std::vector<double>& cw) {
    const std::size_t nq = sigma.size();
    std::vector<double> jacc(nq), spow(nq);
    for (std::size_t q = 0; q < nq; ++q) {
      jacc[q] = inner_j(sigma[q], static_cast<double>(j + 1), H);
      spow[q] = std::pow(sigma[q], hp);
    }
    for (std::size_t i = j + 2; i <= n; ++i) {
      const double ti = static_cast<double>(i);
      double acc = 0.0;
      for (std::size_t q = 0; q < nq; ++q) {
        const double sg = sigma[q];
        if (i - j > 16) {  // far segments: 2-point rule is ample
          const double u0 = ti - 0.78867513459481287;
          const double u1 = ti - 0.21132486540518713;
          jacc[q] += 0.5 * (std::pow(u0, H - 1.5) * std::pow(u0 - sg, hm) +
                            std::pow(u1, H - 1.5) * std::pow(u1 - sg, hm));
        } else {
          const double* su = seg_u.data() + (i - 1) * kSegOrder;
          const double* sa = seg_a.data() + (i - 1) * kSegOrder;
          double seg = 0.0;
          for (int g = 0; g < kSegOrder; ++g) seg += sa[g] * std::pow(su[g] - sg, hm);
          jacc[q] += seg;
        }
        const double kval =
            c * (t_pow[i] * spow[q] * std::pow(ti - sg, hm) + hp * spow[q] * jacc[q]);
        acc += cw[q] * kval;
      }
      cell_at(i, j) = acc;
    }
  };

  parallel_for(n, workers, [&](std::size_t j) {
    if (j == 0) {
      // Corner cell int_0^1 K(1,s) ds; both endpoints singular.
      auto left = [&](double w) {
        const double s = w * w;
        return 2.0 * w *
               (c * (t_pow[1] * std::pow(s, hp) * std::pow(1.0 - s, hm) +
                     hp * std::pow(s, hp) * inner_j(s, 1.0, H)));
      };
      auto right = [&](double v) {
        const double s = 1.0 - v * v;
        return 2.0 * v *
               (c * (t_pow[1] * std::pow(s, hp) * std::pow(1.0 - s, hm) +
                     hp * std::pow(s, hp) * inner_j(s, 1.0, H)));
      };
      const double split = std::sqrt(0.5);
      cell_at(1, 0) = quad::adaptive(left, 0.0, split, 1e-10, 36) +
                      quad::adaptive(right, 0.0, split, 1e-10, 36);
      // s = w^2 nodes absorb the s^{H-1/2} blowup at the origin.
      const double glx[16] = {
          -0.98940093499164994,  -0.9445750230732326,  -0.86563120238783176,
          -0.755404408355003,    -0.61787624440264377, -0.45801677765722737,
          -0.28160355077925892,  -0.095012509837637454, 0.095012509837637454,
          0.28160355077925892,   0.45801677765722737,  0.61787624440264377,
          0.755404408355003,     0.86563120238783176,  0.9445750230732326,
          0.98940093499164994};
      const double glw[16] = {
          0.027152459411754037, 0.062253523938647706, 0.095158511682492591,
          0.12462897125553403,  0.14959598881657676,  0.16915651939500262,
          0.18260341504492361,  0.18945061045506859,  0.18945061045506859,
          0.18260341504492361,  0.16915651939500262,  0.14959598881657676,
          0.12462897125553403,  0.095158511682492591, 0.062253523938647706,
          0.027152459411754037};
      std::vector<double> sigma(16), cw(16);
      for (int q = 0; q < 16; ++q) {
        const double w = 0.5 + 0.5 * glx[q];
        sigma[q] = w * w;
        cw[q] = 0.5 * glw[q] * 2.0 * w;
      }
      sweep_column(0, sigma, cw);
    } else {
      cell_at(j + 1, j) = diagonal_cell(j);
      const double glx[8] = {-0.96028985649753618, -0.79666647741362673,
                             -0.52553240991632899, -0.18343464249564978,
                             0.18343464249564978,  0.52553240991632899,
                             0.79666647741362673,  0.96028985649753618};
      const double glw[8] = {0.10122853629037669, 0.22238103445337434,
                             0.31370664587788705, 0.36268378337836177,
                             0.36268378337836177, 0.31370664587788705,
                             0.22238103445337434, 0.10122853629037669};
      std::vector<double> sigma(8), cw(8);
      for (int q = 0; q < 8; ++q) {
        sigma[q] = (static_cast<double>(j) + 0.5) + 0.5 * glx[q];
        cw[q] = 0.5 * glw[q];
      }
      sweep_column(j, sigma, cw);
    }
  });

  // Mean cell averages understate the variance share of the singular diagonal
  // cell (Jensen gap). The diagonal entry carries the row's L2 correction so
  // the discrete process has Var B_{t_i} = t_i^{2H} exactly; off-diagonal
  // covariances keep the mean-average values.
  for (std::size_t i = 1; i <= n; ++i) {
    double partial = 0.0;
    for (std::size_t k = 0; k + 1 < i; ++k) {
      const double v = cell_at(i, k);
      partial += v * v;
    }
    const double want = std::pow(static_cast<double>(i), 2.0 * H);
    cell_at(i, i - 1) = std::sqrt(std::max(0.0, want - partial));
  }
  return tab;
}

std::span<const double> VolterraKernelTable::row(std::size_t i) const {
  if (i < 1 || i > n_) throw std::out_of_range("VolterraKernelTable::row");
  return {cells_.data() + (i - 1) * i / 2, i};
}

double VolterraKernelTable::scale(double dt) const {
  return std::pow(dt, H_ - 0.5);
}

double VolterraKernelTable::conditional_variance(double dt, std::size_t s_idx,
                                                 std::size_t r_idx) const {
  if (s_idx > r_idx || r_idx > n_)
    throw std::invalid_argument("conditional_variance: bad node indices");
  if (r_idx == 0 || s_idx == r_idx) return 0.0;
  const auto r = row(r_idx);
  double acc = 0.0;
  for (std::size_t j = s_idx; j < r_idx; ++j) acc += r[j] * r[j];
  return acc * std::pow(dt, 2.0 * H_);
}

void VolterraKernelTable::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("kernel table: cannot open " + path);
  const std::uint64_t n64 = n_;
  const std::uint64_t checksum = fnv1a(
      reinterpret_cast<const unsigned char*>(cells_.data()), cells_.size() * sizeof(double));
  out.write(reinterpret_cast<const char*>(&kTableMagic), 8);
  out.write(reinterpret_cast<const char*>(&H_), 8);
  out.write(reinterpret_cast<const char*>(&n64), 8);
  out.write(reinterpret_cast<const char*>(cells_.data()), cells_.size() * sizeof(double));
  out.write(reinterpret_cast<const char*>(&checksum), 8);
  if (!out) throw std::runtime_error("kernel table: write failed for " + path);
}

std::shared_ptr<const VolterraKernelTable> VolterraKernelTable::load(
    const std::string& path, double H, std::size_t n_steps) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return nullptr;
  std::uint64_t magic = 0, n64 = 0, checksum = 0;
  double h = 0.0;
  in.read(reinterpret_cast<char*>(&magic), 8);
  in.read(reinterpret_cast<char*>(&h), 8);
  in.read(reinterpret_cast<char*>(&n64), 8);
  if (!in || magic != kTableMagic || h != H || n64 != n_steps) return nullptr;
  auto tab = std::make_shared<VolterraKernelTable>();
  tab->H_ = h;
  tab->n_ = n_steps;
  tab->cells_.resize(n_steps * (n_steps + 1) / 2);
  in.read(reinterpret_cast<char*>(tab->cells_.data()), tab->cells_.size() * sizeof(double));
  in.read(reinterpret_cast<char*>(&checksum), 8);
  if (!in) return nullptr;
  const std::uint64_t want = fnv1a(reinterpret_cast<const unsigned char*>(tab->cells_.data()),
                                   tab->cells_.size() * sizeof(double));
  if (want != checksum) return nullptr;
  return tab;
}

std::shared_ptr<const VolterraKernelTable> kernel_table(double H, std::size_t n_steps,
                                                        int workers) {
  static std::mutex mutex;
  static std::map<std::pair<double, std::size_t>,
                  std::shared_ptr<const VolterraKernelTable>>
      cache;
  const auto key = std::make_pair(H, n_steps);
  {
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  auto built = std::make_shared<VolterraKernelTable>(
      VolterraKernelTable::build(H, n_steps, workers));
  std::lock_guard<std::mutex> lock(mutex);
  auto [it, inserted] = cache.emplace(key, built);
  return it->second;
}

FbmPath fbm_from_driver(BrownianDriver driver,
                        std::shared_ptr<const VolterraKernelTable> table) {
  if (!table) throw std::invalid_argument("fbm_from_driver: null table");
  const std::size_t n = driver.n_steps();
  if (n != table->n_steps())
    throw std::invalid_argument("fbm_from_driver: driver/table size mismatch");
  const int dim = driver.dim;
  FbmPath p;
  p.dt = driver.dt;
  p.dim = dim;
  p.times.resize(n + 1);
  for (std::size_t i = 0; i <= n; ++i) p.times[i] = driver.dt * static_cast<double>(i);
  p.values.assign((n + 1) * static_cast<std::size_t>(dim), 0.0);
  const double sc = table->scale(driver.dt);
  for (std::size_t i = 1; i <= n; ++i) {
    const auto r = table->row(i);
    for (int cpt = 0; cpt < dim; ++cpt) {
      double acc = 0.0;
      const double* dw = driver.increments.data() + cpt;
      for (std::size_t j = 0; j < i; ++j) acc += r[j] * dw[j * dim];
      p.values[i * dim + cpt] = sc * acc;
    }
  }
  p.driver = std::move(driver);
  p.table = std::move(table);
  return p;
}

FbmPath sample_fbm(std::size_t n_steps, double dt, HurstIndex H, int dim,
                   std::uint64_t seed) {
  return fbm_from_driver(sample_driver(n_steps, dt, dim, seed),
                         kernel_table(H.value, n_steps));
}

double fbm_covariance(double s, double t, double H) {
  return 0.5 * (std::pow(s, 2.0 * H) + std::pow(t, 2.0 * H) -
                std::pow(std::abs(t - s), 2.0 * H));
}

std::vector<double> sample_fbm_cholesky(std::span<const double> times, double H,
                                        std::uint64_t seed) {
  // times[0] must be 0; the factorization acts on nodes 1..n.
  if (times.size() < 2 || times[0] != 0.0)
    throw std::invalid_argument("sample_fbm_cholesky: times must start at 0");
  const std::size_t n = times.size() - 1;
  std::vector<double> cov(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      cov[i * n + j] = fbm_covariance(times[i + 1], times[j + 1], H);
  // In-place lower Cholesky.
  std::vector<double> L(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double acc = cov[i * n + j];
      for (std::size_t k = 0; k < j; ++k) acc -= L[i * n + k] * L[j * n + k];
      if (i == j) {
        if (acc <= 0.0)
          throw std::runtime_error("sample_fbm_cholesky: covariance not SPD");
        L[i * n + i] = std::sqrt(acc);
      } else {
        L[i * n + j] = acc / L[j * n + j];
      }
    }
  }
  Rng rng(seed);
  std::vector<double> z(n);
  for (auto& v : z) v = rng.gaussian();
  std::vector<double> out(times.size(), 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t k = 0; k <= i; ++k) acc += L[i * n + k] * z[k];
    out[i + 1] = acc;
  }
  return out;
}

std::vector<double> conditional_mean(const FbmPath& path, std::size_t s_idx,
                                     std::size_t r_idx) {
  if (s_idx > r_idx || r_idx >= path.times.size())
    throw std::invalid_argument("conditional_mean: need grid nodes with s <= r");
  const int dim = path.dim;
  std::vector<double> out(dim, 0.0);
  if (r_idx == 0) return out;
  for (int cpt = 0; cpt < dim; ++cpt) out[cpt] = path.value(r_idx, cpt);
  if (s_idx == r_idx) return out;
  const auto row = path.table->row(r_idx);
  const double sc = path.table->scale(path.dt);
  for (int cpt = 0; cpt < dim; ++cpt) {
    double tail = 0.0;
    const double* dw = path.driver.increments.data() + cpt;
    for (std::size_t j = s_idx; j < r_idx; ++j) tail += row[j] * dw[j * dim];
    out[cpt] -= sc * tail;
  }
  return out;
}

namespace {

/// v with the constant set to 1; shared by the public op and the calibration.
std::vector<double> girsanov_v_raw(std::span<const double> times,
                                   std::span<const double> beta, int dim, double H,
                                   std::size_t stride) {
  const std::size_t n = times.size() - 1;
  if (beta.size() != (n + 1) * static_cast<std::size_t>(dim))
    throw std::invalid_argument("girsanov_v: beta size mismatch");
  if (stride == 0 || n % stride != 0)
    throw std::invalid_argument("girsanov_v: stride must divide n_steps");
  const std::size_t n_out = n / stride + 1;
  std::vector<double> v(n_out * static_cast<std::size_t>(dim), 0.0);
  if (H == 0.5) {
    for (std::size_t k = 0; k < n_out; ++k)
      for (int cpt = 0; cpt < dim; ++cpt)
        v[k * dim + cpt] = beta[(k * stride) * dim + cpt];
    return v;
  }
  const double dt = times[1] - times[0];
  const double mu = 0.5 - H;  // exponent of the integrated singular factor
  // phi(s) = s^{1/2-H} beta(s), piecewise linear between nodes.
  std::vector<double> phi((n + 1) * static_cast<std::size_t>(dim), 0.0);
  for (std::size_t j = 1; j <= n; ++j) {
    const double w = std::pow(times[j], mu);
    for (int cpt = 0; cpt < dim; ++cpt) phi[j * dim + cpt] = w * beta[j * dim + cpt];
  }
  for (std::size_t k = 1; k < n_out; ++k) {
    const std::size_t i = k * stride;
    const double t = times[i];
    double pj = std::pow(t, mu);  // (t - s_0)^mu
    for (std::size_t j = 0; j < i; ++j) {
      const double ds_j = t - times[j];
      const double ds_j1 = t - times[j + 1];
      const double pj1 = (j + 1 == i) ? 0.0 : std::pow(ds_j1, mu);
      const double t0 = (pj - pj1) / mu;
      const double t1 = ds_j * t0 - (pj * ds_j - pj1 * ds_j1) / (mu + 1.0);
      for (int cpt = 0; cpt < dim; ++cpt) {
        const double a = phi[j * dim + cpt];
        const double b = (phi[(j + 1) * dim + cpt] - a) / dt;
        v[k * dim + cpt] += a * t0 + b * t1;
      }
      pj = pj1;
    }
    const double tf = std::pow(t, H - 0.5);
    for (int cpt = 0; cpt < dim; ++cpt) v[k * dim + cpt] *= tf;
  }
  return v;
}

double calibrate_girsanov(double H) {
  // Forward/inverse self-consistency: the forward Volterra map applied to v
  // must reproduce int_0^t beta ds. Linear in the constant, so least squares
  // over a pair of smooth shift profiles pins it.
  const std::size_t n = 1024;
  const double dt = 1.0 / static_cast<double>(n);
  auto table = kernel_table(H, n);
  const double sc = table->scale(dt);
  std::vector<double> times(n + 1);
  for (std::size_t i = 0; i <= n; ++i) times[i] = dt * static_cast<double>(i);

  double num = 0.0, den = 0.0;
  for (int profile = 0; profile < 2; ++profile) {
    std::vector<double> beta(n + 1);
    for (std::size_t i = 0; i <= n; ++i)
      beta[i] = profile == 0 ? 1.0 : std::cos(2.0 * M_PI * times[i]);
    const auto v = girsanov_v_raw(times, beta, 1, H, 1);
    std::vector<double> ibeta(n + 1, 0.0);
    for (std::size_t i = 1; i <= n; ++i)
      ibeta[i] = ibeta[i - 1] + 0.5 * (beta[i - 1] + beta[i]) * dt;
    for (std::size_t i = 1; i <= n; ++i) {
      const auto row = table->row(i);
      double fwd = 0.0;
      for (std::size_t j = 0; j < i; ++j) fwd += row[j] * 0.5 * (v[j] + v[j + 1]);
      fwd *= sc * dt;
      num += fwd * ibeta[i];
      den += fwd * fwd;
    }
  }
  return num / den;
}

}  // namespace

double girsanov_c(double H) {
  if (!(H > 0.0 && H <= 0.5))
    throw std::invalid_argument("girsanov_c: H must lie in (0, 1/2]");
  if (H == 0.5) return 1.0;
  static std::mutex mutex;
  static std::map<double, double> cache;
  {
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(H);
    if (it != cache.end()) return it->second;
  }
  const double c = calibrate_girsanov(H);
  std::lock_guard<std::mutex> lock(mutex);
  cache.emplace(H, c);
  return c;
}

std::vector<double> girsanov_v(std::span<const double> times,
                               std::span<const double> beta, int dim, HurstIndex H,
                               std::size_t stride) {
  auto v = girsanov_v_raw(times, beta, dim, H.value, stride);
  if (H.value != 0.5) {
    const double c = girsanov_c(H.value);
    for (double& x : v) x *= c;
  }
  return v;
}

Estimate pinsker_tv_bound(std::span<const double> v_times,
                          std::span<const std::vector<double>> v_ensemble, int dim) {
  if (v_ensemble.empty()) throw std::invalid_argument("pinsker_tv_bound: empty ensemble");
  const std::size_t n_nodes = v_times.size();
  double sum = 0.0, sum_sq = 0.0;
  for (const auto& v : v_ensemble) {
    if (v.size() != n_nodes * static_cast<std::size_t>(dim))
      throw std::invalid_argument("pinsker_tv_bound: member size mismatch");
    double q = 0.0;
    for (std::size_t i = 0; i + 1 < n_nodes; ++i) {
      double a = 0.0, b = 0.0;
      for (int c = 0; c < dim; ++c) {
        a += v[i * dim + c] * v[i * dim + c];
        b += v[(i + 1) * dim + c] * v[(i + 1) * dim + c];
      }
      q += 0.5 * (a + b) * (v_times[i + 1] - v_times[i]);
    }
    sum += q;
    sum_sq += q * q;
  }
  const double n = static_cast<double>(v_ensemble.size());
  const double mean_q = sum / n;
  const double var_q = std::max(0.0, sum_sq / n - mean_q * mean_q);
  const double se_q = std::sqrt(var_q / n);
  Estimate e;
  e.n = v_ensemble.size();
  e.value = 0.5 * std::sqrt(std::max(0.0, mean_q));
  e.stderr_ = mean_q > 1e-300 ? 0.25 * se_q / std::sqrt(mean_q) : 0.5 * std::sqrt(se_q);
  return e;
}

void write_fbm_csv(const std::string& path, const FbmPath& p) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_fbm_csv: cannot open " + path);
  out << "t";
  for (int c = 0; c < p.dim; ++c) out << ",b" << c;
  for (int c = 0; c < p.dim; ++c) out << ",dw" << c;
  out << "\n";
  out.precision(17);
  const std::size_t n = p.n_steps();
  for (std::size_t i = 0; i <= n; ++i) {
    out << p.times[i];
    for (int c = 0; c < p.dim; ++c) out << "," << p.value(i, c);
    for (int c = 0; c < p.dim; ++c)
      out << "," << (i < n ? p.driver.increments[i * p.dim + c] : 0.0);
    out << "\n";
  }
}

}  // namespace fraclab
