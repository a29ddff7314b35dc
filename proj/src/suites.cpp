#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

#include "fraclab/drift.hpp"
#include "fraclab/fbm.hpp"
#include "fraclab/gaussian.hpp"
#include "fraclab/harness.hpp"
#include "fraclab/metrics.hpp"
#include "fraclab/parallel.hpp"
#include "fraclab/quadrature.hpp"
#include "fraclab/rng.hpp"
#include "fraclab/sde.hpp"
#include "fraclab/sewing.hpp"
#include "fraclab/she.hpp"

namespace fraclab::detail {

namespace {

struct SuiteCtx {
  const ConfigMap& cfg;
  ExperimentReport& rep;
  std::string out_dir;
  int workers = 0;
  std::uint64_t seed = 0;
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

void add_quantity(SuiteCtx& ctx, const std::string& name, const Estimate& e) {
  ctx.rep.quantities.push_back({name, e});
}

void add_value(SuiteCtx& ctx, const std::string& name, double v, std::size_t n = 0) {
  ctx.rep.quantities.push_back({name, Estimate{v, 0.0, n}});
}

void add_check(SuiteCtx& ctx, const std::string& name, bool pass,
               const std::string& detail) {
  ctx.rep.checks.push_back({name, pass, detail});
}

void add_slope(SuiteCtx& ctx, const std::string& name, const SlopeFit& fit) {
  ctx.rep.slopes.push_back({name, fit});
}

void write_csv(const SuiteCtx& ctx, const std::string& name,
               const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  if (ctx.out_dir.empty()) return;
  std::filesystem::create_directories(ctx.out_dir);
  std::ofstream out(ctx.out_dir + "/" + ctx.rep.suite + "." + name + ".csv",
                    std::ios::binary);
  for (std::size_t i = 0; i < header.size(); ++i)
    out << header[i] << (i + 1 < header.size() ? "," : "\n");
  out.precision(17);
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      out << row[i] << (i + 1 < row.size() ? "," : "\n");
  }
}

/// Member-slot ensemble runner; numeric aborts flag the member instead of
/// failing the suite. Returns the attrition count.
std::size_t for_members(std::size_t n, int workers, std::vector<char>& ok,
                        const std::function<void(std::size_t)>& fn) {
  ok.assign(n, 1);
  parallel_for(n, workers, [&](std::size_t i) {
    try {
      fn(i);
    } catch (const std::runtime_error&) {
      ok[i] = 0;
    }
  });
  std::size_t bad = 0;
  for (char c : ok)
    if (!c) ++bad;
  return bad;
}

Estimate paired_diff(std::span<const double> a, std::span<const double> b) {
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  return mean_estimate(d);
}

std::vector<std::size_t> level_list(const ConfigMap& cfg, const std::string& key,
                                    std::vector<double> fallback) {
  const auto raw = cfg.get_list(key, fallback);
  std::vector<std::size_t> out;
  for (double v : raw) out.push_back(static_cast<std::size_t>(v));
  return out;
}

// ---------------------------------------------------------------------------
// fbm-covariance
// ---------------------------------------------------------------------------
void suite_fbm_covariance(SuiteCtx& ctx) {
  const auto hs = ctx.cfg.get_list("hurst_list", {0.25, 0.4, 0.5});
  const auto paths = static_cast<std::size_t>(ctx.cfg.get_int("paths", 10000));
  const auto steps = static_cast<std::size_t>(ctx.cfg.get_int("steps", 256));
  const double z_tol = ctx.cfg.get_double("z_tol", 3.0);
  const double max_frac = ctx.cfg.get_double("max_violation_frac", 0.01);
  const double dt = 1.0 / static_cast<double>(steps);
  ctx.rep.members = paths * hs.size();

  std::vector<std::vector<double>> csv_rows;
  for (double H : hs) {
    auto table = kernel_table(H, steps, ctx.workers);
    const std::size_t npairs = steps * (steps + 1) / 2;
    constexpr std::size_t kBlocks = 64;
    std::vector<std::vector<double>> s1(kBlocks), s2(kBlocks);
    const std::size_t per_block = (paths + kBlocks - 1) / kBlocks;
    parallel_for(kBlocks, ctx.workers, [&](std::size_t blk) {
      s1[blk].assign(npairs, 0.0);
      s2[blk].assign(npairs, 0.0);
      const std::size_t lo = blk * per_block;
      const std::size_t hi = std::min(paths, lo + per_block);
      for (std::size_t p = lo; p < hi; ++p) {
        const auto path = fbm_from_driver(
            sample_driver(steps, dt, 1, seed_fanout(ctx.seed, p)), table);
        std::size_t idx = 0;
        for (std::size_t i = 1; i <= steps; ++i) {
          const double bi = path.values[i];
          for (std::size_t j = i; j <= steps; ++j, ++idx) {
            const double prod = bi * path.values[j];
            s1[blk][idx] += prod;
            s2[blk][idx] += prod * prod;
          }
        }
      }
    });
    std::vector<double> sum1(npairs, 0.0), sum2(npairs, 0.0);
    for (std::size_t blk = 0; blk < kBlocks; ++blk)
      for (std::size_t idx = 0; idx < npairs; ++idx) {
        sum1[idx] += s1[blk][idx];
        sum2[idx] += s2[blk][idx];
      }
    const double n = static_cast<double>(paths);
    std::size_t violations = 0;
    double max_z = 0.0;
    std::size_t idx = 0;
    for (std::size_t i = 1; i <= steps; ++i)
      for (std::size_t j = i; j <= steps; ++j, ++idx) {
        const double mean = sum1[idx] / n;
        const double var = std::max(0.0, sum2[idx] / n - mean * mean);
        const double se = std::sqrt(var / n);
        const double target = fbm_covariance(dt * i, dt * j, H);
        const double z = se > 0.0 ? std::abs(mean - target) / se : 0.0;
        max_z = std::max(max_z, z);
        if (z > z_tol) ++violations;
      }
    const double frac = static_cast<double>(violations) / static_cast<double>(npairs);
    add_value(ctx, "violation_frac_H=" + fmt(H), frac, npairs);
    add_value(ctx, "max_z_H=" + fmt(H), max_z);
    // With ~3e4 correlated entries a 3-sigma window admits a small tail by
    // chance; the acceptance rule caps the violation fraction.
    add_check(ctx, "covariance_entrywise_H=" + fmt(H), frac <= max_frac,
              "violation fraction " + fmt(frac) + " (cap " + fmt(max_frac) +
                  "), max |z| = " + fmt(max_z));
    csv_rows.push_back({H, frac, max_z});
  }
  write_csv(ctx, "summary", {"hurst", "violation_frac", "max_z"}, csv_rows);
}

// ---------------------------------------------------------------------------
// heat-kernel-laws
// ---------------------------------------------------------------------------
void suite_heat_kernel_laws(SuiteCtx& ctx) {
  const auto ts = ctx.cfg.get_list("t_levels", {0.01, 0.1, 1.0});
  const double tol = ctx.cfg.get_double("tol", 1e-8);
  const auto n_x = static_cast<std::size_t>(ctx.cfg.get_int("n_x", 33));

  for (DomainKind bc : {DomainKind::periodic, DomainKind::neumann}) {
    const std::string tag = bc == DomainKind::periodic ? "periodic" : "neumann";
    HeatKernelSpec spec{bc, 1, 8, 256};
    double worst_mass = 0.0, worst_ck = 0.0;
    for (double t : ts) {
      for (std::size_t ix = 0; ix < n_x; ++ix) {
        const double x = static_cast<double>(ix) / static_cast<double>(n_x - 1);
        const double mass = quad::gauss_legendre_panels(
            [&](double y) { return heat_kernel(t, x, y, spec); }, 0.0, 1.0, 16, 32);
        worst_mass = std::max(worst_mass, std::abs(mass - 1.0));
      }
      const double r = 0.5 * t;
      for (double x : {0.0, 0.3, 0.5, 0.8, 1.0})
        for (double z : {0.1, 0.5, 0.9}) {
          const double conv = quad::gauss_legendre_panels(
              [&](double y) {
                return heat_kernel(r, x, y, spec) * heat_kernel(t - r, y, z, spec);
              },
              0.0, 1.0, 16, 32);
          worst_ck = std::max(worst_ck, std::abs(conv - heat_kernel(t, x, z, spec)));
        }
    }
    add_value(ctx, "mass_defect_" + tag, worst_mass);
    add_value(ctx, "chapman_kolmogorov_defect_" + tag, worst_ck);
    add_check(ctx, "mass_" + tag, worst_mass <= tol,
              "max |int p_t - 1| = " + fmt(worst_mass));
    add_check(ctx, "chapman_kolmogorov_" + tag, worst_ck <= tol,
              "max defect = " + fmt(worst_ck));

    // Semigroup composition through the spectral route.
    GridFunction f = GridFunction::sample(0.0, 1.0, 257, [&](double x) {
      return bc == DomainKind::periodic
                 ? std::sin(2.0 * M_PI * x) + 0.5 * std::cos(4.0 * M_PI * x)
                 : std::cos(M_PI * x) + 0.5 * std::cos(3.0 * M_PI * x);
    });
    double worst_comp = 0.0;
    for (double t : ts) {
      const auto two_step = apply_semigroup(apply_semigroup(f, 0.4 * t, spec), 0.6 * t, spec);
      const auto one_step = apply_semigroup(f, t, spec);
      for (std::size_t i = 0; i < f.size(); ++i)
        worst_comp =
            std::max(worst_comp, std::abs(two_step.values[i] - one_step.values[i]));
    }
    add_value(ctx, "composition_defect_" + tag, worst_comp);
    add_check(ctx, "semigroup_composition_" + tag, worst_comp <= tol,
              "max composition defect = " + fmt(worst_comp));
  }
}

// ---------------------------------------------------------------------------
// occupation-scaling
// ---------------------------------------------------------------------------
void suite_occupation_scaling(SuiteCtx& ctx) {
  const double H = ctx.cfg.get_double("hurst", 0.3);
  const auto drift = parse_drift(ctx.cfg.get_string("drift", "dirac@0:mass=1"));
  const int n_moll = static_cast<int>(ctx.cfg.get_int("n_moll", 256));
  const auto paths = static_cast<std::size_t>(ctx.cfg.get_int("paths", 10000));
  const auto steps = static_cast<std::size_t>(ctx.cfg.get_int("steps", 4096));
  const double target = ctx.cfg.get_double("slope_target", 1.0 + drift.nominal_alpha * H);
  const double tol = ctx.cfg.get_double("slope_tol", 0.10);
  const double dt = 1.0 / static_cast<double>(steps);
  const MollifiedDrift f = mollify(drift, n_moll);

  std::vector<double> t_levels = ctx.cfg.get_list(
      "t_levels", {0.5, 0.25, 0.125, 0.0625, 0.03125, 0.015625});
  std::vector<std::size_t> level_idx;
  for (double t : t_levels)
    level_idx.push_back(static_cast<std::size_t>(std::llround(t * steps)));

  auto table = kernel_table(H, steps, ctx.workers);
  std::vector<std::vector<double>> slots(paths);
  std::vector<char> ok;
  ctx.rep.attrition = for_members(paths, ctx.workers, ok, [&](std::size_t p) {
    const auto path =
        fbm_from_driver(sample_driver(steps, dt, 1, seed_fanout(ctx.seed, p)), table);
    std::vector<double> vals(level_idx.size());
    double acc = 0.0;
    std::size_t next = 0;
    std::vector<std::size_t> sorted = level_idx;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < steps && next < sorted.size(); ++i) {
      acc += f(path.values[i]) * dt;
      while (next < sorted.size() && sorted[next] == i + 1) {
        vals[next] = acc;
        ++next;
      }
    }
    // map back to the requested order
    std::vector<double> out(level_idx.size());
    for (std::size_t k = 0; k < level_idx.size(); ++k) {
      const auto it = std::find(sorted.begin(), sorted.end(), level_idx[k]);
      out[k] = vals[static_cast<std::size_t>(it - sorted.begin())];
    }
    slots[p] = std::move(out);
  });
  ctx.rep.members = paths;

  std::vector<double> l2(level_idx.size(), 0.0);
  std::size_t n_ok = 0;
  for (std::size_t p = 0; p < paths; ++p) {
    if (!ok[p]) continue;
    ++n_ok;
    for (std::size_t k = 0; k < level_idx.size(); ++k)
      l2[k] += slots[p][k] * slots[p][k];
  }
  for (double& v : l2) v = std::sqrt(v / static_cast<double>(n_ok));
  const auto fit = scaling_exponent(t_levels, l2);
  add_slope(ctx, "occupation_time_scaling", fit);
  add_check(ctx, "occupation_slope_window", std::abs(fit.slope - target) <= tol,
            "slope " + fmt(fit.slope) + " target " + fmt(target) + " +- " + fmt(tol));
  std::vector<std::vector<double>> rows;
  for (std::size_t k = 0; k < t_levels.size(); ++k)
    rows.push_back({t_levels[k], l2[k]});
  write_csv(ctx, "l2_vs_t", {"t", "l2_norm"}, rows);
}

// ---------------------------------------------------------------------------
// exp-weight-scaling
// ---------------------------------------------------------------------------
void suite_exp_weight_scaling(SuiteCtx& ctx) {
  const double H = ctx.cfg.get_double("hurst", 0.3);
  const auto drift = parse_drift(ctx.cfg.get_string("drift", "dirac@0:mass=1"));
  const int n_moll = static_cast<int>(ctx.cfg.get_int("n_moll", 256));
  const auto paths = static_cast<std::size_t>(ctx.cfg.get_int("paths", 10000));
  const auto steps = static_cast<std::size_t>(ctx.cfg.get_int("steps", 1024));
  const auto lambdas = ctx.cfg.get_list("lambda", {4, 8, 16, 32, 64, 128});
  const double target = ctx.cfg.get_double("slope_target", -1.0 - drift.nominal_alpha * H);
  const double tol = ctx.cfg.get_double("slope_tol", 0.15);
  const double dt = 1.0 / static_cast<double>(steps);
  const MollifiedDrift f = mollify(drift, n_moll);

  auto table = kernel_table(H, steps, ctx.workers);
  std::vector<std::vector<double>> slots(paths);
  std::vector<char> ok;
  ctx.rep.attrition = for_members(paths, ctx.workers, ok, [&](std::size_t p) {
    const auto path =
        fbm_from_driver(sample_driver(steps, dt, 1, seed_fanout(ctx.seed, p)), table);
    std::vector<double> acc(lambdas.size(), 0.0);
    std::vector<double> w(lambdas.size()), growth(lambdas.size());
    for (std::size_t l = 0; l < lambdas.size(); ++l) {
      w[l] = std::exp(-lambdas[l]);  // e^{-lambda (1 - t_0)}
      growth[l] = std::exp(lambdas[l] * dt);
    }
    for (std::size_t i = 0; i < steps; ++i) {
      const double fv = f(path.values[i]);
      for (std::size_t l = 0; l < lambdas.size(); ++l) {
        acc[l] += w[l] * fv;
        w[l] *= growth[l];
      }
    }
    for (double& a : acc) a *= dt;
    slots[p] = std::move(acc);
  });
  ctx.rep.members = paths;

  std::vector<double> l2(lambdas.size(), 0.0);
  std::size_t n_ok = 0;
  for (std::size_t p = 0; p < paths; ++p) {
    if (!ok[p]) continue;
    ++n_ok;
    for (std::size_t l = 0; l < lambdas.size(); ++l) l2[l] += slots[p][l] * slots[p][l];
  }
  for (double& v : l2) v = std::sqrt(v / static_cast<double>(n_ok));
  const auto fit = scaling_exponent(lambdas, l2);
  add_slope(ctx, "exp_weight_lambda_scaling", fit);
  add_check(ctx, "exp_weight_slope_window", std::abs(fit.slope - target) <= tol,
            "slope " + fmt(fit.slope) + " target " + fmt(target) + " +- " + fmt(tol));
  std::vector<std::vector<double>> rows;
  for (std::size_t l = 0; l < lambdas.size(); ++l) rows.push_back({lambdas[l], l2[l]});
  write_csv(ctx, "l2_vs_lambda", {"lambda", "l2_norm"}, rows);
}

// ---------------------------------------------------------------------------
// she-lambda-scaling
// ---------------------------------------------------------------------------
void suite_she_lambda_scaling(SuiteCtx& ctx) {
  const Bc bc = ctx.cfg.get_string("bc", "periodic") == "neumann" ? Bc::neumann
                                                                  : Bc::periodic;
  const int modes = static_cast<int>(ctx.cfg.get_int("modes", 128));
  const auto nodes = static_cast<std::size_t>(ctx.cfg.get_int("nodes", 257));
  const auto steps = static_cast<std::size_t>(ctx.cfg.get_int("steps", 1024));
  const auto fields = static_cast<std::size_t>(ctx.cfg.get_int("fields", 1000));
  const auto drift = parse_drift(ctx.cfg.get_string("drift", "dirac@0:mass=1"));
  const int n_moll = static_cast<int>(ctx.cfg.get_int("n_moll", 256));
  const auto lambdas = ctx.cfg.get_list("lambda", {4, 8, 16, 32, 64, 128});
  const double beta = drift.nominal_alpha;
  const double target = ctx.cfg.get_double("slope_target", -1.0 - beta / 4.0);
  const double tol = ctx.cfg.get_double("slope_tol", 0.15);
  const double time_target = ctx.cfg.get_double("time_slope_target", 1.0 + beta / 4.0);
  const double time_tol = ctx.cfg.get_double("time_slope_tol", 0.10);
  const double dt = 1.0 / static_cast<double>(steps);
  const MollifiedDrift f = mollify(drift, n_moll);

  auto basis = SpectralBasis::make(bc, modes, nodes);
  // lambda = 0 rides along for the unweighted time-scaling diagnostic.
  std::vector<double> all_lambdas = lambdas;
  all_lambdas.push_back(0.0);
  std::vector<std::size_t> snaps;
  for (int k = 4; k >= 1; --k) snaps.push_back(steps >> k);
  snaps.push_back(steps);
  std::vector<double> snap_times;
  for (auto s : snaps) snap_times.push_back(dt * static_cast<double>(s));

  std::vector<std::vector<std::vector<double>>> slots(fields);
  std::vector<char> ok;
  ctx.rep.attrition = for_members(fields, ctx.workers, ok, [&](std::size_t m) {
    const auto noise = sample_she_noise(basis, steps, dt, seed_fanout(ctx.seed, m));
    slots[m] = she_exp_functional(noise, 0, snaps, all_lambdas, f, nodes / 2);
  });
  ctx.rep.members = fields;

  std::size_t n_ok = 0;
  std::vector<double> l2_lambda(lambdas.size(), 0.0);
  std::vector<double> l2_time(snaps.size(), 0.0);
  for (std::size_t m = 0; m < fields; ++m) {
    if (!ok[m]) continue;
    ++n_ok;
    for (std::size_t l = 0; l < lambdas.size(); ++l) {
      const double v = slots[m].back()[l];
      l2_lambda[l] += v * v;
    }
    for (std::size_t s = 0; s < snaps.size(); ++s) {
      const double v = slots[m][s].back();  // lambda = 0 entry
      l2_time[s] += v * v;
    }
  }
  for (double& v : l2_lambda) v = std::sqrt(v / static_cast<double>(n_ok));
  for (double& v : l2_time) v = std::sqrt(v / static_cast<double>(n_ok));

  const auto fit = scaling_exponent(lambdas, l2_lambda);
  add_slope(ctx, "she_lambda_scaling", fit);
  add_check(ctx, "she_lambda_slope_window", std::abs(fit.slope - target) <= tol,
            "slope " + fmt(fit.slope) + " target " + fmt(target) + " +- " + fmt(tol));
  const auto tfit = scaling_exponent(snap_times, l2_time);
  add_slope(ctx, "she_time_scaling_lambda0", tfit);
  add_check(ctx, "she_time_slope_window", std::abs(tfit.slope - time_target) <= time_tol,
            "slope " + fmt(tfit.slope) + " target " + fmt(time_target) + " +- " +
                fmt(time_tol));
  std::vector<std::vector<double>> rows;
  for (std::size_t l = 0; l < lambdas.size(); ++l)
    rows.push_back({lambdas[l], l2_lambda[l]});
  write_csv(ctx, "l2_vs_lambda", {"lambda", "l2_norm"}, rows);
}

// ---------------------------------------------------------------------------
// sde-coupling-contraction
// ---------------------------------------------------------------------------
void suite_sde_coupling_contraction(SuiteCtx& ctx) {
  const double H = ctx.cfg.get_double("hurst", 0.25);
  const auto drift = parse_drift(ctx.cfg.get_string("drift", "dirac@0:mass=1"));
  const int n_moll = static_cast<int>(ctx.cfg.get_int("n_moll", 256));
  const int g_moll = static_cast<int>(ctx.cfg.get_int("g_moll", 64));
  const auto lambdas = ctx.cfg.get_list("lambda", {8, 16, 32, 64});
  const auto pairs = static_cast<std::size_t>(ctx.cfg.get_int("pairs", 1000));
  const auto steps = static_cast<std::size_t>(ctx.cfg.get_int("steps", 4096));
  const double lo = ctx.cfg.get_double("slope_lo", -1.3);
  const double hi = ctx.cfg.get_double("slope_hi", -0.5);
  const double dt = 1.0 / static_cast<double>(steps);
  const double x0 = ctx.cfg.get_double("x0", 0.0);
  const MollifiedDrift bn = mollify(drift, n_moll);
  const MollifiedDrift g = mollify(drift, g_moll);

  auto table = kernel_table(H, steps, ctx.workers);
  std::vector<std::vector<double>> slots(pairs);
  std::vector<char> ok;
  ctx.rep.attrition = for_members(pairs, ctx.workers, ok, [&](std::size_t m) {
    const auto fbm = std::make_shared<FbmPath>(
        fbm_from_driver(sample_driver(steps, dt, 1, seed_fanout(ctx.seed, m)), table));
    // X once per member; the push only affects Y_tilde.
    std::vector<double> X(steps + 1), gaps(lambdas.size(), 0.0);
    X[0] = x0;
    double psi = 0.0;
    for (std::size_t i = 0; i < steps; ++i) {
      psi += bn(X[i]) * dt;
      X[i + 1] = x0 + psi + fbm->values[i + 1];
    }
    for (std::size_t l = 0; l < lambdas.size(); ++l) {
      const double lam = lambdas[l];
      double y = x0, sup = 0.0;
      for (std::size_t i = 0; i < steps; ++i) {
        sup = std::max(sup, std::abs(X[i] - y));
        y += (g(y) + lam * (X[i] - y)) * dt + (fbm->values[i + 1] - fbm->values[i]);
      }
      sup = std::max(sup, std::abs(X[steps] - y));
      gaps[l] = sup;
    }
    slots[m] = std::move(gaps);
  });
  ctx.rep.members = pairs;

  std::vector<Estimate> gap(lambdas.size());
  std::vector<std::vector<double>> by_lambda(lambdas.size());
  for (std::size_t m = 0; m < pairs; ++m) {
    if (!ok[m]) continue;
    for (std::size_t l = 0; l < lambdas.size(); ++l)
      by_lambda[l].push_back(slots[m][l]);
  }
  std::vector<double> means;
  for (std::size_t l = 0; l < lambdas.size(); ++l) {
    gap[l] = mean_estimate(by_lambda[l]);
    means.push_back(gap[l].value);
    add_quantity(ctx, "sup_gap_lambda=" + fmt(lambdas[l]), gap[l]);
  }
  bool monotone = true;
  for (std::size_t l = 0; l + 1 < lambdas.size(); ++l) {
    const double slack =
        2.0 * std::sqrt(gap[l].stderr_ * gap[l].stderr_ +
                        gap[l + 1].stderr_ * gap[l + 1].stderr_);
    if (gap[l + 1].value > gap[l].value + slack) monotone = false;
  }
  add_check(ctx, "coupling_gap_monotone", monotone,
            "sup-gap nonincreasing in lambda within 2 stderr");
  const auto fit = scaling_exponent(lambdas, means);
  add_slope(ctx, "coupling_contraction", fit);
  add_check(ctx, "coupling_slope_window", fit.slope >= lo && fit.slope <= hi,
            "slope " + fmt(fit.slope) + " window [" + fmt(lo) + ", " + fmt(hi) + "]");
  std::vector<std::vector<double>> rows;
  for (std::size_t l = 0; l < lambdas.size(); ++l)
    rows.push_back({lambdas[l], means[l], gap[l].stderr_});
  write_csv(ctx, "gap_vs_lambda", {"lambda", "mean_sup_gap", "stderr"}, rows);
}

// ---------------------------------------------------------------------------
// girsanov-pinsker
// ---------------------------------------------------------------------------
void suite_girsanov_pinsker(SuiteCtx& ctx) {
  const double H = ctx.cfg.get_double("hurst", 0.25);
  const auto drift = parse_drift(ctx.cfg.get_string("drift", "dirac@0:mass=1"));
  const int n_moll = static_cast<int>(ctx.cfg.get_int("n_moll", 256));
  const int g_moll = static_cast<int>(ctx.cfg.get_int("g_moll", 64));
  const auto lambdas = ctx.cfg.get_list("lambda", {8, 16, 32, 64});
  const auto members = static_cast<std::size_t>(ctx.cfg.get_int("members", 1000));
  const auto steps = static_cast<std::size_t>(ctx.cfg.get_int("steps", 1024));
  const auto v_stride = static_cast<std::size_t>(ctx.cfg.get_int("v_stride", 4));
  const int bins = static_cast<int>(ctx.cfg.get_int("bins", 64));
  const double dt = 1.0 / static_cast<double>(steps);
  const MollifiedDrift g = mollify(drift, g_moll);

  SdeConfig b_cfg;
  b_cfg.x0 = {0.0};
  b_cfg.drift = drift;
  b_cfg.n_moll = n_moll;
  b_cfg.hurst = H;
  b_cfg.n_steps = steps;
  b_cfg.dt = dt;

  auto table = kernel_table(H, steps, ctx.workers);
  ctx.rep.constants["girsanov_c"] = girsanov_c(H);
  ctx.rep.constants["volterra_norm_const"] = volterra_norm_const(H);
  ctx.rep.members = members * lambdas.size();
  const double bias_allowance =
      std::sqrt(static_cast<double>(bins) / static_cast<double>(members));

  std::vector<std::vector<double>> rows;
  for (double lam : lambdas) {
    std::vector<CouplingRun> runs(members);
    std::vector<char> ok;
    ctx.rep.attrition += for_members(members, ctx.workers, ok, [&](std::size_t m) {
      const auto fbm = std::make_shared<FbmPath>(fbm_from_driver(
          sample_driver(steps, dt, 1, seed_fanout(ctx.seed, m)), table));
      const double y0 = 0.0;
      runs[m] = coupled_pair(b_cfg, g, std::span<const double>(&y0, 1), lam, fbm,
                             CouplingScheme::explicit_euler, v_stride);
    });
    const auto rep = girsanov_tv_report(runs, bins);
    add_quantity(ctx, "pinsker_direct_lambda=" + fmt(lam), rep.pinsker_direct);
    add_quantity(ctx, "paper_bound_lambda=" + fmt(lam), rep.paper_bound);
    add_value(ctx, "hist_tv_lambda=" + fmt(lam), rep.hist_tv, members);
    const double cap = rep.paper_bound.value + 2.0 * rep.paper_bound.stderr_;
    add_check(ctx, "tv_dominance_lambda=" + fmt(lam), rep.hist_tv <= cap,
              "hist TV " + fmt(rep.hist_tv) + " vs bound " + fmt(cap));
    // The KL route has estimator bias O(sqrt(bins/members)) on the TV side.
    add_check(ctx, "tv_vs_kl_lambda=" + fmt(lam),
              rep.hist_tv <= rep.pinsker_direct.value +
                                 2.0 * rep.pinsker_direct.stderr_ + bias_allowance,
              "hist TV " + fmt(rep.hist_tv) + " vs KL bound " +
                  fmt(rep.pinsker_direct.value) + " + bias allowance " +
                  fmt(bias_allowance));
    rows.push_back({lam, rep.hist_tv, rep.pinsker_direct.value, rep.paper_bound.value});
  }
  write_csv(ctx, "bounds", {"lambda", "hist_tv", "pinsker_direct", "paper_bound"}, rows);
}

// ---------------------------------------------------------------------------
// sde-weak-cauchy
// ---------------------------------------------------------------------------
void suite_sde_weak_cauchy(SuiteCtx& ctx) {
  const double H = ctx.cfg.get_double("hurst", 0.25);
  const double H2 = ctx.cfg.get_double("hurst_contrast", 0.45);
  const auto drift = parse_drift(ctx.cfg.get_string("drift", "dirac@0:mass=1"));
  const auto levels = level_list(ctx.cfg, "levels", {16, 32, 64, 128});
  const auto paths = static_cast<std::size_t>(ctx.cfg.get_int("paths", 1000));
  const auto steps = static_cast<std::size_t>(ctx.cfg.get_int("steps", 1024));
  const int blocks = static_cast<int>(ctx.cfg.get_int("w1_blocks", 8));
  const double dt = 1.0 / static_cast<double>(steps);

  std::vector<std::size_t> solve_levels(levels);
  solve_levels.push_back(levels.back() * 2);

  auto run_for = [&](double hurst, bool assert_checks, const std::string& tag) {
    auto table = kernel_table(hurst, steps, ctx.workers);
    const std::size_t nl = solve_levels.size();
    std::vector<std::vector<double>> gap_slots(paths), marg_slots(paths);
    std::vector<char> ok;
    ctx.rep.attrition += for_members(paths, ctx.workers, ok, [&](std::size_t m) {
      const auto fbm = std::make_shared<FbmPath>(fbm_from_driver(
          sample_driver(steps, dt, 1, seed_fanout(ctx.seed, m)), table));
      std::vector<std::vector<double>> xs(nl);
      for (std::size_t l = 0; l < nl; ++l) {
        const MollifiedDrift bn = mollify(drift, static_cast<int>(solve_levels[l]));
        std::vector<double> X(steps + 1);
        X[0] = 0.0;
        double psi = 0.0;
        for (std::size_t i = 0; i < steps; ++i) {
          psi += bn(X[i]) * dt;
          X[i + 1] = psi + fbm->values[i + 1];
        }
        xs[l] = std::move(X);
      }
      std::vector<double> gaps(levels.size()), margs(nl);
      for (std::size_t l = 0; l < levels.size(); ++l) {
        double sup = 0.0;
        for (std::size_t i = 0; i <= steps; ++i)
          sup = std::max(sup, std::abs(xs[l][i] - xs[l + 1][i]));
        gaps[l] = std::min(sup, 1.0);
      }
      for (std::size_t l = 0; l < nl; ++l) margs[l] = xs[l][steps];
      gap_slots[m] = std::move(gaps);
      marg_slots[m] = std::move(margs);
    });
    ctx.rep.members += paths;

    std::vector<Estimate> gaps(levels.size());
    for (std::size_t l = 0; l < levels.size(); ++l) {
      std::vector<double> col;
      for (std::size_t m = 0; m < paths; ++m)
        if (ok[m]) col.push_back(gap_slots[m][l]);
      gaps[l] = mean_estimate(col);
      add_quantity(ctx, tag + "gap_n=" + fmt(static_cast<double>(levels[l])), gaps[l]);
    }
    // W1 of time-1 marginals between consecutive mollification levels, with a
    // block split for the standard error.
    std::vector<Estimate> w1(levels.size());
    for (std::size_t l = 0; l < levels.size(); ++l) {
      std::vector<double> block_vals;
      for (int b = 0; b < blocks; ++b) {
        std::vector<double> a, c;
        for (std::size_t m = 0; m < paths; ++m) {
          if (!ok[m] || static_cast<int>(m % blocks) != b) continue;
          a.push_back(marg_slots[m][l]);
          c.push_back(marg_slots[m][l + 1]);
        }
        if (a.size() > 10) block_vals.push_back(wasserstein1_1d(a, c));
      }
      w1[l] = mean_estimate(block_vals);
      add_quantity(ctx, tag + "w1_n=" + fmt(static_cast<double>(levels[l])), w1[l]);
    }
    if (assert_checks) {
      bool gap_dec = true, w1_dec = true;
      for (std::size_t l = 0; l + 1 < levels.size(); ++l) {
        std::vector<double> a, b;
        for (std::size_t m = 0; m < paths; ++m)
          if (ok[m]) {
            a.push_back(gap_slots[m][l]);
            b.push_back(gap_slots[m][l + 1]);
          }
        const Estimate d = paired_diff(b, a);  // later minus earlier
        if (d.value > 2.0 * d.stderr_) gap_dec = false;
        const double slack = 2.0 * std::sqrt(w1[l].stderr_ * w1[l].stderr_ +
                                             w1[l + 1].stderr_ * w1[l + 1].stderr_);
        if (w1[l + 1].value > w1[l].value + slack) w1_dec = false;
      }
      add_check(ctx, "weak_cauchy_gap_decreasing", gap_dec,
                "consecutive sup-gap means decreasing within 2 stderr");
      add_check(ctx, "weak_cauchy_w1_decreasing", w1_dec,
                "consecutive W1 marginal distances decreasing within 2 stderr");
    }
  };

  add_value(ctx, "admissible_main",
            admissible_weak(drift.nominal_alpha, H) ? 1.0 : 0.0);
  run_for(H, true, "");
  // Contrast run outside the admissible range: reported, never asserted.
  add_value(ctx, "admissible_contrast",
            admissible_weak(drift.nominal_alpha, H2) ? 1.0 : 0.0);
  run_for(H2, false, "contrast_");
  ctx.rep.notes.push_back(
      "contrast run at hurst=" + fmt(H2) +
      " is outside the admissible range; quantities reported without assertions");
}

// ---------------------------------------------------------------------------
// she-weak-cauchy
// ---------------------------------------------------------------------------
void suite_she_weak_cauchy(SuiteCtx& ctx) {
  const Bc bc = ctx.cfg.get_string("bc", "periodic") == "neumann" ? Bc::neumann
                                                                  : Bc::periodic;
  const int modes = static_cast<int>(ctx.cfg.get_int("modes", 128));
  const auto nodes = static_cast<std::size_t>(ctx.cfg.get_int("nodes", 257));
  const auto steps = static_cast<std::size_t>(ctx.cfg.get_int("steps", 1024));
  const auto fields = static_cast<std::size_t>(ctx.cfg.get_int("fields", 200));
  const auto drift = parse_drift(ctx.cfg.get_string("drift", "dirac@0:mass=1"));
  const auto levels = level_list(ctx.cfg, "levels", {16, 32, 64});
  const double dt = 1.0 / static_cast<double>(steps);

  auto basis = SpectralBasis::make(bc, modes, nodes);
  SheConfig cfg;
  cfg.drift = drift;
  cfg.bc = bc;
  cfg.modes = modes;
  cfg.n_nodes = nodes;
  cfg.n_steps = steps;
  cfg.dt = dt;

  const std::size_t ngap = levels.size() - 1;
  std::vector<std::vector<double>> slots(fields);
  std::vector<char> ok;
  ctx.rep.attrition = for_members(fields, ctx.workers, ok, [&](std::size_t m) {
    const auto noise = sample_she_noise(basis, steps, dt, seed_fanout(ctx.seed, m));
    std::vector<SpaceTimeField> us;
    for (std::size_t l : levels) {
      SheConfig c = cfg;
      c.n_moll = static_cast<int>(l);
      us.push_back(solve_mild(c, noise));
    }
    std::vector<double> gaps(ngap);
    for (std::size_t l = 0; l + 1 < levels.size(); ++l)
      gaps[l] = std::min(weighted_norm(field_diff(us[l], us[l + 1])), 1.0);
    slots[m] = std::move(gaps);
  });
  ctx.rep.members = fields;
  add_value(ctx, "admissible", she_config_admissible(cfg) ? 1.0 : 0.0);

  std::vector<Estimate> gaps(ngap);
  for (std::size_t l = 0; l < ngap; ++l) {
    std::vector<double> col;
    for (std::size_t m = 0; m < fields; ++m)
      if (ok[m]) col.push_back(slots[m][l]);
    gaps[l] = mean_estimate(col);
    add_quantity(ctx, "wgap_n=" + fmt(static_cast<double>(levels[l])), gaps[l]);
  }
  bool dec = true;
  for (std::size_t l = 0; l + 1 < ngap; ++l) {
    std::vector<double> a, b;
    for (std::size_t m = 0; m < fields; ++m)
      if (ok[m]) {
        a.push_back(slots[m][l]);
        b.push_back(slots[m][l + 1]);
      }
    const Estimate d = paired_diff(b, a);
    if (d.value > 2.0 * d.stderr_) dec = false;
  }
  add_check(ctx, "she_weak_cauchy_decreasing", dec,
            "consecutive weighted-norm gaps decreasing within 2 stderr");
}

// ---------------------------------------------------------------------------
// min-construction
// ---------------------------------------------------------------------------
void suite_min_construction(SuiteCtx& ctx) {
  const double H = ctx.cfg.get_double("hurst", 0.25);
  const auto drift = parse_drift(ctx.cfg.get_string("drift", "measure:uniform[0,0.5]"));
  const auto levels = level_list(ctx.cfg, "levels", {64, 256, 1024});
  const auto pairs = static_cast<std::size_t>(ctx.cfg.get_int("pairs", 200));
  const auto steps = static_cast<std::size_t>(ctx.cfg.get_int("steps", 1024));
  const double dt = 1.0 / static_cast<double>(steps);

  add_value(ctx, "admissible_strong_d1",
            admissible_strong_d1(drift.nominal_alpha, H, drift.is_nonneg_measure())
                ? 1.0
                : 0.0);

  auto table = kernel_table(H, steps, ctx.workers);
  SdeConfig cfg;
  cfg.drift = drift;
  cfg.hurst = H;
  cfg.n_steps = steps;
  cfg.dt = dt;
  cfg.x0 = {0.25};  // start inside the measure's support

  std::vector<std::vector<double>> slots(pairs);
  std::vector<char> ok;
  ctx.rep.attrition = for_members(pairs, ctx.workers, ok, [&](std::size_t m) {
    const auto fbm = std::make_shared<FbmPath>(
        fbm_from_driver(sample_driver(steps, dt, 1, seed_fanout(ctx.seed, m)), table));
    std::vector<double> residuals(levels.size());
    for (std::size_t l = 0; l < levels.size(); ++l) {
      SdeConfig c1 = cfg;
      c1.n_moll = static_cast<int>(levels[l]);
      SdeConfig c2 = cfg;
      c2.n_moll = static_cast<int>(2 * levels[l]);
      const auto x1 = solve_euler(c1, fbm);
      const auto x2 = solve_euler(c2, fbm);
      const auto y = min_solution(x1, x2);
      residuals[l] = residual(y, mollify(drift, static_cast<int>(levels[l])));
    }
    slots[m] = std::move(residuals);
  });
  ctx.rep.members = pairs;

  std::vector<Estimate> res(levels.size());
  for (std::size_t l = 0; l < levels.size(); ++l) {
    std::vector<double> col;
    for (std::size_t m = 0; m < pairs; ++m)
      if (ok[m]) col.push_back(slots[m][l]);
    res[l] = mean_estimate(col);
    add_quantity(ctx, "min_residual_k=" + fmt(static_cast<double>(levels[l])), res[l]);
  }
  bool dec = true;
  for (std::size_t l = 0; l + 1 < levels.size(); ++l) {
    std::vector<double> a, b;
    for (std::size_t m = 0; m < pairs; ++m)
      if (ok[m]) {
        a.push_back(slots[m][l]);
        b.push_back(slots[m][l + 1]);
      }
    const Estimate d = paired_diff(b, a);
    if (d.value > 2.0 * d.stderr_) dec = false;
  }
  add_check(ctx, "min_residual_decreasing", dec,
            "residual of the min-construction decreasing in mollification level");
}

// ---------------------------------------------------------------------------
// sewing-oracle
// ---------------------------------------------------------------------------
void suite_sewing_oracle(SuiteCtx& ctx) {
  const double H = ctx.cfg.get_double("hurst", 0.25);
  const auto paths = static_cast<std::size_t>(ctx.cfg.get_int("paths", 1000));
  const auto steps = static_cast<std::size_t>(ctx.cfg.get_int("steps", 4096));
  const int levels = static_cast<int>(ctx.cfg.get_int("levels", 10));
  const int n_moll = static_cast<int>(ctx.cfg.get_int("n_moll", 256));
  const double dt = 1.0 / static_cast<double>(steps);

  auto table = kernel_table(H, steps, ctx.workers);
  struct Case {
    std::string name;
    MollifiedDrift f;
  };
  std::vector<Case> cases;
  cases.push_back({"smooth", mollify(parse_drift("smooth:cos"), 1)});
  cases.push_back({"mollified_dirac", mollify(parse_drift("dirac@0:mass=1"), n_moll)});

  // Adapted piecewise-constant shift.
  std::vector<double> phi(steps + 1, 0.0);
  for (std::size_t i = 0; i <= steps; ++i)
    phi[i] = dt * static_cast<double>(i) >= 0.5 ? 0.2 : 0.0;

  for (const auto& cs : cases) {
    std::vector<double> diffs(paths), exps(paths);
    std::vector<char> ok;
    ctx.rep.attrition += for_members(paths, ctx.workers, ok, [&](std::size_t m) {
      const auto fbm = std::make_shared<FbmPath>(fbm_from_driver(
          sample_driver(steps, dt, 1, seed_fanout(ctx.seed, m)), table));
      const Germ germ = conditional_drift_germ(cs.f, phi, fbm);
      const auto rep = sew(germ, 0.0, 1.0, levels);
      double direct = 0.0;
      for (std::size_t i = 0; i < steps; ++i)
        direct += cs.f(fbm->values[i] + phi[i]) * dt;
      diffs[m] = rep.limit - direct;
      exps[m] = rep.fitted_defect_exponent;
    });
    std::vector<double> col, cole;
    for (std::size_t m = 0; m < paths; ++m)
      if (ok[m]) {
        col.push_back(diffs[m]);
        cole.push_back(exps[m]);
      }
    const Estimate d = mean_estimate(col);
    add_quantity(ctx, "sew_minus_direct_" + cs.name, d);
    add_quantity(ctx, "defect_exponent_" + cs.name, mean_estimate(cole));
    add_check(ctx, "sewing_oracle_" + cs.name,
              std::abs(d.value) <= 3.0 * d.stderr_ + 1e-12,
              "mean(sew - direct) = " + fmt(d.value) + " vs 3 stderr = " +
                  fmt(3.0 * d.stderr_));
  }
  ctx.rep.members = 2 * paths;
}

// ---------------------------------------------------------------------------
// heat-kernel-lipschitz
// ---------------------------------------------------------------------------
void suite_heat_kernel_lipschitz(SuiteCtx& ctx) {
  const auto ts = ctx.cfg.get_list("t_levels", {0.01, 0.1, 1.0});
  const auto nodes = static_cast<std::size_t>(ctx.cfg.get_int("nodes", 257));
  const double stab_tol = ctx.cfg.get_double("stability_tol", 0.10);

  std::vector<GridFunction> line_probes, unit_probes;
  auto sign_probe = [](double x) { return x < 0.5 ? -1.0 : 1.0; };
  auto hat_probe = [](double x) { return 1.0 - 2.0 * std::abs(x - 0.5); };
  auto cos_probe = [](double x) { return std::cos(2.0 * M_PI * x); };
  unit_probes.push_back(GridFunction::sample(0.0, 1.0, nodes, sign_probe));
  unit_probes.push_back(GridFunction::sample(0.0, 1.0, nodes, hat_probe));
  unit_probes.push_back(GridFunction::sample(0.0, 1.0, nodes, cos_probe));
  // Whole-line probes on a wide box so the evaluation window is unaffected
  // by truncation at the smallest t.
  line_probes.push_back(
      GridFunction::sample(-3.0, 4.0, 7 * (nodes - 1) + 1,
                           [&](double x) { return x < 0.5 ? -1.0 : 1.0; }));

  // Scale-invariant core: the whole-line kernel's fitted constant is exactly
  // stable across t.
  HeatKernelSpec line{DomainKind::whole_line, 1, 8, 256};
  const auto line_check = kernel_lipschitz_check(line, ts, line_probes);
  double line_mean = 0.0;
  for (double v : line_check.fitted) line_mean += v;
  line_mean /= static_cast<double>(line_check.fitted.size());
  bool line_stable = true;
  for (double v : line_check.fitted)
    if (std::abs(v / line_mean - 1.0) > stab_tol) line_stable = false;
  for (std::size_t i = 0; i < ts.size(); ++i)
    add_value(ctx, "fitted_whole_line_t=" + fmt(ts[i]), line_check.fitted[i]);
  add_check(ctx, "lipschitz_scale_stability", line_stable,
            "whole-line fitted constant within +-" + fmt(100 * stab_tol) +
                "% across t");

  // Interval kernels: single-constant upper bound; values decay with mixing
  // at large t, so only the bound is asserted.
  const double cap = 1.1 * std::max(line_check.max_constant, 1e-30);
  for (DomainKind bc : {DomainKind::periodic, DomainKind::neumann}) {
    const std::string tag = bc == DomainKind::periodic ? "periodic" : "neumann";
    HeatKernelSpec spec{bc, 1, 8, 256};
    const auto check = kernel_lipschitz_check(spec, ts, unit_probes);
    for (std::size_t i = 0; i < ts.size(); ++i)
      add_value(ctx, "fitted_" + tag + "_t=" + fmt(ts[i]), check.fitted[i]);
    add_check(ctx, "lipschitz_bounded_" + tag, check.max_constant <= cap,
              "max fitted " + fmt(check.max_constant) + " <= " + fmt(cap));
  }
  ctx.rep.notes.push_back(
      "interval kernels mix to the mean, so their fitted constants decay at "
      "large t; the +-10% stability claim is asserted on the scale-invariant "
      "whole-line kernel and the interval kernels are held to the single "
      "upper constant");
}

// ---------------------------------------------------------------------------
// girsanov-calibration
// ---------------------------------------------------------------------------
void suite_girsanov_calibration(SuiteCtx& ctx) {
  const auto hs = ctx.cfg.get_list("hurst_list", {0.25, 0.4, 0.5});
  const auto steps = static_cast<std::size_t>(ctx.cfg.get_int("steps", 1024));
  const double tol = ctx.cfg.get_double("tol", 1e-3);
  const double dt = 1.0 / static_cast<double>(steps);

  std::vector<double> times(steps + 1);
  for (std::size_t i = 0; i <= steps; ++i) times[i] = dt * static_cast<double>(i);
  std::vector<double> beta(steps + 1), ibeta(steps + 1, 0.0);
  for (std::size_t i = 0; i <= steps; ++i)
    beta[i] = 1.0 + 0.5 * std::sin(2.0 * M_PI * times[i]);
  for (std::size_t i = 1; i <= steps; ++i)
    ibeta[i] = ibeta[i - 1] + 0.5 * (beta[i - 1] + beta[i]) * dt;

  for (double H : hs) {
    const double c = girsanov_c(H);
    ctx.rep.constants["girsanov_c_H=" + fmt(H)] = c;
    ctx.rep.constants["volterra_norm_const_H=" + fmt(H)] = volterra_norm_const(H);
    const auto v = girsanov_v(times, beta, 1, HurstIndex(H), 1);
    auto table = kernel_table(H, steps, ctx.workers);
    const double sc = table->scale(dt);
    double sup_err = 0.0;
    for (std::size_t i = 1; i <= steps; ++i) {
      const auto row = table->row(i);
      double fwd = 0.0;
      for (std::size_t j = 0; j < i; ++j) fwd += row[j] * 0.5 * (v[j] + v[j + 1]);
      fwd *= sc * dt;
      sup_err = std::max(sup_err, std::abs(fwd - ibeta[i]));
    }
    add_value(ctx, "calibration_sup_err_H=" + fmt(H), sup_err);
    add_check(ctx, "girsanov_selfconsistent_H=" + fmt(H), sup_err <= tol,
              "forward-Volterra of v reproduces int beta, sup err = " + fmt(sup_err));
  }
}

// ---------------------------------------------------------------------------
// sde-solve (utility suite behind `sde solve`)
// ---------------------------------------------------------------------------
void suite_sde_solve(SuiteCtx& ctx) {
  const double H = ctx.cfg.get_double("hurst", 0.25);
  const auto drift = parse_drift(ctx.cfg.get_string("drift", "smooth:cos"));
  const int n_moll = static_cast<int>(ctx.cfg.get_int("n_moll", 256));
  const auto paths = static_cast<std::size_t>(ctx.cfg.get_int("paths", 200));
  const auto steps = static_cast<std::size_t>(ctx.cfg.get_int("steps", 1024));
  const double x0 = ctx.cfg.get_double("x0", 0.0);
  const double dt = 1.0 / static_cast<double>(steps);

  SdeConfig cfg;
  cfg.x0 = {x0};
  cfg.drift = drift;
  if (ctx.cfg.has("alpha")) cfg.drift.nominal_alpha = ctx.cfg.get_double("alpha", 0.0);
  cfg.n_moll = n_moll;
  cfg.hurst = H;
  cfg.n_steps = steps;
  cfg.dt = dt;
  add_value(ctx, "admissible", sde_config_admissible(cfg) ? 1.0 : 0.0);

  auto table = kernel_table(H, steps, ctx.workers);
  const MollifiedDrift bn = mollify(cfg.drift, n_moll);
  std::vector<std::vector<double>> psis(paths);
  std::vector<double> sup_psi(paths), x1(paths), resid(paths);
  std::vector<char> ok;
  ctx.rep.attrition = for_members(paths, ctx.workers, ok, [&](std::size_t m) {
    const auto fbm = std::make_shared<FbmPath>(
        fbm_from_driver(sample_driver(steps, dt, 1, seed_fanout(ctx.seed, m)), table));
    const auto path = solve_euler(cfg, fbm);
    double sup = 0.0;
    for (double v : path.psi) sup = std::max(sup, std::abs(v));
    sup_psi[m] = sup;
    x1[m] = path.x.back();
    resid[m] = residual(path, bn);
    psis[m] = path.psi;
  });
  ctx.rep.members = paths;

  std::vector<double> sup_ok, x1_ok, res_ok;
  std::vector<std::vector<double>> psis_ok;
  std::vector<std::vector<double>> rows;
  for (std::size_t m = 0; m < paths; ++m) {
    if (!ok[m]) continue;
    sup_ok.push_back(sup_psi[m]);
    x1_ok.push_back(x1[m]);
    res_ok.push_back(resid[m]);
    psis_ok.push_back(psis[m]);
    rows.push_back({static_cast<double>(m), sup_psi[m], x1[m], resid[m]});
  }
  add_quantity(ctx, "sup_psi", mean_estimate(sup_ok));
  add_quantity(ctx, "x_at_1", mean_estimate(x1_ok));
  add_quantity(ctx, "scheme_residual", mean_estimate(res_ok));
  if (psis_ok.size() >= 100) {
    std::vector<double> times(steps + 1);
    for (std::size_t i = 0; i <= steps; ++i) times[i] = dt * static_cast<double>(i);
    const double kappa = 1.0 + cfg.drift.nominal_alpha * H;
    add_value(ctx, "psi_seminorm_kappa=" + fmt(kappa),
              holder_seminorm_lm(psis_ok, times, kappa, 2.0), psis_ok.size());
  }
  write_csv(ctx, "paths", {"member", "sup_psi", "x_at_1", "residual"}, rows);
}

// ---------------------------------------------------------------------------
// she-convolution
// ---------------------------------------------------------------------------
void suite_she_convolution(SuiteCtx& ctx) {
  const Bc bc = ctx.cfg.get_string("bc", "periodic") == "neumann" ? Bc::neumann
                                                                  : Bc::periodic;
  const int modes = static_cast<int>(ctx.cfg.get_int("modes", 128));
  const auto nodes = static_cast<std::size_t>(ctx.cfg.get_int("nodes", 257));
  const auto steps = static_cast<std::size_t>(ctx.cfg.get_int("steps", 1024));
  const auto fields = static_cast<std::size_t>(ctx.cfg.get_int("fields", 2000));
  const double dt = 1.0 / static_cast<double>(steps);

  auto basis = SpectralBasis::make(bc, modes, nodes);
  const std::size_t nb = basis->n_basis();
  const std::vector<std::size_t> t_snap = {steps / 4, steps / 2, steps};
  const std::vector<std::size_t> x_snap = {nodes / 4, nodes / 2, (3 * nodes) / 4};

  // Monte Carlo second moments at the snapshot points.
  std::vector<std::vector<double>> slots(fields);
  std::vector<char> ok;
  ctx.rep.attrition = for_members(fields, ctx.workers, ok, [&](std::size_t m) {
    const auto noise = sample_she_noise(basis, steps, dt, seed_fanout(ctx.seed, m));
    std::vector<double> vmodes(nb, 0.0);
    std::vector<double> decay(nb);
    for (std::size_t k = 0; k < nb; ++k)
      decay[k] = std::exp(-basis->eigenvalues()[k] * dt);
    std::vector<double> out;
    for (std::size_t i = 0; i < steps; ++i) {
      for (std::size_t k = 0; k < nb; ++k)
        vmodes[k] = decay[k] * vmodes[k] + noise.eta[i * nb + k];
      if (std::find(t_snap.begin(), t_snap.end(), i + 1) != t_snap.end()) {
        for (std::size_t x : x_snap) {
          double val = 0.0;
          for (std::size_t k = 0; k < nb; ++k)
            val += vmodes[k] * basis->basis_value(k, x);
          out.push_back(val);
        }
      }
    }
    slots[m] = std::move(out);
  });
  ctx.rep.members = fields;

  double worst_z = 0.0;
  for (std::size_t ti = 0; ti < t_snap.size(); ++ti) {
    const double t = dt * static_cast<double>(t_snap[ti]);
    for (std::size_t xi = 0; xi < x_snap.size(); ++xi) {
      std::vector<double> sq;
      for (std::size_t m = 0; m < fields; ++m) {
        if (!ok[m]) continue;
        const double v = slots[m][ti * x_snap.size() + xi];
        sq.push_back(v * v);
      }
      const Estimate var = mean_estimate(sq);
      double truth = 0.0;
      for (std::size_t k = 0; k < nb; ++k) {
        const double lam = basis->eigenvalues()[k];
        const double e = basis->basis_value(k, x_snap[xi]);
        const double factor =
            lam * t < 1e-12 ? t : (1.0 - std::exp(-2.0 * lam * t)) / (2.0 * lam);
        truth += factor * e * e;
      }
      const double z = std::abs(var.value - truth) / std::max(var.stderr_, 1e-300);
      worst_z = std::max(worst_z, z);
    }
  }
  add_value(ctx, "variance_max_z", worst_z);
  add_check(ctx, "convolution_variance", worst_z <= 3.5,
            "max |z| over snapshot points = " + fmt(worst_z) + " (cap 3.5)");

  // Conditional-variance lower bound: analytic in the spectral picture.
  double cmin = 1e300;
  for (double s : {0.0, 0.25, 0.5})
    for (double span : {0.0625, 0.125, 0.25, 0.5}) {
      const double t = s + span;
      if (t > 1.0) continue;
      double var = 0.0;
      for (std::size_t k = 0; k < nb; ++k) {
        const double lam = basis->eigenvalues()[k];
        const double e = basis->basis_value(k, nodes / 2);
        const double factor =
            lam * span < 1e-12 ? span : (1.0 - std::exp(-2.0 * lam * span)) / (2.0 * lam);
        var += factor * e * e;
      }
      cmin = std::min(cmin, var / std::sqrt(span));
    }
  add_value(ctx, "conditional_variance_lower_const", cmin);
  add_check(ctx, "conditional_variance_scaling", cmin > 0.0,
            "fitted C in Var(V_t - E^s V_t) >= C (t-s)^{1/2} is " + fmt(cmin));
}

// ---------------------------------------------------------------------------
// she-solve
// ---------------------------------------------------------------------------
void suite_she_solve(SuiteCtx& ctx) {
  const Bc bc = ctx.cfg.get_string("bc", "periodic") == "neumann" ? Bc::neumann
                                                                  : Bc::periodic;
  const int modes = static_cast<int>(ctx.cfg.get_int("modes", 128));
  const auto nodes = static_cast<std::size_t>(ctx.cfg.get_int("nodes", 257));
  const auto steps = static_cast<std::size_t>(ctx.cfg.get_int("steps", 512));
  const auto fields = static_cast<std::size_t>(ctx.cfg.get_int("fields", 50));
  const auto drift = parse_drift(ctx.cfg.get_string("drift", "dirac@0:mass=1"));
  const int n_moll = static_cast<int>(ctx.cfg.get_int("n_moll", 256));
  const double dt = 1.0 / static_cast<double>(steps);

  auto basis = SpectralBasis::make(bc, modes, nodes);
  SheConfig cfg;
  cfg.drift = drift;
  if (ctx.cfg.has("alpha")) cfg.drift.nominal_alpha = ctx.cfg.get_double("alpha", -1.0);
  cfg.n_moll = n_moll;
  cfg.bc = bc;
  cfg.modes = modes;
  cfg.n_nodes = nodes;
  cfg.n_steps = steps;
  cfg.dt = dt;
  add_value(ctx, "admissible", she_config_admissible(cfg) ? 1.0 : 0.0);

  std::vector<double> sup_u(fields), sup_k(fields);
  std::vector<char> ok;
  ctx.rep.attrition = for_members(fields, ctx.workers, ok, [&](std::size_t m) {
    const auto noise = sample_she_noise(basis, steps, dt, seed_fanout(ctx.seed, m));
    const auto u = solve_mild(cfg, noise);
    const auto k = drift_component(cfg, u, noise);
    double su = 0.0, sk = 0.0;
    for (double v : u.values) su = std::max(su, std::abs(v));
    for (double v : k.values) sk = std::max(sk, std::abs(v));
    sup_u[m] = su;
    sup_k[m] = sk;
  });
  ctx.rep.members = fields;

  std::vector<double> su_ok, sk_ok;
  for (std::size_t m = 0; m < fields; ++m)
    if (ok[m]) {
      su_ok.push_back(sup_u[m]);
      sk_ok.push_back(sup_k[m]);
    }
  add_quantity(ctx, "sup_u", mean_estimate(su_ok));
  add_quantity(ctx, "sup_K", mean_estimate(sk_ok));

  // Deterministic decomposition check: with b == 0 the drift component
  // vanishes identically.
  SheConfig zero = cfg;
  zero.drift = parse_drift("smooth:zero");
  const auto noise = sample_she_noise(basis, steps, dt, seed_fanout(ctx.seed, 1234567));
  const auto u0field = solve_mild(zero, noise);
  const auto k0 = drift_component(zero, u0field, noise);
  double sup0 = 0.0;
  for (double v : k0.values) sup0 = std::max(sup0, std::abs(v));
  add_value(ctx, "zero_drift_K_sup", sup0);
  add_check(ctx, "mild_decomposition", sup0 <= 1e-10,
            "b == 0 gives K == 0 to " + fmt(sup0));
}

// ---------------------------------------------------------------------------
// she-coupling
// ---------------------------------------------------------------------------
void suite_she_coupling(SuiteCtx& ctx) {
  const Bc bc = ctx.cfg.get_string("bc", "periodic") == "neumann" ? Bc::neumann
                                                                  : Bc::periodic;
  const int modes = static_cast<int>(ctx.cfg.get_int("modes", 64));
  const auto nodes = static_cast<std::size_t>(ctx.cfg.get_int("nodes", 129));
  const auto steps = static_cast<std::size_t>(ctx.cfg.get_int("steps", 512));
  const auto fields = static_cast<std::size_t>(ctx.cfg.get_int("fields", 150));
  const auto drift = parse_drift(ctx.cfg.get_string("drift", "dirac@0:mass=1"));
  const int n_moll = static_cast<int>(ctx.cfg.get_int("n_moll", 256));
  const int g_moll = static_cast<int>(ctx.cfg.get_int("g_moll", 64));
  const auto lambdas = ctx.cfg.get_list("lambda", {8, 16, 32, 64});
  const int bins = static_cast<int>(ctx.cfg.get_int("bins", 64));
  const double lo = ctx.cfg.get_double("slope_lo", -1.3);
  const double hi = ctx.cfg.get_double("slope_hi", -0.6);
  const double dt = 1.0 / static_cast<double>(steps);
  const MollifiedDrift g = mollify(drift, g_moll);

  auto basis = SpectralBasis::make(bc, modes, nodes);
  SheConfig cfg;
  cfg.drift = drift;
  cfg.n_moll = n_moll;
  cfg.bc = bc;
  cfg.modes = modes;
  cfg.n_nodes = nodes;
  cfg.n_steps = steps;
  cfg.dt = dt;

  const double bias_allowance =
      std::sqrt(static_cast<double>(bins) / static_cast<double>(fields));
  std::vector<double> norms;
  std::vector<std::vector<double>> rows;
  for (double lam : lambdas) {
    std::vector<SheCouplingRun> runs(fields);
    std::vector<char> ok;
    ctx.rep.attrition += for_members(fields, ctx.workers, ok, [&](std::size_t m) {
      const auto noise = sample_she_noise(basis, steps, dt, seed_fanout(ctx.seed, m));
      runs[m] = coupled_field(cfg, g, lam, noise);
    });
    const auto rep = pinsker_bound_she(runs, bins);
    const double gap_norm = rep.paper_bound.value / (0.5 * lam);
    norms.push_back(gap_norm);
    add_value(ctx, "gap_c00l2_lambda=" + fmt(lam), gap_norm, fields);
    add_quantity(ctx, "pinsker_paper_lambda=" + fmt(lam), rep.paper_bound);
    add_quantity(ctx, "pinsker_kl_lambda=" + fmt(lam), rep.kl_direct);
    add_value(ctx, "hist_tv_lambda=" + fmt(lam), rep.hist_tv, fields);
    add_check(ctx, "she_tv_dominance_lambda=" + fmt(lam),
              rep.hist_tv <= rep.paper_bound.value + 2.0 * rep.paper_bound.stderr_ +
                                 bias_allowance,
              "hist TV " + fmt(rep.hist_tv) + " vs bound " + fmt(rep.paper_bound.value) +
                  " + bias allowance " + fmt(bias_allowance));
    rows.push_back({lam, gap_norm, rep.paper_bound.value, rep.hist_tv});
  }
  ctx.rep.members = fields * lambdas.size();
  bool monotone = true;
  for (std::size_t l = 0; l + 1 < norms.size(); ++l)
    if (norms[l + 1] > norms[l] * 1.05) monotone = false;
  add_check(ctx, "she_gap_monotone", monotone, "C^{0,0}L2 gap decreasing in lambda");
  const auto fit = scaling_exponent(lambdas, norms);
  add_slope(ctx, "she_coupling_contraction", fit);
  add_check(ctx, "she_coupling_slope_window", fit.slope >= lo && fit.slope <= hi,
            "slope " + fmt(fit.slope) + " window [" + fmt(lo) + ", " + fmt(hi) + "]");
  write_csv(ctx, "gap_vs_lambda", {"lambda", "gap_c00l2", "paper_bound", "hist_tv"},
            rows);
}

// ---------------------------------------------------------------------------
// sewing-run
// ---------------------------------------------------------------------------
void suite_sewing_run(SuiteCtx& ctx) {
  const std::string kind = ctx.cfg.get_string("germ", "drift");
  const int levels = static_cast<int>(ctx.cfg.get_int("levels", 12));
  const double H = ctx.cfg.get_double("hurst", 0.25);
  const auto steps = static_cast<std::size_t>(ctx.cfg.get_int("steps", 4096));
  const int n_moll = static_cast<int>(ctx.cfg.get_int("n_moll", 256));
  if (ctx.cfg.has("alpha")) ctx.cfg.get_double("alpha", -1.0);  // echoed only

  SewingReport rep;
  if (kind == "additive") {
    Germ germ{[](double s, double t) { return std::sin(t) - std::sin(s); }, false};
    rep = sew(germ, 0.0, 1.0, levels);
    add_check(ctx, "additive_exact", std::abs(rep.limit - (std::sin(1.0))) < 1e-14,
              "every level reproduces h(t) - h(s)");
  } else if (kind == "quadratic") {
    Germ germ{[](double s, double t) { return (t - s) * (t - s); }, false};
    rep = sew(germ, 0.0, 1.0, levels);
    add_check(ctx, "quadratic_vanishes", std::abs(rep.limit) <= std::pow(2.0, -levels) + 1e-15,
              "defect order 2 kills the germ");
  } else if (kind == "drift") {
    const int max_level = std::min<int>(levels, static_cast<int>(std::log2(steps)));
    const auto fbm = std::make_shared<FbmPath>(
        sample_fbm(steps, 1.0 / static_cast<double>(steps), HurstIndex(H), 1, ctx.seed));
    const MollifiedDrift f = mollify(parse_drift("dirac@0:mass=1"), n_moll);
    const Germ germ = conditional_drift_germ(f, {}, fbm);
    rep = sew(germ, 0.0, 1.0, max_level);
  } else {
    throw std::invalid_argument("sewing-run: germ must be additive|quadratic|drift");
  }
  add_value(ctx, "limit", rep.limit);
  add_value(ctx, "fitted_defect_exponent", rep.fitted_defect_exponent);
  add_value(ctx, "converged", rep.converged ? 1.0 : 0.0);
  std::vector<std::vector<double>> rows;
  for (std::size_t k = 0; k < rep.sums.size(); ++k)
    rows.push_back({static_cast<double>(rep.levels[k]), rep.sums[k],
                    k > 0 ? rep.cauchy[k - 1] : 0.0});
  write_csv(ctx, "levels", {"level", "sum", "cauchy_increment"}, rows);
  ctx.rep.members = 1;
}

using SuiteFn = void (*)(SuiteCtx&);

const std::map<std::string, SuiteFn>& registry() {
  static const std::map<std::string, SuiteFn> reg = {
      {"fbm-covariance", suite_fbm_covariance},
      {"heat-kernel-laws", suite_heat_kernel_laws},
      {"occupation-scaling", suite_occupation_scaling},
      {"exp-weight-scaling", suite_exp_weight_scaling},
      {"she-lambda-scaling", suite_she_lambda_scaling},
      {"sde-coupling-contraction", suite_sde_coupling_contraction},
      {"girsanov-pinsker", suite_girsanov_pinsker},
      {"sde-weak-cauchy", suite_sde_weak_cauchy},
      {"she-weak-cauchy", suite_she_weak_cauchy},
      {"min-construction", suite_min_construction},
      {"sewing-oracle", suite_sewing_oracle},
      {"heat-kernel-lipschitz", suite_heat_kernel_lipschitz},
      {"girsanov-calibration", suite_girsanov_calibration},
      {"sde-solve", suite_sde_solve},
      {"she-convolution", suite_she_convolution},
      {"she-solve", suite_she_solve},
      {"she-coupling", suite_she_coupling},
      {"sewing-run", suite_sewing_run},
  };
  return reg;
}

}  // namespace

std::vector<std::string> suite_ids() {
  std::vector<std::string> out;
  for (const auto& [name, fn] : registry()) out.push_back(name);
  return out;
}

void run_suite(const std::string& suite, const ConfigMap& cfg, ExperimentReport& rep,
               const std::string& out_dir) {
  const auto& reg = registry();
  auto it = reg.find(suite);
  if (it == reg.end()) throw std::invalid_argument("unknown suite: " + suite);
  SuiteCtx ctx{cfg, rep, out_dir, static_cast<int>(cfg.get_int("workers", 0)),
               cfg.get_u64("seed", 7)};
  it->second(ctx);
}

}  // namespace fraclab::detail
