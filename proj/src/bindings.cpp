#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fraclab/drift.hpp"
#include "fraclab/fbm.hpp"
#include "fraclab/gaussian.hpp"
#include "fraclab/grid.hpp"
#include "fraclab/harness.hpp"
#include "fraclab/metrics.hpp"
#include "fraclab/rng.hpp"
#include "fraclab/sde.hpp"
#include "fraclab/sewing.hpp"
#include "fraclab/she.hpp"
#include "fraclab/version.hpp"

namespace py = pybind11;
using namespace fraclab;

namespace {

HeatKernelSpec make_spec(const std::string& domain, int image_truncation,
                         int spectral_modes) {
  HeatKernelSpec spec;
  if (domain == "whole_line")
    spec.domain = DomainKind::whole_line;
  else if (domain == "periodic")
    spec.domain = DomainKind::periodic;
  else if (domain == "neumann")
    spec.domain = DomainKind::neumann;
  else
    throw std::invalid_argument("domain must be whole_line|periodic|neumann");
  spec.image_truncation = image_truncation;
  spec.spectral_modes = spectral_modes;
  return spec;
}

py::dict estimate_dict(const Estimate& e) {
  py::dict d;
  d["value"] = e.value;
  d["stderr"] = e.stderr_;
  d["n"] = e.n;
  return d;
}

py::dict slope_dict(const SlopeFit& f) {
  py::dict d;
  d["xs"] = f.xs;
  d["ys"] = f.ys;
  d["slope"] = f.slope;
  d["intercept"] = f.intercept;
  d["stderr"] = f.stderr_;
  d["r2"] = f.r2;
  return d;
}

py::dict path_dict(const SamplePath& p) {
  py::dict d;
  d["times"] = p.times;
  d["x"] = p.x;
  d["psi"] = p.psi;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "numerical laboratory for SDEs and the stochastic heat equation with "
            "distributional drifts driven by fractional noise";
  m.attr("__version__") = kVersion;

  // gaussian tools
  m.def(
      "gamma_density",
      [](double t, const std::vector<double>& x) {
        return gamma_density(t, std::span<const double>(x.data(), x.size()));
      },
      py::arg("t"), py::arg("x"));
  m.def(
      "heat_kernel",
      [](double t, double x, double y, const std::string& domain, int image_truncation) {
        return heat_kernel(t, x, y, make_spec(domain, image_truncation, 256));
      },
      py::arg("t"), py::arg("x"), py::arg("y"), py::arg("domain") = "periodic",
      py::arg("image_truncation") = 8);
  m.def(
      "apply_semigroup",
      [](const std::vector<double>& grid, const std::vector<double>& values, double t,
         const std::string& domain, int modes, const std::string& route) {
        GridFunction f{grid, values};
        const auto r = route == "quadrature" ? SemigroupRoute::quadrature
                                             : SemigroupRoute::spectral;
        return apply_semigroup(f, t, make_spec(domain, 8, modes), r).values;
      },
      py::arg("grid"), py::arg("values"), py::arg("t"), py::arg("domain") = "periodic",
      py::arg("modes") = 256, py::arg("route") = "spectral");
  m.def(
      "besov_norm_neg",
      [](const std::string& drift_id, double alpha, int n_moll) {
        const auto b = parse_drift(drift_id);
        if (n_moll > 0) return besov_norm_neg(mollify(b, n_moll).as_drift(), alpha);
        return besov_norm_neg(b, alpha);
      },
      py::arg("drift"), py::arg("alpha"), py::arg("n_moll") = 0);

  // drifts
  m.def("drift_catalog", &drift_catalog);
  m.def(
      "mollify_eval",
      [](const std::string& drift_id, int n, const std::vector<double>& xs) {
        const auto bn = mollify(parse_drift(drift_id), n);
        std::vector<double> out(xs.size());
        for (std::size_t i = 0; i < xs.size(); ++i) out[i] = bn(xs[i]);
        return out;
      },
      py::arg("drift"), py::arg("n"), py::arg("xs"));
  m.def(
      "c_alpha_minus_distance",
      [](const std::string& b, const std::string& g, double alpha_prime) {
        return c_alpha_minus_distance(parse_drift(b), parse_drift(g), alpha_prime);
      },
      py::arg("b"), py::arg("g"), py::arg("alpha_prime"));
  m.def("admissible_weak", &admissible_weak, py::arg("alpha"), py::arg("hurst"));
  m.def("admissible_strong_d1", &admissible_strong_d1, py::arg("alpha"),
        py::arg("hurst"), py::arg("nonneg_measure"));

  // fbm
  m.def("volterra_kernel",
        [](double t, double s, double H) { return volterra_kernel(t, s, HurstIndex(H)); },
        py::arg("t"), py::arg("s"), py::arg("hurst"));
  m.def("volterra_norm_const", &volterra_norm_const, py::arg("hurst"));
  m.def("girsanov_c", &girsanov_c, py::arg("hurst"));
  m.def("fbm_covariance", &fbm_covariance, py::arg("s"), py::arg("t"), py::arg("hurst"));
  m.def(
      "sample_fbm",
      [](std::size_t n_steps, double dt, double H, int dim, std::uint64_t seed) {
        const auto p = sample_fbm(n_steps, dt, HurstIndex(H), dim, seed);
        py::dict d;
        d["times"] = p.times;
        d["values"] = p.values;
        d["increments"] = p.driver.increments;
        d["dim"] = p.dim;
        return d;
      },
      py::arg("n_steps"), py::arg("dt"), py::arg("hurst"), py::arg("dim") = 1,
      py::arg("seed") = 0);
  m.def(
      "girsanov_v",
      [](const std::vector<double>& times, const std::vector<double>& beta, double H,
         std::size_t stride) {
        return girsanov_v(times, beta, 1, HurstIndex(H), stride);
      },
      py::arg("times"), py::arg("beta"), py::arg("hurst"), py::arg("stride") = 1);

  // metrics
  m.def("wasserstein1_1d",
        [](const std::vector<double>& a, const std::vector<double>& b) {
          return wasserstein1_1d(a, b);
        });
  m.def(
      "tv_histogram",
      [](const std::vector<double>& a, const std::vector<double>& b, int bins) {
        return tv_histogram(a, b, bins);
      },
      py::arg("a"), py::arg("b"), py::arg("bins") = 64);
  m.def("p_variation",
        [](const std::vector<double>& v, double p) { return p_variation(v, p); },
        py::arg("values"), py::arg("p"));
  m.def("scaling_exponent",
        [](const std::vector<double>& xs, const std::vector<double>& ys) {
          return slope_dict(scaling_exponent(xs, ys));
        });
  m.def("sync_coupling_wbound", [](const std::vector<double>& gaps) {
    return estimate_dict(sync_coupling_wbound(gaps));
  });

  // sde
  m.def(
      "solve_euler",
      [](double x0, const std::string& drift_id, int n_moll, double H,
         std::size_t n_steps, std::uint64_t seed) {
        SdeConfig cfg;
        cfg.x0 = {x0};
        cfg.drift = parse_drift(drift_id);
        cfg.n_moll = n_moll;
        cfg.hurst = H;
        cfg.n_steps = n_steps;
        cfg.dt = 1.0 / static_cast<double>(n_steps);
        auto fbm = std::make_shared<FbmPath>(
            sample_fbm(n_steps, cfg.dt, HurstIndex(H), 1, seed));
        return path_dict(solve_euler(cfg, fbm));
      },
      py::arg("x0"), py::arg("drift"), py::arg("n_moll"), py::arg("hurst"),
      py::arg("n_steps"), py::arg("seed") = 0);
  m.def(
      "coupled_pair",
      [](const std::string& drift_id, int n_moll, int g_moll, double lam, double H,
         std::size_t n_steps, std::uint64_t seed, std::size_t v_stride) {
        SdeConfig cfg;
        cfg.x0 = {0.0};
        cfg.drift = parse_drift(drift_id);
        cfg.n_moll = n_moll;
        cfg.hurst = H;
        cfg.n_steps = n_steps;
        cfg.dt = 1.0 / static_cast<double>(n_steps);
        auto fbm = std::make_shared<FbmPath>(
            sample_fbm(n_steps, cfg.dt, HurstIndex(H), 1, seed));
        const double y0 = 0.0;
        const auto run =
            coupled_pair(cfg, mollify(cfg.drift, g_moll),
                         std::span<const double>(&y0, 1), lam, fbm,
                         CouplingScheme::explicit_euler, v_stride);
        py::dict d;
        d["X"] = path_dict(run.X);
        d["Y_tilde"] = path_dict(run.Y_tilde);
        d["Y"] = path_dict(run.Y);
        d["B_tilde"] = run.B_tilde;
        d["v"] = run.v;
        d["v_times"] = run.v_times;
        d["sup_gap"] = run.sup_gap;
        return d;
      },
      py::arg("drift"), py::arg("n_moll"), py::arg("g_moll"), py::arg("lam"),
      py::arg("hurst"), py::arg("n_steps"), py::arg("seed") = 0,
      py::arg("v_stride") = 4);

  // sewing
  m.def(
      "sew",
      [](const std::function<double(double, double)>& germ, double s, double t,
         int max_level) {
        const auto rep = sew(Germ{germ, false}, s, t, max_level);
        py::dict d;
        d["levels"] = rep.levels;
        d["sums"] = rep.sums;
        d["cauchy"] = rep.cauchy;
        d["converged"] = rep.converged;
        d["fitted_defect_exponent"] = rep.fitted_defect_exponent;
        d["limit"] = rep.limit;
        return d;
      },
      py::arg("germ"), py::arg("s"), py::arg("t"), py::arg("max_level") = 10);

  // harness
  m.def("list_suites", &list_suites);
  m.def("seed_fanout", &seed_fanout, py::arg("base_seed"), py::arg("member_index"));
  m.def(
      "run_experiment",
      [](const std::string& suite, const py::dict& config, const std::string& out_dir) {
        ConfigMap cfg;
        for (const auto& item : config)
          cfg.set(py::str(item.first).cast<std::string>(),
                  py::str(item.second).cast<std::string>());
        const auto rep = run_experiment(suite, cfg, out_dir);
        py::dict d;
        d["suite"] = rep.suite;
        d["passed"] = rep.passed;
        d["seed"] = rep.seed;
        d["members"] = rep.members;
        d["attrition"] = rep.attrition;
        d["json"] = rep.to_json_string();
        py::dict qs;
        for (const auto& q : rep.quantities) qs[py::str(q.name)] = estimate_dict(q.est);
        d["quantities"] = qs;
        py::dict ss;
        for (const auto& s : rep.slopes) ss[py::str(s.name)] = slope_dict(s.fit);
        d["slopes"] = ss;
        py::list checks;
        for (const auto& c : rep.checks) {
          py::dict cd;
          cd["name"] = c.name;
          cd["pass"] = c.pass;
          cd["detail"] = c.detail;
          checks.append(cd);
        }
        d["checks"] = checks;
        return d;
      },
      py::arg("suite"), py::arg("config") = py::dict{}, py::arg("out_dir") = "");
}
