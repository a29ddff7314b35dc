#include "fraclab/sewing.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fraclab/metrics.hpp"

namespace fraclab {

SewingReport sew(const Germ& germ, double s, double t, int max_level) {
  if (!(s < t)) throw std::invalid_argument("sew: need s < t");
  if (max_level < 0 || max_level > 24)
    throw std::invalid_argument("sew: max_level out of range");
  SewingReport rep;
  for (int k = 0; k <= max_level; ++k) {
    const std::size_t cells = std::size_t{1} << k;
    const double tau = (t - s) / static_cast<double>(cells);
    double sum = 0.0;
    for (std::size_t i = 0; i < cells; ++i) {
      const double a = s + tau * static_cast<double>(i);
      const double b = (i + 1 == cells) ? t : s + tau * static_cast<double>(i + 1);
      sum += germ.eval(a, b);
    }
    rep.levels.push_back(k);
    rep.sums.push_back(sum);
    if (k > 0) rep.cauchy.push_back(std::abs(sum - rep.sums[k - 1]));
  }
  rep.limit = rep.sums.back();

  const double floor = 1e-12 * (1.0 + std::abs(rep.limit));
  const std::size_t nc = rep.cauchy.size();
  if (nc == 0) {
    rep.converged = true;
  } else if (nc < 4) {
    rep.converged = rep.cauchy.back() <= floor;
  } else {
    bool decaying = true;
    for (std::size_t k = nc - 3; k < nc; ++k) {
      if (rep.cauchy[k] <= floor) continue;
      if (!(rep.cauchy[k] <= 0.85 * rep.cauchy[k - 1] + floor)) decaying = false;
    }
    rep.converged = decaying || rep.cauchy.back() <= floor;
  }

  // Defect-exponent fit over the decaying increments.
  std::vector<double> meshes, increments;
  for (std::size_t k = 0; k < nc; ++k) {
    if (rep.cauchy[k] > floor) {
      meshes.push_back((t - s) / std::pow(2.0, static_cast<double>(k + 1)));
      increments.push_back(rep.cauchy[k]);
    }
  }
  if (meshes.size() >= 3)
    rep.fitted_defect_exponent = scaling_exponent(meshes, increments).slope;
  return rep;
}

double delta_defect(const Germ& germ, double s, double u, double t) {
  if (!(s <= u && u <= t)) throw std::invalid_argument("delta_defect: need s <= u <= t");
  return germ.eval(s, t) - germ.eval(s, u) - germ.eval(u, t);
}

Germ conditional_drift_germ(const MollifiedDrift& f, std::vector<double> phi,
                            std::shared_ptr<const FbmPath> fbm) {
  if (!fbm) throw std::invalid_argument("conditional_drift_germ: null path");
  if (fbm->dim != 1)
    throw std::invalid_argument("conditional_drift_germ: defined for d = 1");
  if (!phi.empty() && phi.size() != fbm->times.size())
    throw std::invalid_argument("conditional_drift_germ: phi size mismatch");

  const double dt = fbm->dt;
  const std::size_t n = fbm->n_steps();
  auto node_of = [dt, n](double time) {
    const double x = time / dt;
    const auto idx = static_cast<std::size_t>(std::llround(x));
    if (idx > n || std::abs(x - static_cast<double>(idx)) > 1e-6)
      throw std::invalid_argument("conditional_drift_germ: time off the path grid");
    return idx;
  };

  Germ germ;
  germ.conditional = true;
  germ.eval = [f, phi = std::move(phi), fbm, node_of, dt](double s, double t) {
    const std::size_t js = node_of(s);
    const std::size_t jt = node_of(t);
    if (jt < js) throw std::invalid_argument("conditional_drift_germ: need s <= t");
    const double shift = phi.empty() ? 0.0 : phi[js];
    const auto& table = *fbm->table;
    const double sc = table.scale(dt);
    const double twoH = 2.0 * table.hurst();
    const double* dw = fbm->driver.increments.data();
    double acc = 0.0;
    for (std::size_t i = js; i < jt; ++i) {
      // E^s B_i and sigma^2(s, i) through the tail of row i.
      double tail = 0.0, var = 0.0;
      if (i > js) {
        const auto row = table.row(i);
        for (std::size_t j = js; j < i; ++j) {
          tail += row[j] * dw[j];
          var += row[j] * row[j];
        }
        tail *= sc;
        var *= std::pow(dt, twoH);
      }
      const double cond_mean = fbm->value(i) - tail;
      acc += f.smoothed(var, cond_mean + shift) * dt;
    }
    return acc;
  };
  return germ;
}

ControlPowerFit control_power_check(std::span<const DefectSample> samples,
                                    const std::function<double(double, double)>& control) {
  if (samples.empty()) throw std::invalid_argument("control_power_check: no samples");
  ControlPowerFit out;
  std::vector<double> ws, ds;
  for (const auto& smp : samples) {
    const double ad = std::abs(smp.defect);
    if (ad <= 1e-14) continue;
    const double w = control(smp.s, smp.t);
    if (w <= 0.0) continue;
    ws.push_back(w);
    ds.push_back(ad);
  }
  if (ws.size() < 3) {
    out.exact_additive = true;
    return out;
  }
  out.fit = scaling_exponent(ws, ds);
  return out;
}

}  // namespace fraclab
