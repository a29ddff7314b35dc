#include "fraclab/drift.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fraclab/gaussian.hpp"
#include "fraclab/grid.hpp"
#include "fraclab/quadrature.hpp"

namespace fraclab {

namespace {

double std_normal_cdf(double z) { return 0.5 * std::erfc(-z * M_SQRT1_2); }

}  // namespace

double DistributionalDrift::heat_eval(double tau, double x) const {
  const double total = base_tau + tau;
  if (total < 0.0) throw std::invalid_argument("heat_eval: negative smoothing variance");

  switch (kind) {
    case DriftKind::dirac_comb: {
      if (total <= 0.0)
        throw std::invalid_argument("heat_eval: atoms require positive smoothing");
      double acc = 0.0;
      for (const auto& [mass, loc] : atoms) acc += mass * gamma_density(total, x - loc);
      return scale * acc;
    }
    case DriftKind::signed_measure: {
      double acc = 0.0;
      for (const auto& [mass, loc] : atoms) {
        if (total <= 0.0)
          throw std::invalid_argument("heat_eval: atoms require positive smoothing");
        acc += mass * gamma_density(total, x - loc);
      }
      for (const auto& p : pieces) {
        const double dens = p.weight / (p.b - p.a);
        if (total <= 0.0) {
          acc += (x >= p.a && x <= p.b) ? dens : 0.0;
        } else {
          const double s = std::sqrt(total);
          acc += dens * (std_normal_cdf((x - p.a) / s) - std_normal_cdf((x - p.b) / s));
        }
      }
      return scale * acc;
    }
    case DriftKind::holder_derivative: {
      if (total <= 0.0)
        throw std::invalid_argument("heat_eval: derivative kind requires positive smoothing");
      // b = F', F = sum_j 2^{-j g} cos(2^j pi x); termwise Gaussian smoothing
      // multiplies mode 2^j pi by exp(-(2^j pi)^2 total / 2).
      double acc = 0.0;
      for (int j = 0; j < series_terms; ++j) {
        const double omega = M_PI * std::ldexp(1.0, j);
        const double damp = 0.5 * omega * omega * total;
        if (damp > 40.0) break;
        acc -= std::pow(2.0, j * (1.0 - holder_gamma)) * M_PI * std::exp(-damp) *
               std::sin(omega * x);
      }
      return scale * acc;
    }
    case DriftKind::smooth: {
      if (!fn) throw std::logic_error("heat_eval: smooth drift without callable");
      if (total <= 0.0) return scale * fn(x);
      return scale * quad::gauss_hermite_mean(fn, x, std::sqrt(total));
    }
  }
  throw std::logic_error("heat_eval: unreachable");
}

DistributionalDrift DistributionalDrift::scaled(double c) const {
  DistributionalDrift out = *this;
  out.scale *= c;
  return out;
}

double DistributionalDrift::support_radius() const {
  double r = 1.0;
  for (const auto& [mass, loc] : atoms) r = std::max(r, std::abs(loc));
  for (const auto& p : pieces) r = std::max({r, std::abs(p.a), std::abs(p.b)});
  return r;
}

bool DistributionalDrift::is_nonneg_measure() const {
  if (kind != DriftKind::dirac_comb && kind != DriftKind::signed_measure) return false;
  for (const auto& [mass, loc] : atoms)
    if (scale * mass < 0.0) return false;
  for (const auto& p : pieces)
    if (scale * p.weight < 0.0) return false;
  return true;
}

DistributionalDrift MollifiedDrift::as_drift() const {
  DistributionalDrift out = source;
  out.base_tau += 1.0 / level;
  return out;
}

MollifiedDrift mollify(const DistributionalDrift& b, int n) {
  if (n < 1) throw std::invalid_argument("mollify: level must be >= 1");
  return MollifiedDrift{b, n};
}

namespace {

bool consume(std::string& s, const std::string& prefix) {
  if (s.rfind(prefix, 0) == 0) {
    s.erase(0, prefix.size());
    return true;
  }
  return false;
}

double parse_num(const std::string& s) {
  std::size_t pos = 0;
  const double v = std::stod(s, &pos);
  if (pos != s.size()) throw std::invalid_argument("drift id: bad number '" + s + "'");
  return v;
}

}  // namespace

DistributionalDrift parse_drift(const std::string& id) {
  DistributionalDrift d;
  d.id = id;
  std::string rest = id;

  if (consume(rest, "dirac-pair@")) {
    const auto colon = rest.find(':');
    double mass = 1.0;
    std::string at = rest;
    if (colon != std::string::npos) {
      at = rest.substr(0, colon);
      std::string opt = rest.substr(colon + 1);
      if (!consume(opt, "mass=")) throw std::invalid_argument("drift id: " + id);
      mass = parse_num(opt);
    }
    const double x0 = parse_num(at);
    d.kind = DriftKind::dirac_comb;
    d.nominal_alpha = -1.0;
    d.atoms = {{mass, x0}, {-mass, -x0}};
    return d;
  }
  if (consume(rest, "dirac@")) {
    const auto colon = rest.find(':');
    double mass = 1.0;
    std::string at = rest;
    if (colon != std::string::npos) {
      at = rest.substr(0, colon);
      std::string opt = rest.substr(colon + 1);
      if (!consume(opt, "mass=")) throw std::invalid_argument("drift id: " + id);
      mass = parse_num(opt);
    }
    d.kind = DriftKind::dirac_comb;
    d.nominal_alpha = -1.0;
    d.atoms = {{mass, parse_num(at)}};
    return d;
  }
  if (consume(rest, "measure:uniform[")) {
    const auto comma = rest.find(',');
    const auto close = rest.find(']');
    if (comma == std::string::npos || close == std::string::npos || close < comma)
      throw std::invalid_argument("drift id: " + id);
    const double a = parse_num(rest.substr(0, comma));
    const double b = parse_num(rest.substr(comma + 1, close - comma - 1));
    if (!(a < b)) throw std::invalid_argument("drift id: empty interval in " + id);
    d.kind = DriftKind::signed_measure;
    d.nominal_alpha = -1.0;
    d.pieces = {{a, b, 1.0}};
    return d;
  }
  if (consume(rest, "weierstrass:gamma=")) {
    const auto colon = rest.find(':');
    if (colon == std::string::npos || rest.substr(colon + 1) != "deriv")
      throw std::invalid_argument("drift id: " + id);
    const double g = parse_num(rest.substr(0, colon));
    if (g <= 0.0 || g >= 1.0)
      throw std::invalid_argument("drift id: gamma must be in (0,1)");
    d.kind = DriftKind::holder_derivative;
    d.holder_gamma = g;
    d.nominal_alpha = g - 1.0;
    return d;
  }
  if (consume(rest, "smooth:")) {
    d.kind = DriftKind::smooth;
    d.nominal_alpha = -0.1;
    if (rest == "zero") {
      d.fn = [](double) { return 0.0; };
    } else if (consume(rest, "const=")) {
      const double c = parse_num(rest);
      d.fn = [c](double) { return c; };
    } else if (rest == "cos") {
      d.fn = [](double x) { return std::cos(x); };
    } else if (rest == "neg-x") {
      d.fn = [](double x) { return -x; };
    } else if (rest == "bump") {
      d.fn = [](double x) { return std::exp(-0.5 * x * x); };
    } else {
      throw std::invalid_argument("drift id: unknown smooth drift " + id);
    }
    return d;
  }
  throw std::invalid_argument("drift id: unknown catalog entry '" + id + "'");
}

std::vector<std::string> drift_catalog() {
  return {"dirac@0:mass=1",      "dirac-pair@0.5:mass=1",
          "measure:uniform[0,0.5]", "weierstrass:gamma=0.3:deriv",
          "weierstrass:gamma=0.5:deriv", "smooth:zero",
          "smooth:cos",          "smooth:bump"};
}

double besov_norm_neg(const DistributionalDrift& b, double alpha,
                      std::span<const double> t_levels) {
  if (alpha >= 0.0)
    throw std::invalid_argument("besov_norm_neg: surrogate defined for alpha < 0 only");
  if (t_levels.empty()) throw std::invalid_argument("besov_norm_neg: empty t_levels");
  const double L = 6.0 + b.support_radius();
  const std::size_t n_eval = 1537;
  const auto xs = linspace(-L, L, n_eval);
  double best = 0.0;
  for (double t : t_levels) {
    double sup = 0.0;
    for (double x : xs) sup = std::max(sup, std::abs(b.heat_eval(t, x)));
    best = std::max(best, std::pow(t, -0.5 * alpha) * sup);
  }
  return best;
}

double besov_norm_neg(const DistributionalDrift& b, double alpha) {
  const auto levels = default_t_levels();
  return besov_norm_neg(b, alpha, levels);
}

double c_alpha_minus_distance(const DistributionalDrift& b, const DistributionalDrift& g,
                              double alpha_prime) {
  if (alpha_prime >= 0.0)
    throw std::invalid_argument("c_alpha_minus_distance: alpha' must be negative");
  // Common fine pre-mollification keeps both sides well-defined; the Gaussian
  // semigroup composes exactly, so G_t(b_m - g_m) = b.heat_eval(t + 1/m) - ...
  constexpr double fine_tau = 1.0 / 4096.0;
  const double L = 6.0 + std::max(b.support_radius(), g.support_radius());
  const std::size_t n_eval = 1537;
  const auto xs = linspace(-L, L, n_eval);
  const auto levels = default_t_levels();
  double best = 0.0;
  for (double t : levels) {
    double sup = 0.0;
    for (double x : xs)
      sup = std::max(sup,
                     std::abs(b.heat_eval(t + fine_tau, x) - g.heat_eval(t + fine_tau, x)));
    best = std::max(best, std::pow(t, -0.5 * alpha_prime) * sup);
  }
  return best;
}

bool admissible_weak(double alpha, double H) {
  return alpha > 0.5 - 0.5 / H;
}

bool admissible_strong_d1(double alpha, double H, bool nonneg_measure) {
  if (nonneg_measure) return true;
  return (1.0 + alpha * H) * (alpha + 0.5 / H) > 0.5;
}

}  // namespace fraclab
