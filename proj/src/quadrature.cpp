#include "fraclab/quadrature.hpp"

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace fraclab::quad {

namespace {

constexpr std::array<double, 4> kX4 = {-0.86113631159405257, -0.33998104358485626,
                                       0.33998104358485626, 0.86113631159405257};
constexpr std::array<double, 4> kW4 = {0.34785484513745368, 0.65214515486254621,
                                       0.65214515486254621, 0.34785484513745368};

constexpr std::array<double, 8> kX8 = {
    -0.96028985649753618, -0.79666647741362673, -0.52553240991632899, -0.18343464249564978,
    0.18343464249564978,  0.52553240991632899,  0.79666647741362673,  0.96028985649753618};
constexpr std::array<double, 8> kW8 = {
    0.10122853629037669, 0.22238103445337434, 0.31370664587788705, 0.36268378337836177,
    0.36268378337836177, 0.31370664587788705, 0.22238103445337434, 0.10122853629037669};

constexpr std::array<double, 16> kX16 = {
    -0.98940093499164994,  -0.9445750230732326,  -0.86563120238783176, -0.755404408355003,
    -0.61787624440264377,  -0.45801677765722737, -0.28160355077925892, -0.095012509837637454,
    0.095012509837637454,  0.28160355077925892,  0.45801677765722737,  0.61787624440264377,
    0.755404408355003,     0.86563120238783176,  0.9445750230732326,   0.98940093499164994};
constexpr std::array<double, 16> kW16 = {
    0.027152459411754037, 0.062253523938647706, 0.095158511682492591, 0.12462897125553403,
    0.14959598881657676,  0.16915651939500262,  0.18260341504492361,  0.18945061045506859,
    0.18945061045506859,  0.18260341504492361,  0.16915651939500262,  0.14959598881657676,
    0.12462897125553403,  0.095158511682492591, 0.062253523938647706, 0.027152459411754037};

constexpr std::array<double, 32> kX32 = {
    -0.99726386184948157, -0.98561151154526838, -0.96476225558750639, -0.93490607593773967,
    -0.8963211557660522,  -0.84936761373256997, -0.79448379596794239, -0.73218211874028971,
    -0.66304426693021523, -0.5877157572407623,  -0.50689990893222936, -0.42135127613063533,
    -0.33186860228212767, -0.23928736225213706, -0.14447196158279649, -0.04830766568773831,
    0.04830766568773831,  0.14447196158279649,  0.23928736225213706,  0.33186860228212767,
    0.42135127613063533,  0.50689990893222936,  0.5877157572407623,   0.66304426693021523,
    0.73218211874028971,  0.79448379596794239,  0.84936761373256997,  0.8963211557660522,
    0.93490607593773967,  0.96476225558750639,  0.98561151154526838,  0.99726386184948157};
constexpr std::array<double, 32> kW32 = {
    0.0070186100094692984, 0.016274394730905965, 0.025392065309262427, 0.034273862913021626,
    0.042835898022226426,  0.050998059262376244, 0.058684093478535704, 0.065822222776361752,
    0.072345794108848449,  0.078193895787070311, 0.083311924226946846, 0.087652093004403908,
    0.091173878695763863,  0.093844399080804566, 0.095638720079274833, 0.096540088514727812,
    0.096540088514727812,  0.095638720079274833, 0.093844399080804566, 0.091173878695763863,
    0.087652093004403908,  0.083311924226946846, 0.078193895787070311, 0.072345794108848449,
    0.065822222776361752,  0.058684093478535704, 0.050998059262376244, 0.042835898022226426,
    0.034273862913021626,  0.025392065309262427, 0.016274394730905965, 0.0070186100094692984};

constexpr std::array<double, 33> kHermX = {
    -7.2538518220152008,   -6.5416554457380771,  -5.9480711820871441,  -5.4149290026141923,
    -4.9200285205950083,   -4.4519111488328269,  -4.0036716099569309,  -3.5707219802327184,
    -3.1497966817038252,   -2.7384458243513548,  -2.334751151529515,   -1.9371545818222067,
    -1.5443482612431219,   -1.1552002041267895,  -0.76870137975886854, -0.38392601450840902,
    0.0,                   0.38392601450840902,  0.76870137975886854,  1.1552002041267895,
    1.5443482612431219,    1.9371545818222067,   2.334751151529515,    2.7384458243513548,
    3.1497966817038252,    3.5707219802327184,   4.0036716099569309,   4.4519111488328269,
    4.9200285205950083,    5.4149290026141923,   5.9480711820871441,   6.5416554457380771,
    7.2538518220152008};
constexpr std::array<double, 33> kHermW = {
    1.153316218545875e-23,  1.6570947415337007e-19, 2.4077856795580013e-16,
    9.4348141590150059e-14, 1.4739809370924936e-11, 1.1289222471083387e-09,
    4.8077456763232326e-08, 1.2376933672012089e-06, 2.0423684051423792e-05,
    0.00022544277059632716, 0.0017184546377609275,  0.0092656899706852341,
    0.035987982318576979,   0.10206907999554152,    0.21349393115029189,
    0.33155200075074126,    0.38378526651986378,    0.33155200075074126,
    0.21349393115029189,    0.10206907999554152,    0.035987982318576979,
    0.0092656899706852341,  0.0017184546377609275,  0.00022544277059632716,
    2.0423684051423792e-05, 1.2376933672012089e-06, 4.8077456763232326e-08,
    1.1289222471083387e-09, 1.4739809370924936e-11, 9.4348141590150059e-14,
    2.4077856795580013e-16, 1.6570947415337007e-19, 1.153316218545875e-23};

template <std::size_t N>
double gl_rule(const std::function<double(double)>& f, double a, double b,
               const std::array<double, N>& xs, const std::array<double, N>& ws) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double acc = 0.0;
  for (std::size_t i = 0; i < N; ++i) acc += ws[i] * f(mid + half * xs[i]);
  return half * acc;
}

double adaptive_impl(const std::function<double(double)>& f, double a, double b,
                     double tol, int depth) {
  const double coarse = gl_rule(f, a, b, kX16, kW16);
  const double fine = gl_rule(f, a, b, kX32, kW32);
  if (std::abs(fine - coarse) <= tol || depth <= 0) return fine;
  const double mid = 0.5 * (a + b);
  return adaptive_impl(f, a, mid, 0.5 * tol, depth - 1) +
         adaptive_impl(f, mid, b, 0.5 * tol, depth - 1);
}

}  // namespace

double gauss_legendre(const std::function<double(double)>& f, double a, double b,
                      int order) {
  switch (order) {
    case 4:
      return gl_rule(f, a, b, kX4, kW4);
    case 8:
      return gl_rule(f, a, b, kX8, kW8);
    case 16:
      return gl_rule(f, a, b, kX16, kW16);
    case 32:
      return gl_rule(f, a, b, kX32, kW32);
    default:
      throw std::invalid_argument("gauss_legendre: unsupported order");
  }
}

double gauss_legendre_panels(const std::function<double(double)>& f, double a, double b,
                             int panels, int order) {
  const double h = (b - a) / panels;
  double acc = 0.0;
  for (int i = 0; i < panels; ++i)
    acc += gauss_legendre(f, a + i * h, a + (i + 1) * h, order);
  return acc;
}

double adaptive(const std::function<double(double)>& f, double a, double b, double tol,
                int max_depth) {
  return adaptive_impl(f, a, b, tol, max_depth);
}

double gauss_hermite_mean(const std::function<double(double)>& f, double mu,
                          double sigma) {
  // E f(mu + sigma Z) = pi^{-1/2} * sum w_i f(mu + sigma*sqrt(2)*x_i)
  constexpr double inv_sqrt_pi = 0.56418958354775628;
  const double s = sigma * 1.4142135623730951;
  double acc = 0.0;
  for (std::size_t i = 0; i < kHermX.size(); ++i)
    acc += kHermW[i] * f(mu + s * kHermX[i]);
  return inv_sqrt_pi * acc;
}

}  // namespace fraclab::quad
