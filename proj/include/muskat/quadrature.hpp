#pragma once

#include <algorithm>
#include <array>
#include <functional>
#include <vector>

#include "muskat/profiles.hpp"
#include "muskat/spectral.hpp"

namespace muskat {

// --- principal value on the periodic grid ---------------------------------------
// Alternating-point trapezoid: odd offsets from the singular node, weight 2*dalpha.
// Spectrally accurate for analytic periodic integrands with a simple pole.
enum class PvKernel {
  LineCauchy,  // 1 / (alpha - beta)
  CotHalf,     // cot((alpha - beta)/2) / (2 pi)  -- periodic Hilbert kernel
};

cplx pv_integral(const std::vector<cplx>& g, int singular_index, PvKernel kernel);

// --- Gauss-Legendre panels --------------------------------------------------------
struct GaussLegendre8 {
  static const std::array<double, 8>& nodes();    // on (-1, 1)
  static const std::array<double, 8>& weights();
};

template <typename F>
auto gl_panel(double a, double b, F&& f) -> decltype(f(0.0)) {
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  decltype(f(0.0)) acc{};
  for (int q = 0; q < 8; ++q) acc += GaussLegendre8::weights()[q] * f(mid + half * GaussLegendre8::nodes()[q]);
  return acc * half;
}

// Uniform composite panels.
template <typename F>
auto gl_integrate(double a, double b, int panels, F&& f) -> decltype(f(0.0)) {
  decltype(f(0.0)) acc{};
  const double w = (b - a) / panels;
  for (int p = 0; p < panels; ++p) acc += gl_panel(a + p * w, a + (p + 1) * w, f);
  return acc;
}

// Panels graded geometrically away from `center` with initial width `scale`;
// meant for kernels peaked at width ~scale around the center.
template <typename F>
auto gl_integrate_graded(double a, double b, double center, double scale, F&& f,
                         double max_width = 0.0) -> decltype(f(0.0)) {
  decltype(f(0.0)) acc{};
  // panels double in width moving away from the center, capped so smooth far-field
  // structure stays resolved; each contributes +int over itself
  double cap = std::max((b - a) / 8.0, scale);
  if (max_width > 0.0) cap = std::max(std::min(cap, max_width), scale);
  auto sweep = [&](double from, double to) {  // from is the near end (closest to center)
    if (from == to) return;
    const double dir = to > from ? 1.0 : -1.0;
    double lo = from, width = scale;
    while (dir * (to - lo) > 1e-300) {
      double hi = lo + dir * width;
      if (dir * (hi - to) > 0.0) hi = to;
      acc += dir > 0 ? gl_panel(lo, hi, f) : gl_panel(hi, lo, f);
      lo = hi;
      width = std::min(width * 2.0, cap);
    }
  };
  if (center <= a)
    sweep(a, b);
  else if (center >= b)
    sweep(b, a);
  else {
    sweep(center, a);
    sweep(center, b);
  }
  return acc;
}

// --- regularized kernels ------------------------------------------------------------
inline double reg_kernel_smooth(double alpha, double beta, double eps) {
  const double u = alpha - beta;
  return 1.0 / (u * u + eps * eps);
}

inline double reg_kernel_transport(double alpha, double beta, double eps) {
  const double u = alpha - beta;
  const double d = u * u + eps * eps;
  return u * eps / (d * d);
}

// --- epsilon boundary corrections b_{1,j}, b_{2,j} ----------------------------------
// flavor 1: (2/pi) int_0^{2a} ((a^j - b^j)/j!) (a-b) eps / ((a-b)^2+eps^2)^2 db - a^{j-1}/(j-1)!
// flavor 2: int_0^{2a} ((a^j - b^j)/j!) / ((a-b)^2+eps^2) db - p.v. of the eps = 0 form.
// j = 0 is identically zero for both flavors.
double b_correction(int j, int flavor, double alpha, double eps);

// closed form of p.v. int_0^{2a} (a^j - b^j)/(j! (a-b)^2) db (symmetric window)
double pv_monomial_integral(int j, double alpha);

// --- weighted antiderivatives D^{-i} -------------------------------------------------
struct AntiderivativeStack {
  int depth = 1;
  double tau = 0.0;
  double gamma = 0.0;
  double t = 0.0;
  const ProfileSet* profiles = nullptr;

  cplx weight(double s) const {
    const double cp = profiles ? profiles->c_prime(s + tau) : 0.0;
    return cplx(1.0, cp * gamma * t);
  }
};

// D^{-1} h(alpha) = int_{-tau}^{alpha} (1 + i c'(s+tau) gamma t) h(s) ds for alpha > -tau,
// 0 otherwise; D^{-depth} is the iterated composition. Cumulative cubic-cell quadrature,
// exact partial handling of the support boundary cell.
std::vector<cplx> d_minus(const std::vector<cplx>& h, const Grid& grid, const AntiderivativeStack& stack);

// single application (depth 1), support check on input
std::vector<cplx> d_minus_once(const std::vector<cplx>& h, const Grid& grid, const AntiderivativeStack& stack,
                               bool check_support);

}  // namespace muskat
