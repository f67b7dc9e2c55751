#pragma once

#include <cmath>
#include <complex>

#include "muskat/errors.hpp"
#include "muskat/jet.hpp"

namespace muskat {

// Muskat kernel K(x) = sin(x1) / (cosh(x2) - cos(x1)).
// The denominator is computed as 2 sinh^2(x2/2) + 2 sin^2(x1/2), which is exact and
// cancellation-free near the diagonal.

inline double kernel_denom(double x1, double x2) {
  const double sh = std::sinh(0.5 * x2);
  const double sn = std::sin(0.5 * x1);
  return 2.0 * sh * sh + 2.0 * sn * sn;
}

inline std::complex<double> kernel_denom(std::complex<double> x1, std::complex<double> x2) {
  const std::complex<double> sh = std::sinh(0.5 * x2);
  const std::complex<double> sn = std::sin(0.5 * x1);
  return 2.0 * sh * sh + 2.0 * sn * sn;
}

inline constexpr double kDenomFloor = 1e-300;

double eval_kernel(double x1, double x2, double denom_floor = kDenomFloor);

inline std::complex<double> eval_kernel_c(std::complex<double> x1, std::complex<double> x2) {
  const std::complex<double> d = kernel_denom(x1, x2);
  if (std::abs(d) < kDenomFloor) throw NumericalError("kernel denominator degenerate at complex node");
  return std::sin(x1) / d;
}

// Gradient of K, used for d/dbeta of kernel compositions.
//   K1 = [cos(x1) * D - sin^2(x1)] / D^2,  K2 = -sin(x1) sinh(x2) / D^2.
template <typename T>
inline void kernel_grad(T x1, T x2, T& k1, T& k2) {
  const T d = kernel_denom(x1, x2);
  const T s = std::sin(x1);
  k1 = (std::cos(x1) * d - s * s) / (d * d);
  k2 = -s * std::sinh(x2) / (d * d);
}

// K on truncated-Taylor arguments; all singular structure is carried by the jets.
inline Jet kernel_jet(const Jet& x1, const Jet& x2) {
  Jet s1, c1;
  sincos_jet(x1, s1, c1);
  Jet half1 = x1 * std::complex<double>(0.5), half2 = x2 * std::complex<double>(0.5);
  Jet shh, chh;
  sinhcosh_jet(half2, shh, chh);
  Jet snh, cnh;
  sincos_jet(half1, snh, cnh);
  Jet denom = (shh * shh + snh * snh) * std::complex<double>(2.0);
  return s1 / denom;
}

// Diagonal limit lim_{b->a} dK(u(a)-u(b))/db * (a-b)^2 = 2 u1'(a) / (u1'(a)^2 + u2'(a)^2),
// valid for analytic two-component arguments.
template <typename T>
inline T kernel_diag_limit(T du1, T du2) {
  const T denom = du1 * du1 + du2 * du2;
  if (std::abs(denom) < 1e-14) throw NumericalError("degenerate tangent in kernel diagonal limit");
  return 2.0 * du1 / denom;
}

}  // namespace muskat
