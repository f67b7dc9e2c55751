#pragma once

#include <array>
#include <cmath>
#include <complex>

#include "muskat/errors.hpp"

namespace muskat {

// Truncated Taylor arithmetic in one differentiation variable. Jet::c[j] holds the j-th
// Taylor coefficient (derivative / j!), complex so the same code serves real nodes and
// complexified contours. Order is fixed per expression tree, capped at kJetMax.
inline constexpr int kJetMax = 6;

struct Jet {
  int m = 0;  // highest retained order
  std::array<std::complex<double>, kJetMax + 1> c{};

  Jet() = default;
  Jet(int order, std::complex<double> value) : m(order) { c[0] = value; }

  static Jet variable(int order, std::complex<double> value) {
    Jet j(order, value);
    if (order >= 1) j.c[1] = 1.0;
    return j;
  }
  static Jet constant(int order, std::complex<double> value) { return Jet(order, value); }

  std::complex<double> derivative(int k) const {
    double fact = 1.0;
    for (int i = 2; i <= k; ++i) fact *= i;
    return c[k] * fact;
  }
};

inline Jet operator+(const Jet& a, const Jet& b) {
  Jet r = a;
  for (int i = 0; i <= a.m; ++i) r.c[i] += b.c[i];
  return r;
}

inline Jet operator-(const Jet& a, const Jet& b) {
  Jet r = a;
  for (int i = 0; i <= a.m; ++i) r.c[i] -= b.c[i];
  return r;
}

inline Jet operator-(const Jet& a) {
  Jet r = a;
  for (int i = 0; i <= a.m; ++i) r.c[i] = -r.c[i];
  return r;
}

inline Jet operator*(const Jet& a, const Jet& b) {
  Jet r;
  r.m = a.m;
  for (int i = 0; i <= a.m; ++i) {
    std::complex<double> acc(0.0);
    for (int j = 0; j <= i; ++j) acc += a.c[j] * b.c[i - j];
    r.c[i] = acc;
  }
  return r;
}

inline Jet operator*(const Jet& a, std::complex<double> s) {
  Jet r = a;
  for (int i = 0; i <= a.m; ++i) r.c[i] *= s;
  return r;
}
inline Jet operator*(std::complex<double> s, const Jet& a) { return a * s; }

inline Jet operator/(const Jet& a, const Jet& b) {
  if (std::abs(b.c[0]) == 0.0) throw NumericalError("jet division by zero constant term");
  Jet r;
  r.m = a.m;
  for (int i = 0; i <= a.m; ++i) {
    std::complex<double> acc = a.c[i];
    for (int j = 1; j <= i; ++j) acc -= b.c[j] * r.c[i - j];
    r.c[i] = acc / b.c[0];
  }
  return r;
}

// sin/cos and sinh/cosh come in pairs from the ODE recurrences
// (sin f)' = f' cos f, (cos f)' = -f' sin f, etc., driven coefficientwise.
inline void sincos_jet(const Jet& f, Jet& s, Jet& cjet) {
  s.m = cjet.m = f.m;
  s.c.fill({});
  cjet.c.fill({});
  s.c[0] = std::sin(f.c[0]);
  cjet.c[0] = std::cos(f.c[0]);
  for (int i = 1; i <= f.m; ++i) {
    std::complex<double> sa(0.0), ca(0.0);
    for (int j = 1; j <= i; ++j) {
      const std::complex<double> jf = double(j) * f.c[j];
      sa += jf * cjet.c[i - j];
      ca += jf * s.c[i - j];
    }
    s.c[i] = sa / double(i);
    cjet.c[i] = -ca / double(i);
  }
}

inline void sinhcosh_jet(const Jet& f, Jet& sh, Jet& ch) {
  sh.m = ch.m = f.m;
  sh.c.fill({});
  ch.c.fill({});
  sh.c[0] = std::sinh(f.c[0]);
  ch.c[0] = std::cosh(f.c[0]);
  for (int i = 1; i <= f.m; ++i) {
    std::complex<double> sa(0.0), ca(0.0);
    for (int j = 1; j <= i; ++j) {
      const std::complex<double> jf = double(j) * f.c[j];
      sa += jf * ch.c[i - j];
      ca += jf * sh.c[i - j];
    }
    sh.c[i] = sa / double(i);
    ch.c[i] = ca / double(i);
  }
}

inline Jet sin(const Jet& f) {
  Jet s, c;
  sincos_jet(f, s, c);
  return s;
}
inline Jet cos(const Jet& f) {
  Jet s, c;
  sincos_jet(f, s, c);
  return c;
}

// outer(delta) = sum_l outer_coeffs[l] delta^l composed with a jet whose constant term is 0.
inline Jet jet_compose(const std::array<std::complex<double>, kJetMax + 1>& outer_coeffs, int order,
                       const Jet& inner_delta) {
  Jet r = Jet::constant(order, outer_coeffs[order]);
  for (int l = order - 1; l >= 0; --l) {
    r = r * inner_delta;
    r.c[0] += outer_coeffs[l];
  }
  return r;
}

// Series reversion: given phi with phi.c[0] = 0 and phi.c[1] != 0, returns psi with
// psi(phi(x)) = x to the retained order (psi.c[0] = 0).
inline Jet jet_reversion(const Jet& phi) {
  if (std::abs(phi.c[1]) == 0.0) throw NumericalError("jet_reversion: vanishing linear coefficient");
  Jet psi;
  psi.m = phi.m;
  psi.c[0] = 0.0;
  psi.c[1] = 1.0 / phi.c[1];
  for (int k = 2; k <= phi.m; ++k) {
    // impose [delta^k] psi(phi) = 0 using coefficients psi.c[1..k-1] already fixed
    Jet trunc = psi;
    trunc.c[k] = 0.0;
    Jet comp = Jet::constant(phi.m, 0.0);
    // evaluate trunc(phi) by Horner in phi
    for (int l = phi.m; l >= 1; --l) {
      comp = comp * phi;
      comp.c[0] += trunc.c[l];
    }
    comp = comp * phi;  // multiply once more: psi has no constant term
    // comp now equals sum_{l>=1} trunc.c[l] phi^l
    std::complex<double> resid = comp.c[k];
    std::complex<double> lead = phi.c[1];
    std::complex<double> lead_pow = lead;
    for (int p = 1; p < k; ++p) lead_pow *= lead;  // phi.c[1]^k
    psi.c[k] = -resid / lead_pow;
  }
  return psi;
}

// jet of f' given the jet of f (same truncation order; top coefficient set to 0)
inline Jet jet_derivative(const Jet& f) {
  Jet r;
  r.m = f.m;
  for (int i = 0; i < f.m; ++i) r.c[i] = f.c[i + 1] * double(i + 1);
  r.c[f.m] = 0.0;
  return r;
}

}  // namespace muskat
