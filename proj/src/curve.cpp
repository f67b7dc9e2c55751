#include "muskat/curve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "muskat/kernel.hpp"

namespace muskat {

PeriodicInterface::PeriodicInterface(std::vector<double> f1_samples, std::vector<double> f2_samples,
                                     double rho_bar_)
    : n(static_cast<int>(f1_samples.size())), rho_bar(rho_bar_), f1(std::move(f1_samples)), f2(std::move(f2_samples)) {
  Grid g(n);
  alpha.resize(n);
  for (int i = 0; i < n; ++i) alpha[i] = g.alpha(i);
  validate();
}

void PeriodicInterface::validate() const {
  if (n < 32 || n % 2 != 0) throw ValidationError("PeriodicInterface: n must be even and >= 32");
  if (static_cast<int>(f1.size()) != n || static_cast<int>(f2.size()) != n)
    throw ValidationError("PeriodicInterface: sample arrays must have length n");
  for (int i = 0; i < n; ++i)
    if (!std::isfinite(f1[i]) || !std::isfinite(f2[i]))
      throw ValidationError("PeriodicInterface: non-finite sample");
}

double PeriodicInterface::f1_ext(long index) const {
  long j = ((index % n) + n) % n;
  long w = (index - j) / n;
  return f1[j] + kTwoPi * double(w);
}

CurveSpectra::CurveSpectra(const PeriodicInterface& c) {
  std::vector<double> p(c.n);
  for (int i = 0; i < c.n; ++i) p[i] = c.f1[i] - c.alpha[i];
  p1 = spectrum_of(p);
  s2 = spectrum_of(c.f2);
}

std::vector<double> CurveSpectra::d_f1(int order) const {
  std::vector<double> out = real_samples_of(derivative(p1, order));
  if (order == 1)
    for (double& v : out) v += 1.0;
  return out;
}

std::vector<double> CurveSpectra::d_f2(int order) const { return real_samples_of(derivative(s2, order)); }

double eval_kernel(double x1, double x2, double denom_floor) {
  const double d = kernel_denom(x1, x2);
  if (d < denom_floor) throw NumericalError("eval_kernel: degenerate argument, cosh(x2) - cos(x1) ~ 0");
  return std::sin(x1) / d;
}

double arc_chord_sup(const PeriodicInterface& curve, double denom_floor) {
  const int n = curve.n;
  const double da = curve.grid().dalpha;
  double sup = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int o = 1; o < n; ++o) {
      // beta wrapped to (-pi, pi]; the kernel denominator is invariant under the
      // matching 2pi winding of f1, so the raw extension difference can be used.
      double beta = std::remainder(o * da, kTwoPi);
      if (beta <= -kPi) beta = kPi;
      const double d1 = curve.f1[i] - curve.f1_ext(long(i) - o);
      const double d2 = curve.f2[i] - curve.f2_ext(long(i) - o);
      const double denom = kernel_denom(d1, d2);
      if (denom <= denom_floor) return std::numeric_limits<double>::infinity();
      sup = std::max(sup, beta * beta / denom);
    }
  }
  return sup;
}

std::vector<double> rt_coefficient(const PeriodicInterface& curve) {
  CurveSpectra cs(curve);
  std::vector<double> d1 = cs.d_f1(1), d2 = cs.d_f2(1);
  std::vector<double> out(curve.n);
  for (int i = 0; i < curve.n; ++i) {
    const double denom = d1[i] * d1[i] + d2[i] * d2[i];
    if (denom < 1e-14) throw NumericalError("rt_coefficient: degenerate tangent");
    out[i] = curve.rho_bar * d1[i] / denom;
  }
  return out;
}

std::vector<double> l2_coefficient(const PeriodicInterface& curve) {
  CurveSpectra cs(curve);
  std::vector<double> d1 = cs.d_f1(1), d2 = cs.d_f2(1);
  std::vector<double> out(curve.n);
  for (int i = 0; i < curve.n; ++i) {
    const double denom = d1[i] * d1[i] + d2[i] * d2[i];
    if (denom < 1e-14) throw NumericalError("l2_coefficient: degenerate tangent");
    out[i] = 2.0 * d1[i] / denom;
  }
  return out;
}

TurnoverSet detect_turnovers(const PeriodicInterface& curve, double root_tol) {
  CurveSpectra cs(curve);
  Spectrum dp1 = derivative(cs.p1, 1);
  Spectrum ddp1 = derivative(cs.p1, 2);
  auto g = [&](double a) { return 1.0 + eval_series_real(dp1, a); };

  const Grid grid = curve.grid();
  TurnoverSet set;
  std::vector<double> gv(curve.n);
  for (int i = 0; i < curve.n; ++i) gv[i] = g(curve.alpha[i]);

  for (int i = 0; i < curve.n; ++i) {
    const double a0 = curve.alpha[i];
    const double a1 = a0 + grid.dalpha;
    const double g0 = gv[i];
    const double g1 = gv[(i + 1) % curve.n];
    bool bracket = (g0 == 0.0) || (g0 * g1 < 0.0);
    if (!bracket) continue;
    double lo = a0, hi = a1, flo = g0;
    if (g0 == 0.0) {
      set.roots.push_back({a0, eval_series_real(ddp1, a0), 0});
      continue;
    }
    for (int it = 0; it < 200 && hi - lo > root_tol * 0.25; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double fm = g(mid);
      if (fm == 0.0) {
        lo = hi = mid;
        break;
      }
      if (flo * fm < 0.0)
        hi = mid;
      else {
        lo = mid;
        flo = fm;
      }
    }
    double r = 0.5 * (lo + hi);
    // secant polish
    for (int it = 0; it < 8; ++it) {
      const double fr = g(r);
      const double dfr = eval_series_real(ddp1, r);
      if (std::abs(dfr) < 1e-13) break;
      const double step = fr / dfr;
      r -= step;
      if (std::abs(step) < root_tol * 1e-3) break;
    }
    if (r < -kPi) r += kTwoPi;
    if (r >= kPi) r -= kTwoPi;
    set.roots.push_back({r, eval_series_real(ddp1, r), 0});
  }

  std::sort(set.roots.begin(), set.roots.end(),
            [](const TurnoverPoint& a, const TurnoverPoint& b) { return a.alpha < b.alpha; });
  // de-duplicate roots closer than half a grid cell (wrap-aware)
  std::vector<TurnoverPoint> unique_roots;
  for (const auto& r : set.roots) {
    if (!unique_roots.empty() && r.alpha - unique_roots.back().alpha < grid.dalpha / 2.0) continue;
    unique_roots.push_back(r);
  }
  if (unique_roots.size() >= 2) {
    const double wrap_gap = (unique_roots.front().alpha + kTwoPi) - unique_roots.back().alpha;
    if (wrap_gap < grid.dalpha / 2.0) unique_roots.pop_back();
  }
  for (auto& r : unique_roots) r.curvature_sign = r.d2f1 > 0 ? 1 : (r.d2f1 < 0 ? -1 : 0);
  set.roots = std::move(unique_roots);

  std::vector<double> sigma = rt_coefficient(curve);
  const double smin = *std::min_element(sigma.begin(), sigma.end());
  const double smax = *std::max_element(sigma.begin(), sigma.end());
  const double tol = 1e-12;
  if (smin >= -tol)
    set.regime = Regime::Stable;
  else if (smax <= tol)
    set.regime = Regime::BackwardStable;
  else
    set.regime = Regime::Turnover;
  return set;
}

ChangeVariableResult change_variable(const Grid& grid, const TurnoverFrame& frame) {
  ChangeVariableResult out;
  out.frame = frame;
  out.x.resize(grid.n);
  out.dx.resize(grid.n);
  for (int i = 0; i < grid.n; ++i) {
    const double a = grid.alpha(i);
    out.x[i] = frame.x(a);
    out.dx[i] = frame.dx(a);
    if (out.dx[i] <= 0.0)
      throw NumericalError("change_variable: dx/dalpha <= 0, map is not a diffeomorphism");
  }
  return out;
}

PeriodicInterface apply_frame(const PeriodicInterface& curve, const TurnoverFrame& frame) {
  CurveSpectra cs(curve);
  const Grid grid = curve.grid();
  change_variable(grid, frame);  // diffeomorphism guard
  std::vector<double> g1(curve.n), g2(curve.n);
  for (int i = 0; i < curve.n; ++i) {
    const double xi = frame.x(grid.alpha(i));
    g1[i] = cs.f1(cplx(xi, 0.0)).real();
    g2[i] = cs.f2(cplx(xi, 0.0)).real();
  }
  return PeriodicInterface(std::move(g1), std::move(g2), curve.rho_bar);
}

SplitPlusResult split_plus(const PeriodicInterface& curve, const ProfileSet& profiles, int m) {
  if (m < 0 || m > curve.n / 4) throw ValidationError("split_plus: require 0 <= m <= n/4");
  CurveSpectra cs(curve);
  SplitPlusResult out;
  out.m = m;
  out.taylor1.resize(m + 1);
  out.taylor2.resize(m + 1);
  const int zi = curve.grid().zero_index();
  for (int i = 0; i <= m; ++i) {
    // d^i f~ at alpha = 0 (a grid node); f1 carries the +alpha slope at order 1
    std::vector<double> d1 = cs.d_f1(i), d2 = cs.d_f2(i);
    out.taylor1[i] = i == 0 ? curve.f1[zi] : d1[zi];
    out.taylor2[i] = i == 0 ? curve.f2[zi] : d2[zi];
    double fact = 1.0;
    for (int q = 2; q <= i; ++q) fact *= q;
    if (std::abs(out.taylor1[i]) / fact > 1e12 || std::abs(out.taylor2[i]) / fact > 1e12)
      throw NumericalError("split_plus: Taylor coefficient overflow, data not smooth enough");
  }
  out.fplus1.resize(curve.n);
  out.fplus2.resize(curve.n);
  out.fl1.resize(curve.n);
  out.fl2.resize(curve.n);
  for (int i = 0; i < curve.n; ++i) {
    const double a = curve.alpha[i];
    double p1 = 0.0, p2 = 0.0, pow_a = 1.0, fact = 1.0;
    for (int q = 0; q <= m; ++q) {
      if (q > 0) {
        pow_a *= a;
        fact *= q;
      }
      p1 += out.taylor1[q] * pow_a / fact;
      p2 += out.taylor2[q] * pow_a / fact;
    }
    const double cut = a >= 0.0 ? profiles.lambda0(a) : 0.0;
    out.fplus1[i] = (curve.f1[i] - p1) * cut;
    out.fplus2[i] = (curve.f2[i] - p2) * cut;
    out.fl1[i] = curve.f1[i] - out.fplus1[i];
    out.fl2[i] = curve.f2[i] - out.fplus2[i];
  }
  return out;
}

}  // namespace muskat
