#include "muskat/evolution.hpp"

#include <algorithm>
#include <cmath>

#include "muskat/kernel.hpp"
#include "muskat/util.hpp"

namespace muskat {

MuskatRhs muskat_rhs(const PeriodicInterface& curve) {
  const int n = curve.n;
  const Grid grid = curve.grid();
  CurveSpectra cs(curve);
  const std::vector<double> d1 = cs.d_f1(1), d2 = cs.d_f2(1);
  const std::vector<double> dd1 = cs.d_f1(2), dd2 = cs.d_f2(2);

  std::vector<double> l2(n);
  for (int i = 0; i < n; ++i) {
    const double denom = d1[i] * d1[i] + d2[i] * d2[i];
    if (denom < 1e-14) throw NumericalError("muskat_rhs: degenerate tangent (arc-chord violation)");
    l2[i] = 2.0 * d1[i] / denom;
  }

  auto d1_ext = [&](long idx) { return d1[((idx % n) + n) % n]; };
  auto d2_ext = [&](long idx) { return d2[((idx % n) + n) % n]; };

  MuskatRhs out;
  out.df1.assign(n, 0.0);
  out.df2.assign(n, 0.0);
  const double scale = curve.rho_bar * kKernelScale * grid.dalpha;

  parallel_for(0, static_cast<std::size_t>(n), [&](std::size_t iu) {
    const int i = static_cast<int>(iu);
    double acc1 = l2[i] * dd1[i];  // diagonal limit value of the integrand
    double acc2 = l2[i] * dd2[i];
    for (int o = 1; o < n; ++o) {
      const long j = long(i) - o;
      const double x1 = curve.f1[i] - curve.f1_ext(j);
      const double x2 = curve.f2[i] - curve.f2_ext(j);
      const double denom = kernel_denom(x1, x2);
      if (denom < 1e-30) throw NumericalError("muskat_rhs: arc-chord violation in kernel");
      const double K = std::sin(x1) / denom;
      acc1 += K * (d1[i] - d1_ext(j));
      acc2 += K * (d2[i] - d2_ext(j));
    }
    out.df1[i] = scale * acc1;
    out.df2[i] = scale * acc2;
  });
  return out;
}

double StepControl::effective_dt(const PeriodicInterface& curve) const {
  if (dt > 0.0) return dt;
  const std::vector<double> sigma = rt_coefficient(curve);
  double smax = 0.0;
  for (double s : sigma) smax = std::max(smax, std::abs(s));
  return cfl_safety * curve.grid().dalpha / std::max(1.0, smax);
}

namespace {

void apply_dealias(PeriodicInterface& c) {
  CurveSpectra cs(c);
  dealias_two_thirds(cs.p1);
  dealias_two_thirds(cs.s2);
  std::vector<double> p = real_samples_of(cs.p1);
  std::vector<double> q = real_samples_of(cs.s2);
  for (int i = 0; i < c.n; ++i) {
    c.f1[i] = c.alpha[i] + p[i];
    c.f2[i] = q[i];
  }
}

void check_blowup(const PeriodicInterface& c) {
  for (int i = 0; i < c.n; ++i)
    if (std::abs(c.f1[i] - c.alpha[i]) > 1e6 || std::abs(c.f2[i]) > 1e6)
      throw NumericalError("step: field magnitude exceeded 1e6 (blow-up)");
}

}  // namespace

void step(EvolutionState& state, const StepControl& ctl, double dt) {
  const double sgn = ctl.direction == TimeDirection::Forward ? 1.0 : -1.0;
  const int n = state.curve.n;
  PeriodicInterface& c = state.curve;

  auto eval = [&](const std::vector<double>& y1, const std::vector<double>& y2) {
    PeriodicInterface tmp = c;
    tmp.f1 = y1;
    tmp.f2 = y2;
    MuskatRhs r = muskat_rhs(tmp);
    if (sgn < 0)
      for (int i = 0; i < n; ++i) {
        r.df1[i] = -r.df1[i];
        r.df2[i] = -r.df2[i];
      }
    return r;
  };

  const MuskatRhs k1 = eval(c.f1, c.f2);
  std::vector<double> y1(n), y2(n);
  auto axpy = [&](const MuskatRhs& k, double h) {
    for (int i = 0; i < n; ++i) {
      y1[i] = c.f1[i] + h * k.df1[i];
      y2[i] = c.f2[i] + h * k.df2[i];
    }
  };
  axpy(k1, dt / 2.0);
  const MuskatRhs k2 = eval(y1, y2);
  axpy(k2, dt / 2.0);
  const MuskatRhs k3 = eval(y1, y2);
  axpy(k3, dt);
  const MuskatRhs k4 = eval(y1, y2);

  for (int i = 0; i < n; ++i) {
    c.f1[i] += dt / 6.0 * (k1.df1[i] + 2.0 * k2.df1[i] + 2.0 * k3.df1[i] + k4.df1[i]);
    c.f2[i] += dt / 6.0 * (k1.df2[i] + 2.0 * k2.df2[i] + 2.0 * k3.df2[i] + k4.df2[i]);
  }
  if (ctl.dealias) apply_dealias(c);
  check_blowup(c);
  state.t += sgn * dt;
  state.step_count += 1;
}

EnergyNorms energy_norms(const PeriodicInterface& curve, int k_max) {
  if (k_max > curve.n / 4) throw ValidationError("energy_norms: k_max <= n/4 required");
  CurveSpectra cs(curve);
  EnergyNorms out;
  for (int k = 0; k <= k_max; ++k) {
    out.f1.push_back(sobolev_norm(cs.p1, k));
    out.f2.push_back(sobolev_norm(cs.s2, k));
  }
  return out;
}

double spectral_tail_norm(const PeriodicInterface& curve) {
  CurveSpectra cs(curve);
  const int n = curve.n;
  double acc = 0.0;
  for (int j = 0; j < n; ++j) {
    const int k = cs.p1.mode_of(j);
    if (std::abs(k) > n / 4) acc += std::norm(cs.p1.c[j]) + std::norm(cs.s2.c[j]);
  }
  return std::sqrt(kTwoPi * acc);
}

PeriodicInterface make_preset(const std::string& name, int n, double rho_bar, double amplitude) {
  Grid grid(n);
  std::vector<double> f1(n), f2(n);
  if (name == "stable") {
    for (int i = 0; i < n; ++i) {
      const double a = grid.alpha(i);
      f1[i] = a;
      f2[i] = amplitude * std::cos(a);
    }
    return PeriodicInterface(std::move(f1), std::move(f2), rho_bar);
  }
  if (name == "backward") {
    // heavy fluid on top: rho_bar < 0 graph, stable when run backward in time
    for (int i = 0; i < n; ++i) {
      const double a = grid.alpha(i);
      f1[i] = a;
      f2[i] = amplitude * (std::cos(a) + 0.2 * std::cos(3.0 * a));
    }
    return PeriodicInterface(std::move(f1), std::move(f2), -std::abs(rho_bar));
  }
  if (name == "turnover") {
    // f1' = 1 - 0.5 cos a + 1.5 sin a - 0.5 cos 2a vanishes exactly at 0 and -pi/2,
    // with f1''(0) = 1.5 and f1''(-pi/2) = -0.5; overhang on (-pi/2, 0).
    for (int i = 0; i < n; ++i) {
      const double a = grid.alpha(i);
      f1[i] = a - 0.5 * std::sin(a) - 1.5 * std::cos(a) - 0.25 * std::sin(2.0 * a) + 1.5;
      f2[i] = amplitude * (std::cos(a) + 0.3 * std::sin(2.0 * a));
    }
    return PeriodicInterface(std::move(f1), std::move(f2), rho_bar);
  }
  throw ValidationError("make_preset: unknown preset '" + name + "'");
}

}  // namespace muskat
