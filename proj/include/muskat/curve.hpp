#pragma once

#include <optional>
#include <vector>

#include "muskat/profiles.hpp"
#include "muskat/spectral.hpp"

namespace muskat {

// Sampled interface (f1, f2) on the uniform grid; f1 - alpha and f2 are 2pi-periodic.
struct PeriodicInterface {
  int n = 0;
  double rho_bar = 1.0;
  std::vector<double> alpha;
  std::vector<double> f1;
  std::vector<double> f2;

  PeriodicInterface() = default;
  PeriodicInterface(std::vector<double> f1_samples, std::vector<double> f2_samples, double rho_bar_);

  void validate() const;
  Grid grid() const { return Grid(n); }

  // Periodic extension: f1(alpha + 2pi w) = f1(alpha) + 2pi w.
  double f1_ext(long index) const;
  double f2_ext(long index) const { return f2[((index % n) + n) % n]; }
};

// Spectral view of a curve: p1 = spectrum of f1 - alpha, s2 = spectrum of f2.
struct CurveSpectra {
  Spectrum p1;
  Spectrum s2;
  explicit CurveSpectra(const PeriodicInterface& c);

  cplx f1(cplx z) const { return z + eval_series(p1, z); }
  cplx f2(cplx z) const { return eval_series(s2, z); }
  // i-th derivative samples on the grid (i >= 1 loses the +alpha slope for f1 unless i == 1)
  std::vector<double> d_f1(int order) const;
  std::vector<double> d_f2(int order) const;
};

enum class Regime { Stable, BackwardStable, Turnover };

struct TurnoverPoint {
  double alpha = 0.0;
  double d2f1 = 0.0;  // curvature of f1 at the root
  int curvature_sign = 0;
};

struct TurnoverSet {
  std::vector<TurnoverPoint> roots;
  Regime regime = Regime::Stable;
  int count() const { return static_cast<int>(roots.size()); }
};

// x(alpha, t) = alpha - sin(alpha) (Z2 + pi/2 - Z1) + Z1 pins the turnovers to 0 and -pi/2.
struct TurnoverFrame {
  double Z1 = 0.0;
  double Z2 = -kPi / 2.0;
  double dZ1dt = 0.0;
  double dZ2dt = 0.0;

  double sin_coeff() const { return Z2 + kPi / 2.0 - Z1; }
  template <typename T>
  T x(T a) const {
    return a - std::sin(a) * sin_coeff() + Z1;
  }
  template <typename T>
  T dx(T a) const {
    return T(1.0) - std::cos(a) * sin_coeff();
  }
  template <typename T>
  T ddx(T a) const {
    return std::sin(a) * sin_coeff();
  }
  // time derivative of x at fixed alpha
  template <typename T>
  T xt(T a) const {
    return -std::sin(a) * (dZ2dt - dZ1dt) + dZ1dt;
  }
  // transport coefficient w = xt / dx
  template <typename T>
  T w(T a) const {
    return xt(a) / dx(a);
  }
};

// --- operations -------------------------------------------------------------------

// Arc-chord functional sup over grid pairs of beta^2 / (cosh df2 - cos df1).
// Returns +infinity when a denominator collapses away from the diagonal.
double arc_chord_sup(const PeriodicInterface& curve, double denom_floor = 1e-300);

// Rayleigh-Taylor coefficient sigma = rho_bar f1' / (f1'^2 + f2'^2) per node.
std::vector<double> rt_coefficient(const PeriodicInterface& curve);

// Closed form of the kernel-derivative diagonal limit: 2 f1' / (f1'^2 + f2'^2).
std::vector<double> l2_coefficient(const PeriodicInterface& curve);

TurnoverSet detect_turnovers(const PeriodicInterface& curve, double root_tol = 1e-10);

struct ChangeVariableResult {
  std::vector<double> x;        // x(alpha_i)
  std::vector<double> dx;       // dx/dalpha at nodes
  TurnoverFrame frame;
};

ChangeVariableResult change_variable(const Grid& grid, const TurnoverFrame& frame);

// Samples f(x(alpha_i)) producing the turnover-pinned curve f~.
PeriodicInterface apply_frame(const PeriodicInterface& curve, const TurnoverFrame& frame);

struct SplitPlusResult {
  int m = 0;
  std::vector<double> fplus1, fplus2;  // f+ samples; supported in [0, 2 delta]
  std::vector<double> fl1, fl2;        // f^L = f~ - f+
  std::vector<double> taylor1, taylor2;  // d^i f~(0) for i = 0..m (plain derivatives, not /i!)
};

SplitPlusResult split_plus(const PeriodicInterface& curve, const ProfileSet& profiles, int m);

}  // namespace muskat
