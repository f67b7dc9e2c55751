#pragma once

#include <string>
#include <vector>

#include "muskat/curve.hpp"

namespace muskat {

// d f_i/dt (alpha) = (rho_bar / 2pi) * int K(f(a)-f(a-b)) (f_i'(a) - f_i'(a-b)) db.
// The integrand is bounded at b = 0; its analytic diagonal limit l2(a) f_i''(a) is
// inserted there. Time is normalized so the flat-state linearization decays mode k
// at rate rho_bar |k|.
struct MuskatRhs {
  std::vector<double> df1;
  std::vector<double> df2;
};

MuskatRhs muskat_rhs(const PeriodicInterface& curve);

constexpr double kKernelScale = 1.0 / kTwoPi;  // per unit rho_bar

enum class TimeDirection { Forward, Backward };

struct StepControl {
  double dt = 0.0;          // 0 => derive from CFL
  double t_end = 0.1;
  double cfl_safety = 0.25;
  TimeDirection direction = TimeDirection::Forward;
  bool dealias = true;

  double effective_dt(const PeriodicInterface& curve) const;
};

struct EvolutionState {
  double t = 0.0;
  long step_count = 0;
  PeriodicInterface curve;
};

// one explicit RK4 step; throws NumericalError on blow-up
void step(EvolutionState& state, const StepControl& ctl, double dt);

struct EnergyNorms {
  std::vector<double> f1;  // ||f1 - alpha||_{H^k}, k = 0..k_max
  std::vector<double> f2;  // ||f2||_{H^k}
};

EnergyNorms energy_norms(const PeriodicInterface& curve, int k_max);

// Fourier tail norm of (f1 - alpha, f2) over modes |k| > n/4.
double spectral_tail_norm(const PeriodicInterface& curve);

// Built-in initial data. "stable": near-flat graph; "backward": heavy-on-top graph
// (rho_bar < 0) meant to be run backward in time; "turnover": two vertical tangents
// pinned at alpha = 0 and -pi/2.
PeriodicInterface make_preset(const std::string& name, int n, double rho_bar, double amplitude);

}  // namespace muskat
