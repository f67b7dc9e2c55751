#pragma once

#include <string>
#include <vector>

#include "muskat/spectral.hpp"

namespace muskat {

struct CheckReport {
  std::string name;
  double measured = 0.0;
  double bound = 0.0;
  bool pass = false;
  std::string params;
};

// Cell-exact integration of the eps-regularized kernels against piecewise-linear data
// on [0, pi]; robust for eps well below the grid spacing.
struct EpsKernelTable {
  int m = 0;          // node count - 1
  double h = 0.0;     // spacing pi/m
  double eps = 0.0;
  std::vector<double> w_smooth;     // hat-function weights for 1/(u^2+eps^2), index d+m
  std::vector<double> w_transport;  // same for u eps/(u^2+eps^2)^2
  std::vector<double> corr0_smooth, corr0_transport;  // boundary-hat clipping at 0
  std::vector<double> corrm_smooth, corrm_transport;  // and at pi

  EpsKernelTable(int m_, double eps_);
  // int_0^pi k(alpha_i - beta) g(beta) dbeta for all i (piecewise-linear g)
  std::vector<double> apply_smooth(const std::vector<double>& g) const;
  std::vector<double> apply_transport(const std::vector<double>& g) const;
  // int_0^pi k(alpha_i - beta) dbeta, closed form
  double mass_smooth(double alpha) const;
  double mass_transport(double alpha) const;
};

// Garding-type energy inequality suite: (ene1)/(ene2) with random localized triples
// (f, g, c), the pointwise factor-4 kernel inequality, and the eps-uniform boundedness
// suprema of the weight commutators.
std::vector<CheckReport> run_garding_suite(int seed_count, int n, const std::vector<double>& eps_list,
                                           unsigned long seed);

// Hilbert-transform identities: involution, isometry, the Poisson-kernel line identity,
// its derivative form, and the exact antiderivative cancellation.
std::vector<CheckReport> run_identity_suite(int n, const std::vector<double>& eps_list);

// Dyadic-eps convergence rates of the regularized boundary corrections.
std::vector<CheckReport> run_limit_suite(const std::vector<double>& eps_list);

// Kernel-derivative diagonal limits against the closed form on sampled analytic curves.
std::vector<CheckReport> run_kernel_limit_suite(int curve_count, int n, unsigned long seed);

// Everything, merged deterministically by name order.
std::vector<CheckReport> run_all_checks(int n, unsigned long seed);

std::string render_check_json(const std::vector<CheckReport>& reports);
int count_failures(const std::vector<CheckReport>& reports);

}  // namespace muskat
