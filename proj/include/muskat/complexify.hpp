#pragma once

#include <array>
#include <vector>

#include "muskat/curve.hpp"
#include "muskat/evolution.hpp"
#include "muskat/quadrature.hpp"

namespace muskat {

// --- transport functionals kappa(t), tau(t) -----------------------------------------

struct TransportState {
  double kappa = 0.0;
  double tau = 0.0;
  int kappa0_sign = 1;  // sign of kappa(0); tau stays 0 on the + branch

  double tau_prime() const { return kappa0_sign < 0 ? -kappa : 0.0; }
  void validate() const;
};

// kappa = (1/dx(0)) (dZ1/dt + kernel_scale * pv int K(f(Z1)-f(beta)) dbeta), evaluated in
// the pinned frame as pv int K(f~(0)-f~(b)) x'(b) db with the singular node at 0.
double kappa_eval(const PeriodicInterface& pinned, const TurnoverFrame& frame, double dZ1dt,
                  double kernel_scale = 1.0);

// tau = 0 when kappa(0) > 0; otherwise -int_0^t kappa via composite Simpson.
// kappa_samples are uniform on [0, t]; throws if the sampled kappa changes sign.
double tau_eval(const std::vector<double>& kappa_samples, double t);

// Turnover speeds from the root-motion identity dZ/dt = -d_alpha(rhs1)(Z) / f1''(Z).
struct TurnoverSpeeds {
  double Z1 = 0.0, Z2 = 0.0, dZ1dt = 0.0, dZ2dt = 0.0;
};
TurnoverSpeeds turnover_speeds(const PeriodicInterface& curve);

// --- complex contour nodes and Fourier continuation -----------------------------------

// alpha_gamma^t = (alpha + tau) + i c(alpha + tau) gamma t per grid node.
std::vector<cplx> complex_nodes(const ProfileSet& profiles, double tau, double gamma, double t, const Grid& grid);

struct StripEstimate {
  double width = 0.0;
  int k_min = 1;
  int k_max = 0;
  double residual = 0.0;    // RMS of the log-linear fit
  bool band_limited = false;  // decay steeper than the fit window can resolve
};

StripEstimate strip_estimate(const Spectrum& s, double noise_floor = 1e-13, int min_modes = 8);

// Truncated-series evaluation at complex nodes; refuses to extrapolate past the
// estimated analyticity strip (safety factor on max |Im z|).
std::vector<cplx> fourier_extend(const Spectrum& s, const std::vector<cplx>& nodes, double safety = 1.2);

// --- complexified solution samples h(alpha, gamma) -------------------------------------

struct ComplexExtensionField {
  int n_alpha = 0;
  int n_gamma = 0;
  double t = 0.0;
  double tau = 0.0;
  ProfileSet profiles;
  std::vector<double> gamma_nodes;
  std::vector<std::vector<cplx>> h;  // [gamma][alpha]

  ComplexExtensionField(int na, int ng, double t_, double tau_, ProfileSet p);
  Grid grid() const { return Grid(n_alpha); }
};

ComplexExtensionField extend_field(const Spectrum& data, const ProfileSet& profiles, double tau, double t,
                                   int n_alpha, int n_gamma);

// A(h) = [i c(a) t / (1 + i c'(a) gamma t)] d_alpha h - d_gamma h; alpha spectrally,
// gamma by fourth-order central differences on interior lines.
struct AResidual {
  int gamma_begin = 0, gamma_end = 0;
  std::vector<std::vector<cplx>> values;  // interior gamma lines only
  double max_abs = 0.0;
};

AResidual a_residual(const ComplexExtensionField& field);

// || A(D^-1 h) - D^-1(A h) ||_inf over interior nodes (Lemma-style commuting check, tau = 0).
double commute_check(const ComplexExtensionField& field);

// --- eps-regularized operators of the Picard construction ------------------------------

struct RegularizationParams {
  double eps = 1e-2;
  int k_order = 1;
  void validate() const;
};

enum class EpsOperator { M11, M12, M21 };

// h_line: complex samples on the alpha grid, supported in [0, pi/4];
// h0_derivs: h^{(j)}(0) for j = 0..k_order-1; L1/L2: coefficient arrays per node.
std::vector<cplx> eps_operator_apply(const std::vector<cplx>& h_line, const Grid& grid, EpsOperator which,
                                     const RegularizationParams& params, const ProfileSet& profiles,
                                     const std::vector<cplx>& L1, const std::vector<cplx>& L2, double kappa,
                                     const std::vector<cplx>& h0_derivs);

// --- the compact modified equation -------------------------------------------------------

// Bundles the turnover-pinned curve f~, its split of order m, the transport state and
// the contour profiles; every sampler the modified equation needs hangs off this.
class TurnoverContext {
 public:
  TurnoverContext(PeriodicInterface pinned_curve, TurnoverFrame frame, ProfileSet profiles, int m, double t,
                  TransportState transport);

  const PeriodicInterface& pinned() const { return pinned_; }
  const TurnoverFrame& frame() const { return frame_; }
  const ProfileSet& profiles() const { return profiles_; }
  const TransportState& transport() const { return transport_; }
  int m() const { return m_; }
  double t() const { return t_; }
  double scale() const { return scale_; }  // rho_bar / 2pi
  const Grid& grid() const { return grid_; }

  // contour node at base position b (b = alpha + tau)
  cplx node(double b, double gamma) const;
  cplx dnode(double b, double gamma) const;  // 1 + i c'(b) gamma t

  // f~_mu^{(order)} evaluated at a complex point (mu in {1,2})
  cplx f_deriv(int mu, int order, cplx z) const;
  // Taylor polynomial of order m at 0: its `order`-th derivative at z
  cplx taylor_deriv(int mu, int order, cplx z) const;
  // f+^{(order)}(z) = d^order[(f~ - P) lambda0 1_{>=0}] with cutoffs read at Re z
  cplx fplus_deriv(int mu, int order, cplx z) const;
  cplx fl_deriv(int mu, int order, cplx z) const { return f_deriv(mu, order, z) - fplus_deriv(mu, order, z); }

  double support_edge() const { return 2.0 * profiles_.delta(); }  // supp f+ upper bound

 private:
  PeriodicInterface pinned_;
  TurnoverFrame frame_;
  ProfileSet profiles_;
  int m_;
  double t_;
  double scale_;
  TransportState transport_;
  Grid grid_;
  std::vector<Spectrum> dp1_, ds2_;  // derivative spectra, order 0..m+2
  std::vector<double> taylor1_, taylor2_;

  friend struct CompactAssembler;
};

// G = d f~/dt on the grid by direct quadrature (trapezoid with the analytic diagonal
// limit inserted): the brute-force arrangement the compact operator is checked against.
std::vector<double> transformed_rhs(const TurnoverContext& ctx, int mu);

// Function derivatives G^{(l)}(z(base_pos)), l = 0..m, computed by differentiating
// under the contour integral (jets in the contour parameter, then series reversion).
std::array<cplx, kJetMax + 1> g_derivatives_at(const TurnoverContext& ctx, double gamma, int mu,
                                               double base_pos);

struct CompactRhs {
  std::vector<cplx> transport;     // M_{1,1}
  std::vector<cplx> coefficient;   // M_{1,2}
  std::vector<cplx> kernel_split;  // F_2 in boundary-split form
  std::vector<cplx> lower_order;   // remaining terms incl. the f^L-only forcing
  std::vector<cplx> total;
  std::vector<cplx> b_coeff;       // the bracket coefficient (L1) per node
};

// Assembles T(h) for h = f~^{+(m)} along the contour at the given gamma; component mu in {1,2}.
CompactRhs modified_rhs_compact(const TurnoverContext& ctx, double gamma, int mu);

// --- refined Rayleigh-Taylor condition ----------------------------------------------------

struct RefinedRtRow {
  double a = 0.0;  // base position alpha + tau
  cplx L1, L2;
  double margin = 0.0;  // -Re L2 - 18|Im L1| - 18|Im L2|
};

struct RefinedRtReport {
  std::vector<RefinedRtRow> rows;
  double min_margin = 0.0;
  double argmin = 0.0;
};

RefinedRtReport refined_rt_check(const TurnoverContext& ctx, double gamma, int mu = 1);

}  // namespace muskat
