#include "muskat/complexify.hpp"

#include <algorithm>
#include <cmath>

#include "muskat/kernel.hpp"
#include "muskat/util.hpp"

namespace muskat {

// ---------------------------------------------------------------- transport

void TransportState::validate() const {
  if (kappa0_sign >= 0 && tau != 0.0)
    throw ValidationError("TransportState: tau must be 0 on the kappa(0) > 0 branch");
  if (kappa0_sign < 0 && tau < 0.0)
    throw ValidationError("TransportState: tau must be nonnegative");
}

double kappa_eval(const PeriodicInterface& pinned, const TurnoverFrame& frame, double dZ1dt,
                  double kernel_scale) {
  const int n = pinned.n;
  const Grid grid(n);
  const int zi = grid.zero_index();
  const double dx0 = frame.dx(0.0);
  if (dx0 <= 0.0) throw NumericalError("kappa_eval: dx/dalpha(0) <= 0");
  double acc = 0.0;
  for (int o = 1; o < n; o += 2) {
    const long j = long(zi) - o;
    const int jm = int(((j % n) + n) % n);
    const double x1 = pinned.f1[zi] - pinned.f1_ext(j);
    const double x2 = pinned.f2[zi] - pinned.f2_ext(j);
    const double denom = kernel_denom(x1, x2);
    if (denom < 1e-30) throw NumericalError("kappa_eval: arc-chord violation in PV integral");
    acc += std::sin(x1) / denom * frame.dx(grid.alpha(jm));
  }
  acc *= 2.0 * grid.dalpha;
  return (dZ1dt + kernel_scale * acc) / dx0;
}

double tau_eval(const std::vector<double>& kappa_samples, double t) {
  const int npts = static_cast<int>(kappa_samples.size());
  if (npts < 2) throw ValidationError("tau_eval: need at least two kappa samples");
  if (!(t > 0.0)) throw ValidationError("tau_eval: t > 0 required");
  const double k0 = kappa_samples.front();
  if (k0 == 0.0) throw NumericalError("tau_eval: kappa(0) = 0");
  const double s0 = k0 > 0.0 ? 1.0 : -1.0;
  for (double v : kappa_samples)
    if (v * s0 <= 0.0) throw NumericalError("tau_eval: sampled kappa changes sign");
  if (s0 > 0.0) return 0.0;
  const double h = t / (npts - 1);
  double acc = 0.0;
  int i = 0;
  for (; i + 2 < npts; i += 2)
    acc += h / 3.0 * (kappa_samples[i] + 4.0 * kappa_samples[i + 1] + kappa_samples[i + 2]);
  if (i + 1 < npts) acc += h / 2.0 * (kappa_samples[i] + kappa_samples[i + 1]);
  return -acc;
}

TurnoverSpeeds turnover_speeds(const PeriodicInterface& curve) {
  TurnoverSet set = detect_turnovers(curve);
  if (set.count() < 2) throw NumericalError("turnover_speeds: curve has fewer than two turnover points");
  auto nearest = [&](double target) {
    const TurnoverPoint* best = &set.roots.front();
    double bd = 1e300;
    for (const auto& r : set.roots) {
      const double d = std::abs(std::remainder(r.alpha - target, kTwoPi));
      if (d < bd) {
        bd = d;
        best = &r;
      }
    }
    return *best;
  };
  const TurnoverPoint r1 = nearest(0.0);
  const TurnoverPoint r2 = nearest(-kPi / 2.0);

  MuskatRhs rhs = muskat_rhs(curve);
  Spectrum r1s = spectrum_of(rhs.df1);
  Spectrum dr1 = derivative(r1s, 1);
  auto speed = [&](const TurnoverPoint& r) {
    if (std::abs(r.d2f1) < 1e-8) throw NumericalError("turnover_speeds: flat turnover, d2 f1 ~ 0");
    return -eval_series_real(dr1, r.alpha) / r.d2f1;
  };
  return TurnoverSpeeds{r1.alpha, r2.alpha, speed(r1), speed(r2)};
}

// ------------------------------------------------ complex nodes / continuation

std::vector<cplx> complex_nodes(const ProfileSet& profiles, double tau, double gamma, double t,
                                const Grid& grid) {
  std::vector<cplx> out(grid.n);
  for (int i = 0; i < grid.n; ++i) {
    const double b = grid.alpha(i) + tau;
    out[i] = cplx(b, profiles.c(b) * gamma * t);
  }
  return out;
}

StripEstimate strip_estimate(const Spectrum& s, double noise_floor, int min_modes) {
  const int half = s.n / 2;
  std::vector<double> ks, logs;
  for (int k = 1; k < half; ++k) {
    const double mag = 0.5 * (std::abs(s.at_mode(k)) + std::abs(s.at_mode(-k)));
    if (mag > noise_floor) {
      ks.push_back(double(k));
      logs.push_back(std::log(mag));
    }
  }
  if (static_cast<int>(ks.size()) < min_modes)
    throw ValidationError("strip_estimate: insufficient modes above the noise floor");
  // least squares: log|c_k| = b - d k
  double sk = 0, sl = 0, skk = 0, skl = 0;
  const double np = double(ks.size());
  for (std::size_t i = 0; i < ks.size(); ++i) {
    sk += ks[i];
    sl += logs[i];
    skk += ks[i] * ks[i];
    skl += ks[i] * logs[i];
  }
  const double det = np * skk - sk * sk;
  const double slope = (np * skl - sk * sl) / det;
  const double icept = (sl - slope * sk) / np;
  double rss = 0.0;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    const double r = logs[i] - (icept + slope * ks[i]);
    rss += r * r;
  }
  StripEstimate est;
  est.width = std::max(0.0, -slope);
  est.k_min = static_cast<int>(ks.front());
  est.k_max = static_cast<int>(ks.back());
  est.residual = std::sqrt(rss / np);
  est.band_limited = est.residual > 0.1 || static_cast<int>(ks.size()) < s.n / 8;
  return est;
}

std::vector<cplx> fourier_extend(const Spectrum& s, const std::vector<cplx>& nodes, double safety) {
  double max_im = 0.0;
  for (cplx z : nodes) max_im = std::max(max_im, std::abs(z.imag()));
  if (max_im > 0.0) {
    bool entire = false;
    double width = 0.0;
    try {
      StripEstimate est = strip_estimate(s);
      width = est.width;
    } catch (const ValidationError&) {
      entire = true;  // effectively band-limited data: safe at any height
    }
    if (!entire && width < safety * max_im)
      throw NumericalError("fourier_extend: nodes exceed the estimated analyticity strip");
  }
  std::vector<cplx> out(nodes.size());
  SeriesEvaluator ev(s.n);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    ev.set_point(nodes[i]);
    out[i] = ev.eval(s);
  }
  return out;
}

// ---------------------------------------------------------- extension fields

ComplexExtensionField::ComplexExtensionField(int na, int ng, double t_, double tau_, ProfileSet p)
    : n_alpha(na), n_gamma(ng), t(t_), tau(tau_), profiles(std::move(p)) {
  if (ng < 5) throw ValidationError("ComplexExtensionField: n_gamma >= 5 required");
  gamma_nodes.resize(ng);
  for (int g = 0; g < ng; ++g) gamma_nodes[g] = -1.0 + 2.0 * g / (ng - 1);
  h.assign(ng, std::vector<cplx>(na, cplx(0.0)));
}

ComplexExtensionField extend_field(const Spectrum& data, const ProfileSet& profiles, double tau, double t,
                                   int n_alpha, int n_gamma) {
  if (data.n != n_alpha) throw ValidationError("extend_field: spectrum size must match n_alpha");
  ComplexExtensionField field(n_alpha, n_gamma, t, tau, profiles);
  const Grid grid(n_alpha);
  for (int g = 0; g < n_gamma; ++g) {
    std::vector<cplx> nodes = complex_nodes(profiles, tau, field.gamma_nodes[g], t, grid);
    field.h[g] = fourier_extend(data, nodes);
  }
  return field;
}

AResidual a_residual(const ComplexExtensionField& field) {
  const int ng = field.n_gamma, na = field.n_alpha;
  if (ng < 5) throw ValidationError("a_residual: n_gamma >= 5 required");
  const double dg = field.gamma_nodes[1] - field.gamma_nodes[0];
  const Grid grid(na);

  std::vector<std::vector<cplx>> dalpha(ng);
  for (int g = 0; g < ng; ++g) dalpha[g] = samples_of(derivative(spectrum_of(field.h[g]), 1));

  AResidual res;
  res.gamma_begin = 2;
  res.gamma_end = ng - 2;
  for (int g = 2; g < ng - 2; ++g) {
    std::vector<cplx> row(na);
    const double gam = field.gamma_nodes[g];
    for (int i = 0; i < na; ++i) {
      const double b = grid.alpha(i) + field.tau;
      const cplx ict(0.0, field.profiles.c(b) * field.t);
      const cplx oneic(1.0, field.profiles.c_prime(b) * gam * field.t);
      const cplx dgam = (-field.h[g + 2][i] + 8.0 * field.h[g + 1][i] - 8.0 * field.h[g - 1][i] +
                         field.h[g - 2][i]) /
                        (12.0 * dg);
      row[i] = ict / oneic * dalpha[g][i] - dgam;
      res.max_abs = std::max(res.max_abs, std::abs(row[i]));
    }
    res.values.push_back(std::move(row));
  }
  return res;
}

double commute_check(const ComplexExtensionField& field) {
  const int ng = field.n_gamma, na = field.n_alpha;
  if (ng < 5) throw ValidationError("commute_check: n_gamma >= 5 required");
  const double dg = field.gamma_nodes[1] - field.gamma_nodes[0];
  const Grid grid(na);

  // D^-1 h per gamma line (tau = 0 per the commuting lemma)
  std::vector<std::vector<cplx>> dinv(ng), ah(ng);
  for (int g = 0; g < ng; ++g) {
    AntiderivativeStack st;
    st.depth = 1;
    st.tau = 0.0;
    st.gamma = field.gamma_nodes[g];
    st.t = field.t;
    st.profiles = &field.profiles;
    dinv[g] = d_minus_once(field.h[g], grid, st, true);

    std::vector<cplx> da = samples_of(derivative(spectrum_of(field.h[g]), 1));
    ah[g].resize(na);
    for (int i = 0; i < na; ++i) {
      const double a = grid.alpha(i);
      const cplx ict(0.0, field.profiles.c(a) * field.t);
      const cplx oneic(1.0, field.profiles.c_prime(a) * field.gamma_nodes[g] * field.t);
      ah[g][i] = ict / oneic * da[i];  // gamma part added below
    }
  }

  double worst = 0.0;
  for (int g = 2; g < ng - 2; ++g) {
    AntiderivativeStack st;
    st.depth = 1;
    st.tau = 0.0;
    st.gamma = field.gamma_nodes[g];
    st.t = field.t;
    st.profiles = &field.profiles;

    std::vector<cplx> ah_line(na);
    for (int i = 0; i < na; ++i) {
      const cplx dgam_h = (-field.h[g + 2][i] + 8.0 * field.h[g + 1][i] - 8.0 * field.h[g - 1][i] +
                           field.h[g - 2][i]) /
                          (12.0 * dg);
      ah_line[i] = ah[g][i] - dgam_h;
    }
    std::vector<cplx> dinv_ah = d_minus_once(ah_line, grid, st, false);

    for (int i = 0; i < na; ++i) {
      const double a = grid.alpha(i);
      // A(D^-1 h): the alpha-derivative of D^-1 h is (1 + i c' gamma t) h exactly,
      // so the first term collapses to i c t h.
      const cplx ict(0.0, field.profiles.c(a) * field.t);
      const cplx dgam_dinv = (-dinv[g + 2][i] + 8.0 * dinv[g + 1][i] - 8.0 * dinv[g - 1][i] +
                              dinv[g - 2][i]) /
                             (12.0 * dg);
      const cplx a_of_dinv = ict * field.h[g][i] - dgam_dinv;
      worst = std::max(worst, std::abs(a_of_dinv - dinv_ah[i]));
    }
  }
  return worst;
}

// ------------------------------------------------------ eps-regularized operators

void RegularizationParams::validate() const {
  if (!(eps > 0.0) || eps > 1.0) throw ValidationError("RegularizationParams: 0 < eps <= 1 required");
  if (k_order < 1 || k_order > 12) throw ValidationError("RegularizationParams: 1 <= k_order <= 12");
}

std::vector<cplx> eps_operator_apply(const std::vector<cplx>& h_line, const Grid& grid, EpsOperator which,
                                     const RegularizationParams& params, const ProfileSet& profiles,
                                     const std::vector<cplx>& L1, const std::vector<cplx>& L2, double kappa,
                                     const std::vector<cplx>& h0_derivs) {
  params.validate();
  const int n = grid.n;
  if (static_cast<int>(h_line.size()) != n) throw ValidationError("eps_operator_apply: size mismatch");
  const double eps = params.eps;
  const int k = params.k_order;
  if (static_cast<int>(h0_derivs.size()) < k)
    throw ValidationError("eps_operator_apply: need h^{(j)}(0) for j < k_order");

  Spectrum hs = spectrum_of(h_line);
  std::vector<cplx> out(n, cplx(0.0));

  if (which == EpsOperator::M11) {
    std::vector<cplx> shifted = samples_of(translate(hs, eps));
    for (int i = 0; i < n; ++i)
      out[i] = profiles.lambda(grid.alpha(i)) * (shifted[i] - h_line[i]) / eps * kappa;
    return out;
  }

  // subtract the k-term Taylor polynomial of h at 0
  auto poly = [&](double b) {
    cplx acc(0.0);
    double pw = 1.0, fact = 1.0;
    for (int j = 0; j < k; ++j) {
      if (j > 0) {
        pw *= b;
        fact *= j;
      }
      acc += h0_derivs[j] * pw / fact;
    }
    return acc;
  };

  SeriesEvaluator ev(n);
  auto hval = [&](double b) {
    ev.set_point(cplx(b, 0.0));
    return ev.eval(hs);
  };

  for (int i = 0; i < n; ++i) {
    const double a = grid.alpha(i);
    if (a <= 0.0) continue;
    const double lam = profiles.lambda(a);
    if (lam == 0.0) continue;
    const cplx ha = hval(a) - poly(a);
    const double scale = std::min(eps, grid.dalpha);

    if (which == EpsOperator::M12) {
      auto f = [&](double b) { return (ha - (hval(b) - poly(b))) * reg_kernel_transport(a, b, eps); };
      const cplx integral = gl_integrate_graded(0.0, 2.0 * a, a, scale, f);
      cplx corr(0.0);
      double pw = 1.0, fact = 1.0;
      for (int j = 1; j < k; ++j) {
        if (j > 1) {
          pw *= a;
          fact *= (j - 1);
        }
        corr += pw / fact * h0_derivs[j];
      }
      out[i] = lam * (integral * (2.0 / kPi) + corr) * L1[i];
    } else {  // M21
      auto f = [&](double b) { return (ha - (hval(b) - poly(b))) * reg_kernel_smooth(a, b, eps); };
      const cplx integral = gl_integrate_graded(0.0, 2.0 * a, a, scale, f);
      cplx corr(0.0);
      for (int j = 0; j < k; ++j) corr += h0_derivs[j] * pv_monomial_integral(j, a);
      out[i] = lam * L2[i] * (integral + corr);
    }
  }
  return out;
}

// ------------------------------------------------------------ turnover context

TurnoverContext::TurnoverContext(PeriodicInterface pinned_curve, TurnoverFrame frame, ProfileSet profiles,
                                 int m, double t, TransportState transport)
    : pinned_(std::move(pinned_curve)),
      frame_(frame),
      profiles_(std::move(profiles)),
      m_(m),
      t_(t),
      scale_(pinned_.rho_bar * kKernelScale),
      transport_(transport),
      grid_(pinned_.n) {
  if (m_ < 1 || m_ > 4) throw ValidationError("TurnoverContext: 1 <= m <= 4 supported");
  transport_.validate();
  CurveSpectra cs(pinned_);
  for (int o = 0; o <= m_ + 2; ++o) {
    dp1_.push_back(derivative(cs.p1, o));
    ds2_.push_back(derivative(cs.s2, o));
  }
  const int zi = grid_.zero_index();
  taylor1_.resize(m_ + 1);
  taylor2_.resize(m_ + 1);
  for (int o = 0; o <= m_; ++o) {
    std::vector<double> d1 = real_samples_of(dp1_[o]);
    std::vector<double> d2 = real_samples_of(ds2_[o]);
    taylor1_[o] = d1[zi] + (o == 1 ? 1.0 : 0.0);  // alpha = 0 at the zero node, slope at order 1
    taylor2_[o] = d2[zi];
  }
}

cplx TurnoverContext::node(double b, double gamma) const { return cplx(b, profiles_.c(b) * gamma * t_); }

cplx TurnoverContext::dnode(double b, double gamma) const {
  return cplx(1.0, profiles_.c_prime(b) * gamma * t_);
}

cplx TurnoverContext::f_deriv(int mu, int order, cplx z) const {
  if (order > m_ + 2) throw ValidationError("TurnoverContext::f_deriv: order out of range");
  SeriesEvaluator ev(pinned_.n);
  ev.set_point(z);
  if (mu == 1) {
    cplx v = ev.eval(dp1_[order]);
    if (order == 0) v += z;
    if (order == 1) v += 1.0;
    return v;
  }
  return ev.eval(ds2_[order]);
}

cplx TurnoverContext::taylor_deriv(int mu, int order, cplx z) const {
  if (order > m_) return cplx(0.0);
  const std::vector<double>& tl = mu == 1 ? taylor1_ : taylor2_;
  cplx acc(0.0), pw(1.0);
  double fact = 1.0;
  for (int l = order; l <= m_; ++l) {
    acc += tl[l] * pw / fact;
    pw *= z;
    fact *= (l - order + 1);
  }
  return acc;
}

cplx TurnoverContext::fplus_deriv(int mu, int order, cplx z) const {
  const double re = z.real();
  if (re < 0.0) return cplx(0.0);
  Jet lam0 = profiles_.lambda0_jet(re, order);
  cplx acc(0.0);
  double binom = 1.0;
  for (int j = 0; j <= order; ++j) {
    if (j > 0) binom = binom * double(order - j + 1) / double(j);
    acc += binom * (f_deriv(mu, j, z) - taylor_deriv(mu, j, z)) * lam0.derivative(order - j);
  }
  return acc;
}

// ------------------------------------------------------------ brute-force G

std::vector<double> transformed_rhs(const TurnoverContext& ctx, int mu) {
  const PeriodicInterface& c = ctx.pinned();
  const int n = c.n;
  const Grid grid = c.grid();
  CurveSpectra cs(c);
  const std::vector<double> d1 = cs.d_f1(1), d2 = cs.d_f2(1);
  const std::vector<double> dmu = mu == 1 ? d1 : d2;
  const std::vector<double> ddmu = mu == 1 ? cs.d_f1(2) : cs.d_f2(2);

  std::vector<double> xp(n), v(n);
  for (int i = 0; i < n; ++i) {
    xp[i] = ctx.frame().dx(grid.alpha(i));
    v[i] = dmu[i] / xp[i];
  }
  Spectrum vs = spectrum_of(v);
  std::vector<double> vp = real_samples_of(derivative(vs, 1));

  std::vector<double> out(n, 0.0);
  const double s = ctx.scale() * grid.dalpha;
  auto ext = [&](const std::vector<double>& arr, long idx) { return arr[((idx % n) + n) % n]; };

  parallel_for(0, static_cast<std::size_t>(n), [&](std::size_t iu) {
    const int i = static_cast<int>(iu);
    const double l2 = 2.0 * d1[i] / (d1[i] * d1[i] + d2[i] * d2[i]);
    double acc = l2 * vp[i] * xp[i];  // diagonal limit of the integrand
    for (int o = 1; o < n; ++o) {
      const long j = long(i) - o;
      const double x1 = c.f1[i] - c.f1_ext(j);
      const double x2 = c.f2[i] - c.f2_ext(j);
      const double denom = kernel_denom(x1, x2);
      if (denom < 1e-30) throw NumericalError("transformed_rhs: arc-chord violation");
      acc += std::sin(x1) / denom * (v[i] - ext(v, j)) * ext(xp, j);
    }
    out[i] = ctx.frame().w(grid.alpha(i)) * dmu[i] + s * acc;
  });
  return out;
}

// ------------------------------------------------------------ compact assembly

namespace {

struct Entry {
  double pos = 0.0;  // base position (alpha + tau), unwrapped
  cplx z;            // contour point
  cplx oneic;        // 1 + i c'(pos) gamma t
  std::array<std::array<cplx, kJetMax + 2>, 2> f{};  // f~_mu^{(l)}(z), l = 0..maxord
  cplx fp_m, fp_m1;  // f+^{(m)}, f+^{(m+1)} of the assembled component at z
  Jet cj;            // c-jet at pos, order m+1
};

}  // namespace

struct CompactAssembler {
  const TurnoverContext& ctx;
  double gamma;
  int mu;  // 1 or 2
  int n;
  double da, tau, t, s;
  int m, maxord;

  std::vector<Entry> node_tab, half_tab, zero_half_tab;
  Entry zero_entry;

  CompactAssembler(const TurnoverContext& c, double g, int mu_)
      : ctx(c), gamma(g), mu(mu_), n(c.grid().n), da(c.grid().dalpha), tau(c.transport().tau),
        t(c.t()), s(c.scale()), m(c.m()), maxord(c.m() + 2) {}

  Entry make_entry(double pos) const {
    Entry e;
    e.pos = pos;
    e.cj = ctx.profiles().c_jet(pos, m + 1);
    e.z = cplx(pos, e.cj.c[0].real() * gamma * t);
    e.oneic = cplx(1.0, e.cj.derivative(1).real() * gamma * t);
    SeriesEvaluator ev(n);
    ev.set_point(e.z);
    for (int o = 0; o <= maxord; ++o) {
      cplx v1 = ev.eval(ctx.dp1_[o]);
      if (o == 0) v1 += e.z;
      if (o == 1) v1 += 1.0;
      e.f[0][o] = v1;
      e.f[1][o] = ev.eval(ctx.ds2_[o]);
    }
    e.fp_m = fplus_from(e, mu, m);
    e.fp_m1 = fplus_from(e, mu, m + 1);
    return e;
  }

  cplx taylor_deriv_c(int mu_, int order, cplx z) const { return ctx.taylor_deriv(mu_, order, z); }

  cplx fplus_from(const Entry& e, int mu_, int order) const {
    if (e.pos < 0.0) return cplx(0.0);
    Jet lam0 = ctx.profiles().lambda0_jet(e.pos, order);
    cplx acc(0.0);
    double binom = 1.0;
    for (int j = 0; j <= order; ++j) {
      if (j > 0) binom = binom * double(order - j + 1) / double(j);
      acc += binom * (e.f[mu_ - 1][j] - taylor_deriv_c(mu_, j, e.z)) * lam0.derivative(order - j);
    }
    return acc;
  }

  void build_tables() {
    node_tab.resize(n);
    half_tab.resize(n);
    for (int i = 0; i < n; ++i) {
      node_tab[i] = make_entry(tau - kPi + i * da);
      half_tab[i] = make_entry(tau - kPi + (i + 0.5) * da);
    }
    if (tau != 0.0) {
      zero_half_tab.resize(n);
      for (int i = 0; i < n; ++i) zero_half_tab[i] = make_entry(-kPi + (i + 0.5) * da);
    }
    zero_entry = make_entry(0.0);
  }

  const std::vector<Entry>& inner_for_zero() const { return tau != 0.0 ? zero_half_tab : half_tab; }

  // the lambda0 taper of degree p transitions over ~(delta/sqrt p); quadratures whose
  // windows cross the taper band must resolve that scale
  double taper_scale() const { return ctx.profiles().delta() / 40.0; }

  // --- kernel between two sampled points, invariant under the 2pi winding of f1
  cplx kernel_at(const Entry& a, const Entry& b) const {
    const cplx x1 = a.f[0][0] - b.f[0][0];
    const cplx x2 = a.f[1][0] - b.f[1][0];
    const cplx d = kernel_denom(x1, x2);
    if (std::abs(d) < 1e-300)
      throw NumericalError("modified_rhs_compact: arc-chord violation at complex nodes");
    return std::sin(x1) / d;
  }

  // d/dbeta of K(f~(z_a) - f~(z_b(beta))) at a table entry b (includes the dz/dbeta factor)
  cplx kernel_dbeta(const Entry& a, const Entry& b) const {
    const cplx x1 = a.f[0][0] - b.f[0][0];
    const cplx x2 = a.f[1][0] - b.f[1][0];
    cplx k1, k2;
    kernel_grad(x1, x2, k1, k2);
    return -(k1 * b.f[0][1] + k2 * b.f[1][1]) * b.oneic;
  }

  // pv over the full circle of K(.) x'(z_b) dz_b by the half-offset midpoint rule;
  // the integrand is analytic, the Cauchy parts cancel pairwise
  cplx pv_weighted(const Entry& base, const std::vector<Entry>& tab) const {
    cplx acc(0.0);
    for (int r = 0; r < n; ++r) {
      const Entry& e = tab[r];
      acc += kernel_at(base, e) * ctx.frame().dx(e.z) * e.oneic;
    }
    return acc * da;
  }

  // ---------------- parameter jets along the contour ----------------

  // delta-jet of z(alpha) at a base entry: c[0] = 0, c[1] = oneic, c[k] = i gamma t c^{(k)}/k!
  Jet zdelta(const Entry& e, int order) const {
    Jet j;
    j.m = order;
    j.c[0] = 0.0;
    for (int k = 1; k <= order; ++k) {
      cplx v = (k == 1 ? cplx(1.0) : cplx(0.0));
      if (k <= e.cj.m) v += cplx(0.0, gamma * t) * e.cj.c[k];
      j.c[k] = v;
    }
    return j;
  }

  // measure factor dz/dbeta as a jet in the base parameter (fixed offset u)
  Jet measure_jet(const Entry& e, int order) const {
    Jet zfull = zdelta(e, order + 1 <= kJetMax ? order + 1 : order);
    Jet r;
    r.m = order;
    for (int k = 0; k <= order; ++k) r.c[k] = (k + 1 <= zfull.m ? zfull.c[k + 1] * double(k + 1) : cplx(0.0));
    return r;
  }

  // f~_mu composed with the contour as a jet in alpha at entry e (orders 0..order)
  Jet f_jet(const Entry& e, int mu_, int deriv_order, int order) const {
    std::array<cplx, kJetMax + 1> coeffs{};
    double fact = 1.0;
    for (int l = 0; l <= order; ++l) {
      if (l > 1) fact *= l;
      coeffs[l] = e.f[mu_ - 1][deriv_order + l] / fact;
    }
    return jet_compose(coeffs, order, zdelta(e, order));
  }

  Jet xprime_jet(const Entry& e, int order) const {
    // x'(z) Taylor coefficients at e.z from the closed form, composed with the contour
    std::array<cplx, kJetMax + 1> coeffs{};
    const double S = ctx.frame().sin_coeff();
    const cplx sz = std::sin(e.z), cz = std::cos(e.z);
    double fact = 1.0;
    for (int l = 0; l <= order; ++l) {
      if (l > 1) fact *= l;
      // d^l/dz^l [1 - S cos z]
      cplx d;
      switch (l % 4) {
        case 0: d = (l == 0) ? cplx(1.0) - S * cz : -S * cz; break;
        case 1: d = S * sz; break;
        case 2: d = S * cz; break;
        default: d = -S * sz; break;
      }
      coeffs[l] = d / fact;
    }
    return jet_compose(coeffs, order, zdelta(e, order));
  }

  Jet xt_jet(const Entry& e, int order) const {
    std::array<cplx, kJetMax + 1> coeffs{};
    const double D = ctx.frame().dZ2dt - ctx.frame().dZ1dt;
    const cplx sz = std::sin(e.z), cz = std::cos(e.z);
    double fact = 1.0;
    for (int l = 0; l <= order; ++l) {
      if (l > 1) fact *= l;
      cplx d;
      switch (l % 4) {
        case 0: d = (l == 0) ? -D * sz + ctx.frame().dZ1dt : -D * sz; break;
        case 1: d = -D * cz; break;
        case 2: d = D * sz; break;
        default: d = D * cz; break;
      }
      coeffs[l] = d / fact;
    }
    return jet_compose(coeffs, order, zdelta(e, order));
  }

  // parameter jet of G_mu(z(alpha)) at the base entry; inner points from `tab`
  Jet g_param_jet(const Entry& base, const std::vector<Entry>& tab, int mu_) const {
    const int order = m;
    const Jet xp_a = xprime_jet(base, order);
    const Jet f1_a0 = f_jet(base, 1, 0, order);
    const Jet f2_a0 = f_jet(base, 2, 0, order);
    const Jet fmu_a = f_jet(base, mu_, 1, order);
    const Jet w_a = xt_jet(base, order) / xp_a;
    const Jet v_a = fmu_a / xp_a;

    Jet acc = Jet::constant(order, 0.0);
    for (int r = 0; r < n; ++r) {
      const Entry& e = tab[r];
      Jet d1 = f1_a0 - f_jet(e, 1, 0, order);
      Jet d2 = f2_a0 - f_jet(e, 2, 0, order);
      Jet K = kernel_jet(d1, d2);
      Jet xp_b = xprime_jet(e, order);
      Jet v_b = f_jet(e, mu_, 1, order) / xp_b;
      Jet meas = measure_jet(e, order);
      acc = acc + K * (v_a - v_b) * xp_b * meas;
    }
    return w_a * fmu_a + std::complex<double>(s * da) * acc;
  }

  // function jets G^{(l)}(z_base), l = 0..m, via series reversion of the contour map
  std::array<cplx, kJetMax + 1> g_function_derivs(const Entry& base, const std::vector<Entry>& tab,
                                                  int mu_) const {
    Jet param = g_param_jet(base, tab, mu_);
    Jet rev = jet_reversion(zdelta(base, m));
    std::array<cplx, kJetMax + 1> coeffs{};
    for (int l = 0; l <= m; ++l) coeffs[l] = param.c[l];
    Jet func = jet_compose(coeffs, m, rev);
    std::array<cplx, kJetMax + 1> out{};
    double fact = 1.0;
    for (int l = 0; l <= m; ++l) {
      if (l > 1) fact *= l;
      out[l] = func.c[l] * fact;
    }
    return out;
  }

  // -------------- F2 in the boundary-split (M2c02) arrangement --------------

  // off-lattice sampling (GL panels): entry-like values at an arbitrary base position;
  // only derivative orders 0..need_ord are filled (enough for K, dK/dbeta and f+^{(m)})
  Entry sample_at(double pos, double gam, int need_ord) const {
    Entry e;
    e.pos = pos;
    e.cj = ctx.profiles().c_jet(pos, 1);
    e.z = cplx(pos, e.cj.c[0].real() * gam * t);
    e.oneic = cplx(1.0, e.cj.derivative(1).real() * gam * t);
    SeriesEvaluator ev(n);
    ev.set_point(e.z);
    for (int o = 0; o <= need_ord; ++o) {
      cplx v1 = ev.eval(ctx.dp1_[o]);
      if (o == 0) v1 += e.z;
      if (o == 1) v1 += 1.0;
      e.f[0][o] = v1;
      e.f[1][o] = ev.eval(ctx.ds2_[o]);
    }
    e.fp_m = fplus_from(e, mu, std::min(m, need_ord));
    if (need_ord >= m + 1) e.fp_m1 = fplus_from(e, mu, m + 1);
    return e;
  }

  // pv int K(.) f+^{(m+1)}(z_b) dz_b over the contour: f+^{(m+1)} jumps at b = 0 and is
  // supported in [0, 2 delta], so the integral is windowed there and paired around the
  // Cauchy point instead of using the periodic midpoint rule.
  cplx pvk_extraction(const Entry& a_e) const {
    const double a = a_e.pos;
    const double edge = std::min(ctx.support_edge() + 2.0 * da, kPi + tau);
    if (edge <= 0.0) return cplx(0.0);
    const int need = m + 1;
    auto weighted = [&](double b) {
      const Entry eb = sample_at(b, gamma, need);
      return kernel_at(a_e, eb) * eb.fp_m1 * eb.oneic;
    };
    const double w = std::min(da, taper_scale());
    auto count = [&](double len) { return std::max(12, std::min(256, int(len / w) + 4)); };
    cplx acc(0.0);
    if (a > 1e-12 && a < edge) {
      const double r = std::min(a, edge - a);
      auto paired = [&](double u) { return weighted(a + u) + weighted(a - u); };
      acc += gl_integrate(0.0, r, count(r), paired);
      if (a - r > 1e-12) acc += gl_integrate(0.0, a - r, count(a - r), weighted);
      if (a + r < edge) acc += gl_integrate(a + r, edge, count(edge - a - r), weighted);
    } else {
      acc += gl_integrate(0.0, edge, count(edge), weighted);
    }
    return acc;
  }

  cplx f2_split(const Entry& a_e, double a, const Entry& e0) const {
    const double lam = ctx.profiles().lambda(a);
    if (lam == 0.0) return cplx(0.0);
    const double edge = ctx.support_edge() + 2.0 * da;
    const int need = std::max(m, 1);
    cplx total(0.0);

    const Entry e2a = sample_at(2.0 * a, gamma, need);
    const cplx K2a = kernel_at(a_e, e2a);
    const cplx K0 = kernel_at(a_e, e0);
    total += -K2a * (e2a.fp_m - a_e.fp_m);  // Term 1
    total += K0 * (e0.fp_m - a_e.fp_m);     // Term 2
    total += K2a * e2a.fp_m;                // Term 4

    // Term 3: pv over [0, 2a] written as symmetric pairs in u = b - a; the Cauchy parts
    // cancel within a pair, leaving a one-sided smooth integrand.
    {
      auto paired = [&](double u) {
        const Entry ep = sample_at(a + u, gamma, need);
        const Entry em = sample_at(a - u, gamma, need);
        const cplx fp = kernel_dbeta(a_e, ep) * (ep.fp_m - a_e.fp_m);
        const cplx fm = kernel_dbeta(a_e, em) * (em.fp_m - a_e.fp_m);
        return fp + fm;
      };
      // resolve both the kernel scale and the taper transition of the cutoffs
      const int panels = std::max(32, std::min(192, int(a / std::min(da, taper_scale())) + 8));
      total += gl_integrate(0.0, a, panels, paired);
    }

    // Term 5,1: vertical contour leg at b = 2a, eta from 0 to gamma
    if (gamma != 0.0) {
      const double c2a = ctx.profiles().c(2.0 * a);
      if (c2a != 0.0) {
        auto leg = [&](double eta) {
          const Entry ee = sample_at(2.0 * a, eta, need);
          const cplx x1 = a_e.f[0][0] - ee.f[0][0];
          const cplx x2 = a_e.f[1][0] - ee.f[1][0];
          cplx k1, k2;
          kernel_grad(x1, x2, k1, k2);
          // dK/dbeta at beta = 2a on the eta-line has its (1 + i c' eta t) factor
          // cancelled by the denominator of Term 5,1
          const cplx dk = -(k1 * ee.f[0][1] + k2 * ee.f[1][1]);
          return dk * ee.fp_m * cplx(0.0, c2a * t);
        };
        total += -gl_integrate(0.0, gamma, 4, leg);
      }
    }

    // Term 5,2: real trace beyond b = 2a
    {
      const double bhi = std::min(edge, kPi + tau);
      if (2.0 * a < bhi) {
        auto tail = [&](double b) {
          const Entry eb = sample_at(b, 0.0, need);
          return kernel_dbeta(a_e, eb) * eb.fp_m;
        };
        total += gl_integrate_graded(2.0 * a, bhi, 2.0 * a, std::min(da / 2.0, std::max(a / 2.0, 1e-3)),
                                     tail, taper_scale());
      }
    }
    return total * (lam * s);
  }

  // -------------- full assembly --------------

  CompactRhs run() const {
    CompactRhs out;
    out.transport.assign(n, cplx(0.0));
    out.coefficient.assign(n, cplx(0.0));
    out.kernel_split.assign(n, cplx(0.0));
    out.lower_order.assign(n, cplx(0.0));
    out.total.assign(n, cplx(0.0));
    out.b_coeff.assign(n, cplx(0.0));

    // G function jets at base 0 for the Taylor-polynomial time derivative
    std::array<cplx, kJetMax + 1> g0 = g_function_derivs(zero_entry, inner_for_zero(), mu);

    const double kappa = ctx.transport().kappa;
    const double taup = ctx.transport().tau_prime();
    const cplx w0 = ctx.frame().w(cplx(0.0, 0.0));
    const cplx xp0 = ctx.frame().dx(cplx(0.0, 0.0));
    const cplx pvi0 = pv_weighted(zero_entry, inner_for_zero());
    const Entry e0 = sample_at(0.0, gamma, std::max(m, 1));

    parallel_for(0, static_cast<std::size_t>(n), [&](std::size_t iu) {
      const int i = static_cast<int>(iu);
      const Entry& e = node_tab[i];
      const double a = e.pos;
      if (a <= 1e-12) return;
      const double lam = ctx.profiles().lambda(a);

      const cplx dh_da = e.fp_m1 * e.oneic;
      out.transport[i] = lam * (kappa + taup) * dh_da;

      const cplx pvia = pv_weighted(e, half_tab);
      const cplx xpa = ctx.frame().dx(e.z);
      const cplx wa = ctx.frame().w(e.z);
      const cplx icg = cplx(0.0, ctx.profiles().c(a) * gamma);
      const cplx bracket = (icg + wa + s * pvia / xpa - w0 - s * pvi0 / xp0) / e.oneic;
      const cplx bcoef = bracket + (1.0 / e.oneic - 1.0) * kappa;
      out.b_coeff[i] = bcoef;
      out.coefficient[i] = lam * bcoef * dh_da;

      out.kernel_split[i] = f2_split(e, a, e0);

      // lower-order block: continuation of d^m[(G - dP/dt) lambda0 1_{>=0}]
      // minus the leading parts already carried by the transport/coefficient/kernel terms
      std::array<cplx, kJetMax + 1> gfun = g_function_derivs(e, half_tab, mu);
      Jet lam0 = ctx.profiles().lambda0_jet(a, m);
      cplx gplus(0.0);
      double binom = 1.0;
      for (int j = 0; j <= m; ++j) {
        if (j > 0) binom = binom * double(m - j + 1) / double(j);
        // dP/dt^{(j)} at e.z
        cplx dpdt(0.0), pw(1.0);
        double fact = 1.0;
        for (int l = j; l <= m; ++l) {
          dpdt += g0[l] * pw / fact;
          pw *= e.z;
          fact *= (l - j + 1);
        }
        gplus += binom * (gfun[j] - dpdt) * lam0.derivative(m - j);
      }
      const cplx Wc = wa + s * pvia / xpa;
      const cplx pvk = pvk_extraction(e);
      out.lower_order[i] = lam * (gplus - Wc * e.fp_m1 + s * pvk);

      out.total[i] = out.transport[i] + out.coefficient[i] + out.kernel_split[i] + out.lower_order[i];
    });
    return out;
  }
};

CompactRhs modified_rhs_compact(const TurnoverContext& ctx, double gamma, int mu) {
  if (mu != 1 && mu != 2) throw ValidationError("modified_rhs_compact: mu must be 1 or 2");
  CompactAssembler as(ctx, gamma, mu);
  as.build_tables();
  return as.run();
}

std::array<cplx, kJetMax + 1> g_derivatives_at(const TurnoverContext& ctx, double gamma, int mu,
                                               double base_pos) {
  if (mu != 1 && mu != 2) throw ValidationError("g_derivatives_at: mu must be 1 or 2");
  CompactAssembler as(ctx, gamma, mu);
  Entry base = as.make_entry(base_pos);
  const int n = ctx.grid().n;
  const double da = ctx.grid().dalpha;
  std::vector<Entry> tab(n);
  for (int q = 0; q < n; ++q) {
    const double u = -kPi + (q + 0.5) * da;
    tab[q] = as.make_entry(base_pos - u);
  }
  return as.g_function_derivs(base, tab, mu);
}

RefinedRtReport refined_rt_check(const TurnoverContext& ctx, double gamma, int mu) {
  CompactAssembler as(ctx, gamma, mu);
  as.build_tables();

  const double kappa = ctx.transport().kappa;
  const cplx w0 = ctx.frame().w(cplx(0.0, 0.0));
  const cplx xp0 = ctx.frame().dx(cplx(0.0, 0.0));
  const cplx pvi0 = as.pv_weighted(as.zero_entry, as.inner_for_zero());

  RefinedRtReport rep;
  rep.min_margin = 1e300;
  const double hi = 20.0 * ctx.profiles().delta();
  for (int i = 0; i < ctx.grid().n; ++i) {
    const Entry& e = as.node_tab[i];
    const double a = e.pos;
    if (a <= 1e-12 || a > hi || a > kPi) continue;

    const cplx pvia = as.pv_weighted(e, as.half_tab);
    const cplx xpa = ctx.frame().dx(e.z);
    const cplx wa = ctx.frame().w(e.z);
    const cplx icg = cplx(0.0, ctx.profiles().c(a) * gamma);
    const cplx L1 =
        (icg + wa + ctx.scale() * pvia / xpa - w0 - ctx.scale() * pvi0 / xp0) / e.oneic +
        (1.0 / e.oneic - 1.0) * kappa;

    // complexified diagonal limit: L2 = -2 u1' / (oneic (u1'^2 + u2'^2)) with u = f~ on the contour
    const cplx d1 = e.f[0][1], d2 = e.f[1][1];
    const cplx L2 = -2.0 * d1 / (e.oneic * (d1 * d1 + d2 * d2));

    RefinedRtRow row;
    row.a = a;
    row.L1 = L1;
    row.L2 = L2;
    row.margin = -L2.real() - 18.0 * std::abs(L1.imag()) - 18.0 * std::abs(L2.imag());
    if (row.margin < rep.min_margin) {
      rep.min_margin = row.margin;
      rep.argmin = a;
    }
    rep.rows.push_back(row);
  }
  if (rep.rows.empty()) throw NumericalError("refined_rt_check: no nodes in (0, 20 delta]");
  return rep;
}

}  // namespace muskat
