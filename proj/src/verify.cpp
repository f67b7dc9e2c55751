#include "muskat/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>

#include <json.hpp>

#include "muskat/curve.hpp"
#include "muskat/kernel.hpp"
#include "muskat/profiles.hpp"
#include "muskat/quadrature.hpp"

namespace muskat {

namespace {

// antiderivatives of the regularized kernels and their first moments
double I0s(double u, double e) { return std::atan(u / e) / e; }
double I1s(double u, double e) { return 0.5 * std::log(u * u + e * e); }
double I0t(double u, double e) { return -0.5 * e / (u * u + e * e); }
double I1t(double u, double e) { return 0.5 * std::atan(u / e) - 0.5 * e * u / (u * u + e * e); }

// weight of the hat centered at distance d*h from the evaluation point; the hat support
// can be clipped (lo/hi in hat-local coordinates within [-1, 1]) for the domain boundary
double hat_weight(double d, double h, double e, double (*i0)(double, double),
                  double (*i1)(double, double), double lo = -1.0, double hi = 1.0) {
  const double a = (d + lo) * h, b = d * h, c = (d + hi) * h;
  double left = 0.0, right = 0.0;
  if (lo < 0.0) left = (i1(b, e) - i1(a, e)) - (d - 1.0) * h * (i0(b, e) - i0(a, e));
  if (hi > 0.0) right = (d + 1.0) * h * (i0(c, e) - i0(b, e)) - (i1(c, e) - i1(b, e));
  return (left + right) / h;
}

}  // namespace

EpsKernelTable::EpsKernelTable(int m_, double eps_) : m(m_), h(kPi / m_), eps(eps_) {
  w_smooth.resize(2 * m + 1);
  w_transport.resize(2 * m + 1);
  for (int d = -m; d <= m; ++d) {
    w_smooth[d + m] = hat_weight(double(d), h, eps, &I0s, &I1s);
    w_transport[d + m] = hat_weight(double(d), h, eps, &I0t, &I1t);
  }
  // boundary hats are clipped to [0, pi]
  corr0_smooth.resize(m + 1);
  corr0_transport.resize(m + 1);
  corrm_smooth.resize(m + 1);
  corrm_transport.resize(m + 1);
  // in the kernel variable w = alpha - u the out-of-domain halves flip sides
  for (int i = 0; i <= m; ++i) {
    corr0_smooth[i] = hat_weight(double(i), h, eps, &I0s, &I1s, 0.0, 1.0);
    corr0_transport[i] = hat_weight(double(i), h, eps, &I0t, &I1t, 0.0, 1.0);
    corrm_smooth[i] = hat_weight(double(i - m), h, eps, &I0s, &I1s, -1.0, 0.0);
    corrm_transport[i] = hat_weight(double(i - m), h, eps, &I0t, &I1t, -1.0, 0.0);
  }
}

std::vector<double> EpsKernelTable::apply_smooth(const std::vector<double>& g) const {
  std::vector<double> out(m + 1, 0.0);
  for (int i = 0; i <= m; ++i) {
    double acc = 0.0;
    for (int j = 0; j <= m; ++j) acc += w_smooth[i - j + m] * g[j];
    out[i] = acc - corr0_smooth[i] * g[0] - corrm_smooth[i] * g[m];
  }
  return out;
}

std::vector<double> EpsKernelTable::apply_transport(const std::vector<double>& g) const {
  std::vector<double> out(m + 1, 0.0);
  for (int i = 0; i <= m; ++i) {
    double acc = 0.0;
    for (int j = 0; j <= m; ++j) acc += w_transport[i - j + m] * g[j];
    out[i] = acc - corr0_transport[i] * g[0] - corrm_transport[i] * g[m];
  }
  return out;
}

double EpsKernelTable::mass_smooth(double alpha) const { return I0s(alpha, eps) - I0s(alpha - kPi, eps); }
double EpsKernelTable::mass_transport(double alpha) const { return I0t(alpha, eps) - I0t(alpha - kPi, eps); }

namespace {

// window rising on [r0, r1], 1 on [r1, f0], falling to 0 on [f0, f1]
double window(double a, double r0, double r1, double f0, double f1) {
  if (a <= r0 || a >= f1) return 0.0;
  double v = 1.0;
  if (a < r1) v *= 1.0 - ProfileSet::smoothstep((a - r0) / (r1 - r0));
  if (a > f0) v *= ProfileSet::smoothstep((a - f0) / (f1 - f0));
  return v;
}

struct GardingTriple {
  std::vector<double> f, g, c;  // on the [0, pi] grid with m+1 nodes
};

GardingTriple make_triple(int m, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  double af[8], ag[8];
  for (int k = 0; k < 8; ++k) {
    af[k] = uni(rng);
    ag[k] = uni(rng);
  }
  const double rho = 0.2 + 0.8 * std::abs(uni(rng));
  GardingTriple tr;
  tr.f.resize(m + 1);
  tr.g.resize(m + 1);
  tr.c.resize(m + 1);
  const double h = kPi / m;
  const double q = kPi / 4.0;
  for (int i = 0; i <= m; ++i) {
    const double a = i * h;
    const double w = window(a, 0.0, q / 8.0, 5.0 * q / 8.0, q);
    double vf = 0.0, vg = 0.0;
    for (int k = 0; k < 8; ++k) {
      vf += af[k] * std::sin((k + 1) * 8.0 * a);
      vg += ag[k] * std::sin((k + 1) * 8.0 * a);
    }
    tr.f[i] = vf * w;
    tr.g[i] = vg * w;
    tr.c[i] = rho * a * window(a, 0.0, q / 16.0, 3.0 * q / 4.0, q);
  }
  return tr;
}

double dot_h(const std::vector<double>& a, const std::vector<double>& b, double h) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc * h;
}

}  // namespace

std::vector<CheckReport> run_garding_suite(int seed_count, int n, const std::vector<double>& eps_list,
                                           unsigned long seed) {
  std::vector<CheckReport> out;
  const int m = n;
  const double h = kPi / m;

  std::vector<GardingTriple> triples;
  {
    std::mt19937_64 rng(seed);
    for (int s = 0; s < seed_count; ++s) triples.push_back(make_triple(m, rng));
  }

  std::vector<double> cbt(eps_list.size(), 0.0);
  for (std::size_t ei = 0; ei < eps_list.size(); ++ei) {
    const double eps = eps_list[ei];
    EpsKernelTable tab(m, eps);
    double worst = 0.0;
    for (const auto& tr : triples) {
      std::vector<double> ks_f = tab.apply_smooth(tr.f), ks_g = tab.apply_smooth(tr.g);
      std::vector<double> kt_g = tab.apply_transport(tr.g);
      std::vector<double> inner_t_g(m + 1), inner_s_f(m + 1), inner_s_g(m + 1);
      for (int i = 0; i <= m; ++i) {
        const double a = i * h;
        inner_t_g[i] = tr.g[i] * tab.mass_transport(a) - kt_g[i];
        inner_s_f[i] = tr.f[i] * tab.mass_smooth(a) - ks_f[i];
        inner_s_g[i] = tr.g[i] * tab.mass_smooth(a) - ks_g[i];
      }
      std::vector<double> cf(m + 1), ctf(m + 1), ctg(m + 1), cfg(m + 1);
      for (int i = 0; i <= m; ++i) {
        cf[i] = tr.c[i] * tr.f[i];
        const double ct = 9.0 * std::abs(tr.c[i]);
        ctf[i] = ct * tr.f[i];
        ctg[i] = ct * tr.g[i];
      }
      const double norms = dot_h(tr.f, tr.f, h) + dot_h(tr.g, tr.g, h);
      const double rhs_main = dot_h(ctf, inner_s_f, h) + dot_h(ctg, inner_s_g, h);
      const double lhs1 = dot_h(cf, inner_t_g, h);
      const double lhs2 = dot_h(cf, inner_s_g, h);
      worst = std::max(worst, std::max(lhs1 - rhs_main, lhs2 - rhs_main) / norms);
    }
    cbt[ei] = std::max(worst, 0.0);
    CheckReport rep;
    rep.name = "garding_cbt_eps" + std::to_string(eps);
    rep.measured = cbt[ei];
    rep.bound = 1e6;  // informational: the fitted remainder constant itself
    rep.pass = rep.measured <= rep.bound;
    out.push_back(rep);
  }

  {
    const double cmax = *std::max_element(cbt.begin(), cbt.end());
    const double cmin = *std::min_element(cbt.begin(), cbt.end());
    CheckReport rep;
    rep.name = "garding_cbt_stability";
    rep.measured = cmin > 1e-12 ? cmax / cmin : (cmax <= 1e-12 ? 1.0 : 1e12);
    rep.bound = 2.0;
    rep.pass = rep.measured < rep.bound;
    out.push_back(rep);
  }

  // pointwise kernel inequalities on a subsampled (alpha, beta) grid
  {
    double worst_pos1 = 1e300, worst_pos2 = 1e300, worst_fac4 = -1e300;
    for (double eps : eps_list) {
      for (int i = 1; i < 64; ++i) {
        for (int j = 1; j < 64; ++j) {
          const double a = kPi * i / 64.0, b = kPi * j / 64.0;
          const double dm = (a - b) * (a - b) + eps * eps;
          const double dp = (a + b) * (a + b) + eps * eps;
          const double s_diff = 1.0 / dm - 1.0 / dp;
          const double t_diff = eps * eps / (dm * dm) - eps * eps / (dp * dp);
          if (i != j) worst_pos1 = std::min(worst_pos1, s_diff);
          if (i != j) worst_pos2 = std::min(worst_pos2, t_diff);
          worst_fac4 = std::max(worst_fac4, t_diff - 4.0 * s_diff);
        }
      }
    }
    CheckReport p1{"garding_pointwise_positivity_smooth", -worst_pos1, 0.0, worst_pos1 > 0.0, ""};
    CheckReport p2{"garding_pointwise_positivity_squared", -worst_pos2, 0.0, worst_pos2 > 0.0, ""};
    CheckReport p4{"garding_pointwise_factor4", worst_fac4, 1e-12, worst_fac4 <= 1e-12, ""};
    out.push_back(p1);
    out.push_back(p2);
    out.push_back(p4);
  }

  // boundene / newlebound eps-uniform suprema with the canonical weight c = alpha * window;
  // the smooth weight is integrated directly (piecewise-linear corners would reintroduce
  // a log(1/eps) artifact the lemma excludes)
  {
    auto cw = [&](double a) { return a * window(a, 0.0, kPi / 16.0, kPi / 8.0, kPi / 4.0); };
    std::vector<double> sup_b(eps_list.size(), 0.0), sup_nl(eps_list.size(), 0.0);
    for (std::size_t ei = 0; ei < eps_list.size(); ++ei) {
      const double eps = eps_list[ei];
      for (int j = 0; j <= 64; ++j) {
        const double beta = kPi * j / 64.0;
        auto diff_s = [&](double al) { return (cw(al) - cw(beta)) * reg_kernel_smooth(al, beta, eps); };
        auto plus_s = [&](double al) { return cw(al) / ((al + beta) * (al + beta) + eps * eps); };
        const double t1 = gl_integrate_graded(0.0, kPi, beta, std::max(eps, 1e-4), diff_s, kPi / 128.0);
        const double t2 = gl_integrate_graded(0.0, kPi, 0.0, std::max(eps, 1e-4), plus_s, kPi / 128.0);
        sup_b[ei] = std::max(sup_b[ei], std::abs(-t1 + t2));
        auto diff_t = [&](double al) {
          const double um = (al - beta) * (al - beta) + eps * eps;
          return (cw(al) - cw(beta)) * eps * eps / (um * um);
        };
        auto plus_t = [&](double al) {
          const double up = (al + beta) * (al + beta) + eps * eps;
          return cw(al) * eps * eps / (up * up);
        };
        const double n1 = gl_integrate_graded(0.0, kPi, beta, std::max(eps / 2.0, 1e-5), diff_t, kPi / 128.0);
        const double n2 = gl_integrate_graded(0.0, kPi, 0.0, std::max(eps / 2.0, 1e-5), plus_t, kPi / 128.0);
        sup_nl[ei] = std::max(sup_nl[ei], std::abs(-n1 + n2));
      }
    }
    // uniform boundedness shows up either as saturation (variation < 2x) or decay;
    // genuine log-divergence grows ~40% per eps decade and fails both branches
    auto stability = [&](const std::vector<double>& sup, const std::string& name) {
      const double mx = *std::max_element(sup.begin(), sup.end());
      const double mn = *std::min_element(sup.begin(), sup.end());
      // saturation shows a vanishing final increment; a log(1/eps) artifact keeps
      // adding a near-constant increment per eps decade
      const bool still_growing = sup.back() > sup[sup.size() - 2] * 1.01;
      bool decaying = true;
      for (std::size_t i = 0; i + 1 < sup.size(); ++i)
        if (sup[i + 1] > sup[i] * 1.02) decaying = false;
      CheckReport rep;
      rep.name = name;
      rep.measured = mn > 0.0 ? mx / mn : 1.0;
      rep.bound = 2.0;
      rep.pass = (rep.measured < 2.0 && !still_growing) || decaying;
      std::ostringstream ps;
      ps << "sup per eps:";
      for (double v : sup) ps << ' ' << v;
      rep.params = ps.str();
      return rep;
    };
    out.push_back(stability(sup_b, "garding_boundene_uniform"));
    out.push_back(stability(sup_nl, "garding_newlebound_uniform"));
  }

  std::ostringstream ps;
  ps << "seeds=" << seed_count << " n=" << n << " seed=" << seed;
  for (auto& rep : out)
    if (rep.params.empty()) rep.params = ps.str();
  return out;
}

std::vector<CheckReport> run_identity_suite(int n, const std::vector<double>& eps_list) {
  std::vector<CheckReport> out;
  (void)eps_list;

  {  // integralcancel: quadrature of the derivative form vs the boundary expression
    const double eps = 0.1, alpha = kPi / 2.0;
    auto f = [&](double b) {
      const double u = alpha - b;
      const double d = u * u + eps * eps;
      return 1.0 / d - 2.0 * eps * eps / (d * d);
    };
    const double quad = gl_integrate_graded(0.0, kPi, alpha, eps / 4.0, f);
    const double boundary = (alpha - kPi) / ((alpha - kPi) * (alpha - kPi) + eps * eps) -
                            alpha / (alpha * alpha + eps * eps);
    CheckReport rep{"identity_integralcancel", std::abs(quad - boundary), 1e-10, false, "eps=0.1 alpha=pi/2"};
    rep.pass = rep.measured <= rep.bound;
    out.push_back(rep);
  }

  {  // H(H(g)) = -g and isometry on mean-zero data
    Grid grid(n);
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i) {
      const double a = grid.alpha(i);
      g[i] = std::sin(a) + 0.3 * std::cos(3.0 * a) - 0.2 * std::sin(7.0 * a);
    }
    std::vector<double> hh = hilbert_transform(hilbert_transform(g));
    double winv = 0.0;
    for (int i = 0; i < n; ++i) winv = std::max(winv, std::abs(hh[i] + g[i]));
    CheckReport r1{"identity_hilbert_involution", winv, 1e-12, winv <= 1e-12, "n=" + std::to_string(n)};
    out.push_back(r1);
    const double n0 = l2_norm(g), n1 = l2_norm(hilbert_transform(g));
    CheckReport r2{"identity_hilbert_isometry", std::abs(n0 - n1), 1e-12, std::abs(n0 - n1) <= 1e-12, ""};
    out.push_back(r2);
  }

  {  // line identities through periodization: H(eps/(b^2+eps^2)) = b/(b^2+eps^2).
    // Image sums have the closed forms sum 1/(z+2pi m) = cot(z/2)/2 and
    // sum 1/(z+2pi m)^2 = csc^2(z/2)/4 at z = b - i eps.
    const double eps = 0.1;
    const int ni = 2048;
    Grid grid(ni);
    std::vector<double> p(ni), q(ni);
    for (int i = 0; i < ni; ++i) {
      const cplx z(grid.alpha(i), -eps);
      const cplx cot_half = std::cos(z / 2.0) / std::sin(z / 2.0);
      const cplx csc2 = 1.0 / (std::sin(z / 2.0) * std::sin(z / 2.0));
      p[i] = 0.5 * cot_half.imag();   // periodization of eps/(b^2+eps^2)
      q[i] = csc2.imag() / 8.0;       // periodization of b eps/(b^2+eps^2)^2
    }
    std::vector<double> hp = hilbert_transform(p);
    std::vector<double> hq = hilbert_transform(q);
    double worst = 0.0, worst2 = 0.0;
    for (int i = 0; i < ni; ++i) {
      const double b = grid.alpha(i);
      if (std::abs(b) > kPi / 2.0) continue;
      const cplx z(b, -eps);
      const cplx cot_half = std::cos(z / 2.0) / std::sin(z / 2.0);
      const cplx csc2 = 1.0 / (std::sin(z / 2.0) * std::sin(z / 2.0));
      worst = std::max(worst, std::abs(hp[i] - 0.5 * cot_half.real()));
      worst2 = std::max(worst2, std::abs(hq[i] - csc2.real() / 8.0));
    }
    // the discrete transform drops the mean; the line identity targets are mean-free
    CheckReport r{"identity_hilbert_poisson", worst, 1e-3, worst <= 1e-3,
                  "eps=0.1 window=[-pi/2,pi/2], closed-form periodization"};
    out.push_back(r);
    CheckReport r2{"identity_hilbert_transport", worst2, 1e-3, worst2 <= 1e-3,
                   "eps=0.1, closed-form periodization"};
    out.push_back(r2);
  }
  return out;
}

namespace {

struct LimitFn {
  std::string name;
  std::function<double(double)> g;
  std::function<double(double)> dg;
};

std::vector<LimitFn> limit_functions() {
  std::vector<LimitFn> fns;
  fns.push_back({"square", [](double a) { return a * a; }, [](double a) { return 2.0 * a; }});
  fns.push_back({"bump",
                 [](double a) { return std::exp(-std::pow((a - 0.4) / 0.25, 2.0)); },
                 [](double a) {
                   const double u = (a - 0.4) / 0.25;
                   return std::exp(-u * u) * (-2.0 * u / 0.25);
                 }});
  fns.push_back({"sin2", [](double a) { return std::sin(2.0 * a); },
                 [](double a) { return 2.0 * std::cos(2.0 * a); }});
  fns.push_back({"cubic", [](double a) { return a * a * a - 0.2 * a; },
                 [](double a) { return 3.0 * a * a - 0.2; }});
  fns.push_back({"cos3", [](double a) { return std::cos(3.0 * a); },
                 [](double a) { return -3.0 * std::sin(3.0 * a); }});
  return fns;
}

// H^1[0, pi/4] norm of samples on a uniform fine grid (trapezoid + 4th-order FD)
double h1_window_norm(const std::vector<double>& v, double h) {
  const int q = static_cast<int>(v.size());
  std::vector<double> d(q, 0.0);
  for (int i = 2; i < q - 2; ++i)
    d[i] = (-v[i + 2] + 8.0 * v[i + 1] - 8.0 * v[i - 1] + v[i - 2]) / (12.0 * h);
  d[0] = (v[1] - v[0]) / h;
  d[1] = (v[2] - v[0]) / (2.0 * h);
  d[q - 1] = (v[q - 1] - v[q - 2]) / h;
  d[q - 2] = (v[q - 1] - v[q - 3]) / (2.0 * h);
  double acc = 0.0;
  for (int i = 0; i < q; ++i) {
    const double w = (i == 0 || i == q - 1) ? 0.5 : 1.0;
    acc += w * (v[i] * v[i] + d[i] * d[i]) * h;
  }
  return std::sqrt(acc);
}

double b1_error_norm(const LimitFn& fn, double eps) {
  const int q = 384;
  const double h = (kPi / 4.0) / q;
  std::vector<double> v(q);
  for (int i = 0; i < q; ++i) {
    const double a = (i + 1) * h;
    auto f = [&](double b) { return (fn.g(a) - fn.g(b)) * reg_kernel_transport(a, b, eps); };
    const double integral = gl_integrate_graded(0.0, 2.0 * a, a, std::min(eps, a / 4.0), f);
    v[i] = a * (integral * 2.0 / kPi - fn.dg(a));
  }
  return h1_window_norm(v, h);
}

double b2_error_norm(const LimitFn& fn, double eps) {
  const int q = 384;
  const double h = (kPi / 4.0) / q;
  std::vector<double> v(q);
  for (int i = 0; i < q; ++i) {
    const double a = (i + 1) * h;
    auto freg = [&](double b) { return (fn.g(a) - fn.g(b)) * reg_kernel_smooth(a, b, eps); };
    const double reg = gl_integrate_graded(0.0, 2.0 * a, a, std::min(eps, a / 4.0), freg);
    // pv over the symmetric window, written as pair sums so the odd parts cancel
    auto fpv = [&](double u) { return (2.0 * fn.g(a) - fn.g(a - u) - fn.g(a + u)) / (u * u); };
    const double pv = gl_integrate_graded(0.0, a, 0.0, a / 16.0, fpv);
    v[i] = reg - pv;
  }
  return h1_window_norm(v, h);
}

}  // namespace

std::vector<CheckReport> run_limit_suite(const std::vector<double>& eps_list) {
  std::vector<CheckReport> out;

  {  // exact zeros of the corrections at j = 0 and for constant data
    const double b10 = b_correction(0, 1, 0.7, 1e-2);
    const double b20 = b_correction(0, 2, 0.7, 1e-2);
    CheckReport r{"limit_b_zero_order", std::abs(b10) + std::abs(b20), 0.0, b10 == 0.0 && b20 == 0.0,
                  "b_{1,0} = b_{2,0} = 0"};
    out.push_back(r);
    // constant g: the difference kernels annihilate it and g' = 0, so the error vanishes
    LimitFn cst{"const", [](double) { return 1.0; }, [](double) { return 0.0; }};
    const double e1 = b1_error_norm(cst, 1e-2);
    CheckReport rc{"limit_constant_annihilation", e1, 1e-12, e1 <= 1e-12, ""};
    out.push_back(rc);
  }

  std::vector<double> epss = eps_list;
  if (epss.empty()) epss = {2e-2, 1e-2, 5e-3, 2.5e-3};

  for (const LimitFn& fn : limit_functions()) {
    std::vector<double> e1s, e2s;
    for (double e : epss) {
      e1s.push_back(b1_error_norm(fn, e));
      e2s.push_back(b2_error_norm(fn, e));
    }
    auto rate = [&](const std::vector<double>& es) {
      double sx = 0, sy = 0, sxx = 0, sxy = 0;
      const int k = static_cast<int>(es.size());
      for (int i = 0; i < k; ++i) {
        const double x = std::log(epss[i]), y = std::log(std::max(es[i], 1e-300));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
      }
      return (k * sxy - sx * sy) / (k * sxx - sx * sx);
    };
    const double r1 = rate(e1s), r2 = rate(e2s);
    CheckReport c1{"limit_b1_rate_" + fn.name, std::abs(r1 - 1.0), 0.2, std::abs(r1 - 1.0) <= 0.2,
                   "exponent=" + std::to_string(r1)};
    CheckReport c2{"limit_b2_rate_" + fn.name, std::abs(r2 - 1.0), 0.2, std::abs(r2 - 1.0) <= 0.2,
                   "exponent=" + std::to_string(r2)};
    out.push_back(c1);
    out.push_back(c2);
  }
  return out;
}

std::vector<CheckReport> run_kernel_limit_suite(int curve_count, int n, unsigned long seed) {
  std::vector<CheckReport> out;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);

  auto check_curve = [&](const PeriodicInterface& curve, const std::string& name) {
    CurveSpectra cs(curve);
    Spectrum dp1 = derivative(cs.p1, 1), ds2 = derivative(cs.s2, 1);
    std::vector<double> l2 = l2_coefficient(curve);
    const double d = 1e-4;
    double worst = 0.0;
    for (int q = 0; q < 16; ++q) {
      const int i = (q * curve.n) / 16;
      const double a = curve.alpha[i];
      auto Q = [&](double beta) {
        const double x1 = curve.f1[i] - (beta + eval_series_real(cs.p1, beta));
        const double x2 = curve.f2[i] - eval_series_real(cs.s2, beta);
        double k1, k2;
        kernel_grad(x1, x2, k1, k2);
        const double df1 = 1.0 + eval_series_real(dp1, beta);
        const double df2 = eval_series_real(ds2, beta);
        return -(k1 * df1 + k2 * df2) * (a - beta) * (a - beta);
      };
      const double fd = 0.5 * (Q(a + d) + Q(a - d));
      worst = std::max(worst, std::abs(fd - l2[i]) / std::max(std::abs(l2[i]), 1e-12));
    }
    CheckReport rep{"kernel_limit_" + name, worst, 1e-5, worst <= 1e-5, "n=" + std::to_string(n)};
    out.push_back(rep);
  };

  {  // flat: limit 2 everywhere
    Grid grid(n);
    std::vector<double> f1(n), f2(n, 0.0);
    for (int i = 0; i < n; ++i) f1[i] = grid.alpha(i);
    check_curve(PeriodicInterface(f1, f2, 1.0), "flat");
  }
  {  // 45-degree: limit 1
    Grid grid(n);
    std::vector<double> f1(n), f2(n);
    for (int i = 0; i < n; ++i) {
      f1[i] = grid.alpha(i);
      f2[i] = grid.alpha(i) - 2.0 * kPi * std::floor((grid.alpha(i) + kPi) / kTwoPi);
    }
    // a genuinely periodic 45-degree slope: f2 = f1 - alpha-slope is not periodic, use sin
    for (int i = 0; i < n; ++i) f2[i] = std::sin(grid.alpha(i));
    PeriodicInterface c45(f1, f2, 1.0);
    // check the closed form at the node where f2' = 1 (alpha = 0): formula gives 1
    std::vector<double> l2 = l2_coefficient(c45);
    const int zi = grid.zero_index();
    CheckReport rep{"kernel_limit_diag45_value", std::abs(l2[zi] - 1.0), 1e-12,
                    std::abs(l2[zi] - 1.0) <= 1e-12, "f1'=f2'=1 at alpha=0"};
    out.push_back(rep);
    check_curve(c45, "diag45");
  }
  for (int cidx = 0; cidx < curve_count; ++cidx) {
    Grid grid(n);
    std::vector<double> f1(n), f2(n);
    double ak[4], bk[4], pk[4], qk[4];
    for (int k = 0; k < 4; ++k) {
      ak[k] = 0.3 * uni(rng) / ((k + 1) * (k + 1));
      bk[k] = 0.3 * uni(rng) / ((k + 1) * (k + 1));
      pk[k] = kPi * uni(rng);
      qk[k] = kPi * uni(rng);
    }
    for (int i = 0; i < n; ++i) {
      const double a = grid.alpha(i);
      double v1 = a, v2 = 0.0;
      for (int k = 0; k < 4; ++k) {
        v1 += ak[k] * std::sin((k + 1) * a + pk[k]);
        v2 += bk[k] * std::cos((k + 1) * a + qk[k]);
      }
      f1[i] = v1;
      f2[i] = v2;
    }
    check_curve(PeriodicInterface(f1, f2, 1.0), "random" + std::to_string(cidx));
  }
  return out;
}

std::vector<CheckReport> run_all_checks(int n, unsigned long seed) {
  std::vector<double> eps_list = {1e-1, 1e-2, 1e-3, 1e-4};
  std::vector<CheckReport> all;
  auto append = [&](std::vector<CheckReport> v) {
    for (auto& r : v) all.push_back(std::move(r));
  };
  append(run_garding_suite(50, n, eps_list, seed));
  append(run_identity_suite(n, eps_list));
  append(run_limit_suite({}));
  append(run_kernel_limit_suite(10, std::min(n, 256), seed + 1));
  std::stable_sort(all.begin(), all.end(),
                   [](const CheckReport& a, const CheckReport& b) { return a.name < b.name; });
  return all;
}

std::string render_check_json(const std::vector<CheckReport>& reports) {
  nlohmann::json j;
  j["kind"] = "verification";
  j["reports"] = nlohmann::json::array();
  for (const auto& r : reports) {
    nlohmann::json e;
    e["name"] = r.name;
    e["measured"] = r.measured;
    e["bound"] = r.bound;
    e["pass"] = r.pass;
    e["params"] = r.params;
    j["reports"].push_back(e);
  }
  j["failed"] = count_failures(reports);
  return j.dump(2) + "\n";
}

int count_failures(const std::vector<CheckReport>& reports) {
  int failed = 0;
  for (const auto& r : reports)
    if (!r.pass) ++failed;
  return failed;
}

}  // namespace muskat
