#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <tuple>

#include "muskat/complexify.hpp"
#include "oracles.hpp"

using namespace muskat;

namespace {

TurnoverContext make_context_at_t0(int n, int m, double amplitude) {
  PeriodicInterface c = make_preset("turnover", n, 1.0, amplitude);
  TurnoverSpeeds sp = turnover_speeds(c);
  TurnoverFrame frame{sp.Z1, sp.Z2, sp.dZ1dt, sp.dZ2dt};
  PeriodicInterface pinned = apply_frame(c, frame);
  const double kappa = kappa_eval(pinned, frame, sp.dZ1dt, c.rho_bar * kKernelScale);
  TransportState tr;
  tr.kappa = kappa;
  tr.kappa0_sign = kappa > 0.0 ? 1 : -1;
  tr.tau = 0.0;
  return TurnoverContext(std::move(pinned), frame, ProfileSet(0.5, 0.05), m, 0.0, tr);
}

const TurnoverContext& context_at_t0(int n, int m, double amplitude = 0.3) {
  static std::map<std::tuple<int, int, double>, TurnoverContext> cache;
  auto key = std::make_tuple(n, m, amplitude);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, make_context_at_t0(n, m, amplitude)).first;
  return it->second;
}

// route B of the consistency check: tau' f~^{+(m+1)} + d^m[(G - dP/dt) lambda0 1_{>=0}],
// with G assembled by grid quadrature and differentiated spectrally
std::vector<double> oracle_rhs(const TurnoverContext& ctx, int mu) {
  const int n = ctx.grid().n;
  const int m = ctx.m();
  const double tau = ctx.transport().tau;
  std::vector<double> G = transformed_rhs(ctx, mu);
  Spectrum gs = spectrum_of(G);
  std::vector<Spectrum> gd;
  for (int j = 0; j <= m; ++j) gd.push_back(derivative(gs, j));
  const int zi = ctx.grid().zero_index();
  std::vector<double> g0(m + 1);
  for (int j = 0; j <= m; ++j) g0[j] = real_samples_of(gd[j])[zi];

  std::vector<double> out(n, 0.0);
  const double taup = ctx.transport().tau_prime();
  for (int i = 0; i < n; ++i) {
    const double a = ctx.grid().alpha(i) + tau;
    if (a <= 1e-12) continue;
    Jet lam0 = ctx.profiles().lambda0_jet(a, m);
    double gplus = 0.0, binom = 1.0;
    for (int j = 0; j <= m; ++j) {
      if (j > 0) binom = binom * double(m - j + 1) / double(j);
      double dpdt = 0.0, pw = 1.0, fact = 1.0;
      for (int l = j; l <= m; ++l) {
        dpdt += g0[l] * pw / fact;
        pw *= a;
        fact *= (l - j + 1);
      }
      const double gj = eval_series_real(gd[j], a);
      gplus += binom * (gj - dpdt) * lam0.derivative(m - j).real();
    }
    out[i] = taup * ctx.fplus_deriv(mu, m + 1, cplx(a, 0.0)).real() + gplus;
  }
  return out;
}

double rel_l2(const std::vector<cplx>& got, const std::vector<double>& expect) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < got.size(); ++i) {
    num += std::norm(got[i] - expect[i]);
    den += expect[i] * expect[i];
  }
  return std::sqrt(num / std::max(den, 1e-300));
}

}  // namespace

TEST_CASE("context samplers agree with the split") {
  const TurnoverContext& ctx = context_at_t0(256, 2);
  SplitPlusResult sp = split_plus(ctx.pinned(), ctx.profiles(), 2);
  for (int i = 0; i < ctx.grid().n; i += 5) {
    const cplx z(ctx.grid().alpha(i), 0.0);
    CHECK(std::abs(ctx.fplus_deriv(1, 0, z) - sp.fplus1[i]) < 1e-11);
    CHECK(std::abs(ctx.fplus_deriv(2, 0, z) - sp.fplus2[i]) < 1e-11);
    CHECK(std::abs(ctx.fl_deriv(2, 0, z) - sp.fl2[i]) < 1e-11);
  }
  // vanishing to order m at 0+
  for (int ord = 0; ord <= 2; ++ord) {
    CHECK(std::abs(ctx.fplus_deriv(1, ord, cplx(1e-9, 0.0))) < 1e-8);
    CHECK(std::abs(ctx.fplus_deriv(2, ord, cplx(1e-9, 0.0))) < 1e-8);
  }
  // sampler derivative consistency: order 1 matches finite differences of order 0
  const double h = 1e-6;
  for (double a : {0.21, 0.52, 0.83}) {
    const cplx fd =
        (ctx.fplus_deriv(2, 0, cplx(a + h, 0.0)) - ctx.fplus_deriv(2, 0, cplx(a - h, 0.0))) / (2.0 * h);
    CHECK(std::abs(fd - ctx.fplus_deriv(2, 1, cplx(a, 0.0))) < 1e-7);
  }
}

TEST_CASE("transformed rhs reduces to the plain rhs in the identity frame") {
  // turnover preset at t = 0 has Z1 = 0, Z2 = -pi/2 exactly, so x(alpha) = alpha and
  // G - w f~' must equal the plain Muskat right-hand side
  const TurnoverContext& ctx = context_at_t0(256, 2);
  REQUIRE(std::abs(ctx.frame().sin_coeff()) < 1e-8);
  MuskatRhs plain = muskat_rhs(ctx.pinned());
  CurveSpectra cs(ctx.pinned());
  for (int mu = 1; mu <= 2; ++mu) {
    std::vector<double> G = transformed_rhs(ctx, mu);
    std::vector<double> dmu = mu == 1 ? cs.d_f1(1) : cs.d_f2(1);
    const std::vector<double>& ref = mu == 1 ? plain.df1 : plain.df2;
    for (int i = 0; i < 256; ++i) {
      const double w = ctx.frame().w(ctx.grid().alpha(i));
      CHECK(std::abs(G[i] - w * dmu[i] - ref[i]) < 1e-10);
    }
  }
}

TEST_CASE("jet derivatives of G match spectral derivatives of the assembled G") {
  // n = 256: both routes are quadratures whose agreement is limited by the pole strip
  const TurnoverContext& ctx = context_at_t0(256, 2);
  for (int mu = 1; mu <= 2; ++mu) {
    std::vector<double> G = transformed_rhs(ctx, mu);
    Spectrum gs = spectrum_of(G);
    for (double a : {0.4, 0.9, 1.7, -0.6}) {
      std::array<cplx, kJetMax + 1> jet = g_derivatives_at(ctx, 0.0, mu, a);
      for (int j = 0; j <= 2; ++j) {
        const double fft_route = eval_series_real(derivative(gs, j), a);
        CHECK(std::abs(jet[j] - fft_route) < 1e-7 * std::max(1.0, std::abs(fft_route)));
      }
    }
  }
}

TEST_CASE("F2 boundary-split form equals the unsplit pv integral at gamma 0") {
  const TurnoverContext& ctx = context_at_t0(256, 2);
  CompactRhs rhs = modified_rhs_compact(ctx, 0.0, 2);
  const double s = ctx.scale();
  const double edge = ctx.support_edge() + 0.1;
  CurveSpectra cs(ctx.pinned());
  auto Kf = [&](double a, double b) {
    const double x1 = cs.f1(cplx(a, 0.0)).real() - cs.f1(cplx(b, 0.0)).real();
    const double x2 = cs.f2(cplx(a, 0.0)).real() - cs.f2(cplx(b, 0.0)).real();
    return std::sin(x1) / (std::cosh(x2) - std::cos(x1));
  };
  for (int i : {138, 150, 170}) {
    const double a = ctx.grid().alpha(i);
    REQUIRE(a > 0.05);
    auto fp = [&](double b) { return ctx.fplus_deriv(2, 3, cplx(b, 0.0)).real(); };
    // pv over [0, edge] with pairs around a
    const double r = std::min(a, edge - a);
    auto paired = [&](double u) { return Kf(a, a + u) * fp(a + u) + Kf(a, a - u) * fp(a - u); };
    double pv = gl_integrate(0.0, r, 48, paired);
    if (a - r > 1e-12) {
      auto left = [&](double b) { return Kf(a, b) * fp(b); };
      pv += gl_integrate(0.0, a - r, 32, left);
    }
    if (a + r < edge) {
      auto right = [&](double b) { return Kf(a, b) * fp(b); };
      pv += gl_integrate(a + r, edge, 32, right);
    }
    const double lam = ctx.profiles().lambda(a);
    const double expect = -lam * s * pv;
    CHECK(std::abs(rhs.kernel_split[i] - expect) < 1e-7 * std::max(1.0, std::abs(expect)));
  }
}

TEST_CASE("compact operator vanishes on the flat pinned curve") {
  const int n = 128;
  Grid grid(n);
  std::vector<double> f1(n), f2(n, 0.0);
  for (int i = 0; i < n; ++i) f1[i] = grid.alpha(i);
  PeriodicInterface flat(f1, f2, 1.0);
  TurnoverFrame frame{0.0, -kPi / 2.0, 0.0, 0.0};
  TransportState tr;
  tr.kappa = kappa_eval(flat, frame, 0.0, kKernelScale);
  tr.kappa0_sign = 1;
  TurnoverContext ctx(flat, frame, ProfileSet(0.5, 0.05), 2, 0.0, tr);
  CompactRhs rhs = modified_rhs_compact(ctx, 0.0, 2);
  for (int i = 0; i < n; ++i) CHECK(std::abs(rhs.total[i]) < 1e-12);
}

TEST_CASE("compact T(h) at gamma 0 matches the m-times differentiated real evolution") {
  const TurnoverContext& ctx = context_at_t0(256, 2);
  for (int mu = 1; mu <= 2; ++mu) {
    CompactRhs rhs = modified_rhs_compact(ctx, 0.0, mu);
    std::vector<double> oracle = oracle_rhs(ctx, mu);
    CHECK(rel_l2(rhs.total, oracle) < 1e-6);
  }
}

TEST_CASE("compact T(h) consistency holds at order m = 1 as well") {
  const TurnoverContext& ctx = context_at_t0(256, 1);
  CompactRhs rhs = modified_rhs_compact(ctx, 0.0, 2 - 1);
  std::vector<double> oracle = oracle_rhs(ctx, 1);
  CHECK(rel_l2(rhs.total, oracle) < 1e-6);
}

TEST_CASE("gamma continuity of the compact operator") {
  // lift the contour slightly: T(h) moves by O(gamma t) only
  PeriodicInterface c = make_preset("turnover", 128, 1.0, 0.3);
  TurnoverSpeeds sp = turnover_speeds(c);
  TurnoverFrame frame{sp.Z1, sp.Z2, sp.dZ1dt, sp.dZ2dt};
  PeriodicInterface pinned = apply_frame(c, frame);
  const double kappa = kappa_eval(pinned, frame, sp.dZ1dt, kKernelScale);
  TransportState tr;
  tr.kappa = kappa;
  tr.kappa0_sign = kappa > 0.0 ? 1 : -1;
  TurnoverContext ctx(pinned, frame, ProfileSet(0.5, 0.05), 2, 1e-3, tr);

  CompactRhs base = modified_rhs_compact(ctx, 0.0, 2);
  CompactRhs lifted = modified_rhs_compact(ctx, 0.5, 2);
  double scale = 0.0, dv = 0.0;
  for (int i = 0; i < 128; ++i) {
    scale = std::max(scale, std::abs(base.total[i]));
    dv = std::max(dv, std::abs(lifted.total[i] - base.total[i]));
  }
  CHECK(dv < 0.05 * scale);
}

TEST_CASE("refined R-T condition at t = 0 and small-t continuity") {
  const TurnoverContext& ctx = context_at_t0(256, 2);
  RefinedRtReport rep = refined_rt_check(ctx, 0.0);
  CHECK(rep.min_margin > 0.0);
  // at t = 0 everything is real and -Re L2 has the closed form
  CurveSpectra cs(ctx.pinned());
  std::vector<double> d1 = cs.d_f1(1), d2 = cs.d_f2(1);
  for (const RefinedRtRow& row : rep.rows) {
    CHECK(std::abs(row.L1.imag()) < 1e-9);
    CHECK(std::abs(row.L2.imag()) < 1e-10);
    const int i = static_cast<int>(std::lround((row.a + kPi) / ctx.grid().dalpha));
    const double expect = 2.0 * d1[i] / (d1[i] * d1[i] + d2[i] * d2[i]);
    CHECK(-row.L2.real() == doctest::Approx(expect).epsilon(1e-10));
  }

  // small complexification time: the certified margin moves by less than half
  PeriodicInterface pinned = ctx.pinned();
  TurnoverContext lifted(pinned, ctx.frame(), ctx.profiles(), 2, 1e-3, ctx.transport());
  RefinedRtReport rep2 = refined_rt_check(lifted, 1.0);
  CHECK(rep2.min_margin > 0.5 * rep.min_margin);
}
