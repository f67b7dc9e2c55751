#include "muskat/quadrature.hpp"

#include <cmath>

#include "muskat/errors.hpp"

namespace muskat {

cplx pv_integral(const std::vector<cplx>& g, int singular_index, PvKernel kernel) {
  const int n = static_cast<int>(g.size());
  if (n % 2 != 0) throw ValidationError("pv_integral: even grid required");
  const Grid grid(n);
  const double ai = grid.alpha(singular_index);
  cplx acc(0.0);
  for (int o = 1; o < n; o += 2) {
    const int j = ((singular_index - o) % n + n) % n;
    double u = ai - grid.alpha(j);           // plain node difference
    double uw = std::remainder(u, kTwoPi);   // wrapped for the periodic kernel
    double w;
    switch (kernel) {
      case PvKernel::LineCauchy:
        w = 1.0 / uw;
        break;
      case PvKernel::CotHalf:
        w = 1.0 / std::tan(0.5 * uw) / kTwoPi;
        break;
      default:
        throw ValidationError("pv_integral: unknown kernel");
    }
    acc += w * g[j];
  }
  return acc * (2.0 * grid.dalpha);
}

const std::array<double, 8>& GaussLegendre8::nodes() {
  static const std::array<double, 8> v = {
      -0.96028985649753623168, -0.79666647741362673959, -0.52553240991632898582, -0.18343464249564980494,
      0.18343464249564980494,  0.52553240991632898582,  0.79666647741362673959,  0.96028985649753623168};
  return v;
}

const std::array<double, 8>& GaussLegendre8::weights() {
  static const std::array<double, 8> v = {
      0.10122853629037625915, 0.22238103445337447054, 0.31370664587788728734, 0.36268378337836198297,
      0.36268378337836198297, 0.31370664587788728734, 0.22238103445337447054, 0.10122853629037625915};
  return v;
}

double pv_monomial_integral(int j, double alpha) {
  if (j <= 1) return 0.0;
  // p.v. over the symmetric window [0, 2a]: only even binomial orders survive.
  double fact = 1.0;
  for (int q = 2; q <= j; ++q) fact *= q;
  double binom = 1.0, acc = 0.0;
  for (int l = 1; l <= j; ++l) {
    binom = binom * double(j - l + 1) / double(l);
    if (l % 2 == 0) acc += binom / double(l - 1);
  }
  double p = 1.0;
  for (int q = 1; q < j; ++q) p *= alpha;
  return -2.0 * acc * p / fact;
}

double b_correction(int j, int flavor, double alpha, double eps) {
  if (j < 0) throw ValidationError("b_correction: j >= 0 required");
  if (flavor != 1 && flavor != 2) throw ValidationError("b_correction: flavor must be 1 or 2");
  if (!(eps > 0.0)) throw ValidationError("b_correction: eps > 0 required");
  if (j == 0) return 0.0;
  if (alpha <= 0.0) return 0.0;

  double fact = 1.0;
  for (int q = 2; q <= j; ++q) fact *= q;
  auto monomial_diff = [&](double b) {
    double pa = 1.0, pb = 1.0;
    for (int q = 0; q < j; ++q) {
      pa *= alpha;
      pb *= b;
    }
    return (pa - pb) / fact;
  };

  const double scale = std::min(eps, alpha / 4.0);
  if (flavor == 1) {
    auto f = [&](double b) { return monomial_diff(b) * reg_kernel_transport(alpha, b, eps); };
    const double integral = gl_integrate_graded(0.0, 2.0 * alpha, alpha, scale, f);
    double lead = 1.0;  // alpha^{j-1} / (j-1)!
    for (int q = 1; q < j; ++q) lead *= alpha / double(q);
    return integral * (2.0 / kPi) - lead;
  }
  auto f = [&](double b) { return monomial_diff(b) * reg_kernel_smooth(alpha, b, eps); };
  const double integral = gl_integrate_graded(0.0, 2.0 * alpha, alpha, scale, f);
  return integral - pv_monomial_integral(j, alpha);
}

namespace {

// Integral of the Lagrange cubic through (x0 + k*dx, y[k]), k = 0..3, over [a, b].
// Newton form in s = (x - x0)/dx: p(s) = c0 + c1 s + c2 s(s-1) + c3 s(s-1)(s-2).
cplx cubic_cell_integral(double x0, double dx, const cplx y[4], double a, double b) {
  const cplx c0 = y[0];
  const cplx c1 = y[1] - y[0];
  const cplx c2 = (y[2] - 2.0 * y[1] + y[0]) / 2.0;
  const cplx c3 = (y[3] - 3.0 * y[2] + 3.0 * y[1] - y[0]) / 6.0;
  auto F = [&](double s) {
    const double s2 = s * s, s3 = s2 * s, s4 = s2 * s2;
    // integrals of 1, s, s(s-1), s(s-1)(s-2)
    const double i0 = s;
    const double i1 = s2 / 2.0;
    const double i2 = s3 / 3.0 - s2 / 2.0;
    const double i3 = s4 / 4.0 - s3 + s2;
    return c0 * i0 + c1 * i1 + c2 * i2 + c3 * i3;
  };
  const double sa = (a - x0) / dx, sb = (b - x0) / dx;
  return (F(sb) - F(sa)) * dx;
}

}  // namespace

std::vector<cplx> d_minus_once(const std::vector<cplx>& h, const Grid& grid, const AntiderivativeStack& stack,
                               bool check_support) {
  const int n = grid.n;
  if (static_cast<int>(h.size()) != n) throw ValidationError("d_minus: sample size mismatch");
  const double tau = stack.tau;

  // The sample at -tau itself is read as the right-limit value; the support check
  // applies strictly left of the boundary.
  if (check_support) {
    for (int i = 0; i < n; ++i)
      if (grid.alpha(i) < -tau - grid.dalpha / 2.0 && std::abs(h[i]) > 1e-12)
        throw NumericalError("d_minus: input violates support condition left of -tau");
  }

  std::vector<cplx> q(n);
  for (int i = 0; i < n; ++i) q[i] = stack.weight(grid.alpha(i)) * h[i];

  std::vector<cplx> out(n, cplx(0.0));
  int i0 = n;  // first node strictly right of -tau
  for (int i = 0; i < n; ++i)
    if (grid.alpha(i) > -tau + 1e-15) {
      i0 = i;
      break;
    }
  if (i0 >= n) return out;

  auto node_val = [&](int i) -> cplx {
    if (i < 0 || i >= n) return cplx(0.0);
    return grid.alpha(i) < -tau - 1e-15 ? cplx(0.0) : q[i];
  };

  // partial boundary cell [-tau, alpha_{i0}] via one-sided cubic through i0..i0+3;
  // when -tau is itself a node its right-limit sample anchors the fit
  {
    const bool on_node = i0 > 0 && grid.alpha(i0 - 1) >= -tau - 1e-15;
    const int base = on_node ? i0 - 1 : i0;
    cplx y[4];
    for (int k = 0; k < 4; ++k) y[k] = node_val(std::min(base + k, n - 1));
    out[i0] = cubic_cell_integral(grid.alpha(base), grid.dalpha, y, -tau, grid.alpha(i0));
  }
  for (int i = i0; i + 1 < n; ++i) {
    int base = i - 1;
    // keep the stencil right of the support boundary unless -tau is a node
    const int lowest = (i0 > 0 && grid.alpha(i0 - 1) >= -tau - 1e-15) ? i0 - 1 : i0;
    if (base < lowest) base = lowest;
    if (base + 3 > n - 1) base = n - 4;
    cplx y[4];
    for (int k = 0; k < 4; ++k) y[k] = node_val(base + k);
    out[i + 1] = out[i] + cubic_cell_integral(grid.alpha(base), grid.dalpha, y, grid.alpha(i), grid.alpha(i + 1));
  }
  return out;
}

std::vector<cplx> d_minus(const std::vector<cplx>& h, const Grid& grid, const AntiderivativeStack& stack) {
  if (stack.depth < 1) throw ValidationError("d_minus: depth >= 1 required");
  std::vector<cplx> cur = d_minus_once(h, grid, stack, true);
  for (int d = 1; d < stack.depth; ++d) cur = d_minus_once(cur, grid, stack, false);
  return cur;
}

}  // namespace muskat
