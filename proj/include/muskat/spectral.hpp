#pragma once

#include <complex>
#include <vector>

#include "muskat/errors.hpp"

namespace muskat {

using cplx = std::complex<double>;

constexpr double kPi = 3.14159265358979323846264338327950288;
constexpr double kTwoPi = 2.0 * kPi;

// Uniform 2pi-periodic grid on [-pi, pi): alpha_i = -pi + i*dalpha. alpha = 0 sits at i = n/2.
struct Grid {
  int n = 0;
  double dalpha = 0.0;
  explicit Grid(int n_) : n(n_), dalpha(kTwoPi / n_) {}
  double alpha(int i) const { return -kPi + dalpha * i; }
  int zero_index() const { return n / 2; }
};

// Forward DFT: X_k = sum_j x_j e^{-i k alpha_j ... } computed in index space; callers use the
// Spectrum wrapper below which fixes the [-pi,pi) phase convention.
void dft(std::vector<cplx>& x, bool inverse);

// Fourier representation f(alpha) = sum_k c[k] e^{i k alpha}, modes in FFT layout:
// index j holds k = j for j <= n/2, k = j - n for j > n/2.
struct Spectrum {
  int n = 0;
  std::vector<cplx> c;

  Spectrum() = default;
  explicit Spectrum(int n_) : n(n_), c(n_, cplx(0.0)) {}

  int mode_of(int j) const { return j <= n / 2 ? j : j - n; }
  cplx& at_mode(int k) { return c[k >= 0 ? k : k + n]; }
  cplx at_mode(int k) const { return c[k >= 0 ? k : k + n]; }
};

Spectrum spectrum_of(const std::vector<double>& samples);
Spectrum spectrum_of(const std::vector<cplx>& samples);
std::vector<cplx> samples_of(const Spectrum& s);
std::vector<double> real_samples_of(const Spectrum& s);

// order-th spectral derivative; odd orders zero the Nyquist mode.
Spectrum derivative(const Spectrum& s, int order);

// Translation f(. + shift): multiplies mode k by e^{i k shift}; Nyquist dropped.
Spectrum translate(const Spectrum& s, double shift);

// Fourier multiplier -i sgn(k); modes 0 and Nyquist map to 0.
std::vector<double> hilbert_transform(const std::vector<double>& g);
std::vector<cplx> hilbert_transform(const std::vector<cplx>& g);

// Two-thirds dealiasing: zero modes with |k| > n/3.
void dealias_two_thirds(Spectrum& s);

// Sobolev norm over [-pi, pi]: sqrt(2pi * sum (1 + k^2)^k_order |c_k|^2).
double sobolev_norm(const Spectrum& s, int k_order);
double l2_norm(const std::vector<double>& samples);

// Evaluates a truncated Fourier series (and optionally several sharing one phase table)
// at an arbitrary complex point. Nyquist is split evenly between +n/2 and -n/2.
class SeriesEvaluator {
 public:
  explicit SeriesEvaluator(int n);
  void set_point(cplx z);
  cplx eval(const Spectrum& s) const;

 private:
  int n_;
  std::vector<cplx> pow_pos_, pow_neg_;  // e^{ikz}, e^{-ikz} for k = 0..n/2
};

cplx eval_series(const Spectrum& s, cplx z);
double eval_series_real(const Spectrum& s, double x);

}  // namespace muskat
