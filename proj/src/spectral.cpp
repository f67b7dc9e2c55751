#include "muskat/spectral.hpp"

#include <algorithm>
#include <cmath>

namespace muskat {

namespace {

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

void fft_radix2(std::vector<cplx>& a, bool inverse) {
  const int n = static_cast<int>(a.size());
  for (int i = 1, j = 0; i < n; ++i) {
    int bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (int len = 2; len <= n; len <<= 1) {
    const double ang = (inverse ? 2.0 : -2.0) * kPi / len;
    const cplx wlen(std::cos(ang), std::sin(ang));
    for (int i = 0; i < n; i += len) {
      cplx w(1.0);
      for (int j = 0; j < len / 2; ++j) {
        cplx u = a[i + j];
        cplx v = a[i + j + len / 2] * w;
        a[i + j] = u + v;
        a[i + j + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
}

// O(n^2) fallback so even non-power-of-two grids keep the contract.
void dft_direct(std::vector<cplx>& a, bool inverse) {
  const int n = static_cast<int>(a.size());
  std::vector<cplx> out(n, cplx(0.0));
  const double sgn = inverse ? 1.0 : -1.0;
  for (int k = 0; k < n; ++k) {
    const double ang = sgn * kTwoPi * k / n;
    const cplx w(std::cos(ang), std::sin(ang));
    cplx p(1.0), acc(0.0);
    for (int j = 0; j < n; ++j) {
      acc += a[j] * p;
      p *= w;
    }
    out[k] = acc;
  }
  a.swap(out);
}

}  // namespace

void dft(std::vector<cplx>& x, bool inverse) {
  if (x.empty()) return;
  if (is_pow2(static_cast<int>(x.size())))
    fft_radix2(x, inverse);
  else
    dft_direct(x, inverse);
}

Spectrum spectrum_of(const std::vector<cplx>& samples) {
  const int n = static_cast<int>(samples.size());
  if (n < 2 || n % 2 != 0) throw ValidationError("spectrum_of: grid size must be even and >= 2");
  // Samples live at alpha_j = -pi + j*2pi/n; fold the phase so c_k multiplies e^{i k alpha}.
  std::vector<cplx> work = samples;
  dft(work, false);
  Spectrum s(n);
  for (int j = 0; j < n; ++j) {
    const int k = s.mode_of(j);
    const double phase = -k * kPi;  // e^{-i k (-pi)} folded out of the index-space DFT
    s.c[j] = work[j] * cplx(std::cos(phase), std::sin(phase)) / double(n);
  }
  return s;
}

Spectrum spectrum_of(const std::vector<double>& samples) {
  std::vector<cplx> tmp(samples.begin(), samples.end());
  return spectrum_of(tmp);
}

std::vector<cplx> samples_of(const Spectrum& s) {
  const int n = s.n;
  std::vector<cplx> work(n);
  for (int j = 0; j < n; ++j) {
    const int k = s.mode_of(j);
    const double phase = k * kPi;
    work[j] = s.c[j] * cplx(std::cos(phase), std::sin(phase));
  }
  dft(work, true);
  return work;
}

std::vector<double> real_samples_of(const Spectrum& s) {
  std::vector<cplx> z = samples_of(s);
  std::vector<double> out(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) out[i] = z[i].real();
  return out;
}

Spectrum derivative(const Spectrum& s, int order) {
  Spectrum d = s;
  if (order == 0) return d;
  const int n = s.n;
  for (int j = 0; j < n; ++j) {
    const int k = d.mode_of(j);
    if (k == n / 2) {
      // Nyquist carries no usable sign information for odd derivatives.
      if (order % 2 == 1) {
        d.c[j] = cplx(0.0);
      } else {
        double mag = std::pow(double(k), order);
        double sign = (order / 2) % 2 == 0 ? 1.0 : -1.0;
        d.c[j] *= sign * mag;
      }
      continue;
    }
    cplx ik(0.0, double(k));
    cplx mult(1.0);
    for (int p = 0; p < order; ++p) mult *= ik;
    d.c[j] *= mult;
  }
  return d;
}

Spectrum translate(const Spectrum& s, double shift) {
  Spectrum t = s;
  const int n = s.n;
  for (int j = 0; j < n; ++j) {
    const int k = t.mode_of(j);
    if (k == n / 2) {
      t.c[j] = cplx(0.0);
      continue;
    }
    const double ph = k * shift;
    t.c[j] *= cplx(std::cos(ph), std::sin(ph));
  }
  return t;
}

std::vector<cplx> hilbert_transform(const std::vector<cplx>& g) {
  Spectrum s = spectrum_of(g);
  const int n = s.n;
  for (int j = 0; j < n; ++j) {
    const int k = s.mode_of(j);
    if (k == 0 || k == n / 2)
      s.c[j] = cplx(0.0);
    else
      s.c[j] *= cplx(0.0, k > 0 ? -1.0 : 1.0);
  }
  return samples_of(s);
}

std::vector<double> hilbert_transform(const std::vector<double>& g) {
  std::vector<cplx> tmp(g.begin(), g.end());
  std::vector<cplx> got = hilbert_transform(tmp);
  std::vector<double> out(got.size());
  for (std::size_t i = 0; i < got.size(); ++i) out[i] = got[i].real();
  return out;
}

void dealias_two_thirds(Spectrum& s) {
  const int cutoff = s.n / 3;
  for (int j = 0; j < s.n; ++j)
    if (std::abs(s.mode_of(j)) > cutoff) s.c[j] = cplx(0.0);
}

double sobolev_norm(const Spectrum& s, int k_order) {
  double acc = 0.0;
  for (int j = 0; j < s.n; ++j) {
    const double k2 = double(s.mode_of(j)) * double(s.mode_of(j));
    acc += std::pow(1.0 + k2, k_order) * std::norm(s.c[j]);
  }
  return std::sqrt(kTwoPi * acc);
}

double l2_norm(const std::vector<double>& samples) {
  double acc = 0.0;
  for (double v : samples) acc += v * v;
  return std::sqrt(acc * kTwoPi / samples.size());
}

SeriesEvaluator::SeriesEvaluator(int n) : n_(n), pow_pos_(n / 2 + 1), pow_neg_(n / 2 + 1) {}

void SeriesEvaluator::set_point(cplx z) {
  const cplx p = std::exp(cplx(0.0, 1.0) * z);
  const cplx q = 1.0 / p;
  pow_pos_[0] = pow_neg_[0] = cplx(1.0);
  for (int k = 1; k <= n_ / 2; ++k) {
    pow_pos_[k] = pow_pos_[k - 1] * p;
    pow_neg_[k] = pow_neg_[k - 1] * q;
  }
}

cplx SeriesEvaluator::eval(const Spectrum& s) const {
  if (s.n != n_) throw ValidationError("SeriesEvaluator: size mismatch");
  const int half = n_ / 2;
  cplx acc = s.c[0];
  for (int k = 1; k < half; ++k) acc += s.c[k] * pow_pos_[k] + s.c[n_ - k] * pow_neg_[k];
  // split Nyquist symmetrically
  acc += s.c[half] * 0.5 * (pow_pos_[half] + pow_neg_[half]);
  return acc;
}

cplx eval_series(const Spectrum& s, cplx z) {
  SeriesEvaluator ev(s.n);
  ev.set_point(z);
  return ev.eval(s);
}

double eval_series_real(const Spectrum& s, double x) { return eval_series(s, cplx(x, 0.0)).real(); }

}  // namespace muskat
