#include "fft.h"

#include <cmath>
#include <numbers>
#include <utility>

namespace ulcnet {

void fft(std::complex<double>* a, int n, bool inverse) {
  for (int i = 1, j = 0; i < n; ++i) {
    int bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (int len = 2; len <= n; len <<= 1) {
    double ang = 2.0 * std::numbers::pi / len * (inverse ? 1.0 : -1.0);
    std::complex<double> wlen(std::cos(ang), std::sin(ang));
    for (int i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (int k = 0; k < len / 2; ++k) {
        std::complex<double> u = a[i + k];
        std::complex<double> v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
  if (inverse) {
    for (int i = 0; i < n; ++i) a[i] /= n;
  }
}

void rfft(const double* in, int n, std::complex<double>* scratch,
          float* out_re, float* out_im) {
  for (int i = 0; i < n; ++i) scratch[i] = {in[i], 0.0};
  fft(scratch, n, false);
  for (int k = 0; k <= n / 2; ++k) {
    out_re[k] = static_cast<float>(scratch[k].real());
    out_im[k] = static_cast<float>(scratch[k].imag());
  }
}

void irfft(const float* in_re, const float* in_im, int n,
           std::complex<double>* scratch, double* out) {
  scratch[0] = {static_cast<double>(in_re[0]), static_cast<double>(in_im[0])};
  scratch[n / 2] = {static_cast<double>(in_re[n / 2]),
                    static_cast<double>(in_im[n / 2])};
  for (int k = 1; k < n / 2; ++k) {
    std::complex<double> v(in_re[k], in_im[k]);
    scratch[k] = v;
    scratch[n - k] = std::conj(v);
  }
  fft(scratch, n, true);
  for (int i = 0; i < n; ++i) out[i] = scratch[i].real();
}

}  // namespace ulcnet
