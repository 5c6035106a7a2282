// Independent double-precision references for the numeric kernels.  These
// are written from the definitions with their own index arithmetic, so
// agreement with the production kernels is a meaningful check rather than a
// copy of the same code.
#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "nn.h"

namespace oracle {

// O(n^2) discrete Fourier transform straight from the definition.
inline std::vector<std::complex<double>> dft(const std::vector<double>& x) {
  const size_t n = x.size();
  std::vector<std::complex<double>> out(n);
  for (size_t k = 0; k < n; ++k) {
    std::complex<double> acc{0.0, 0.0};
    for (size_t t = 0; t < n; ++t) {
      double ang =
          -2.0 * std::numbers::pi * static_cast<double>(k * t) / n;
      acc += x[t] * std::complex<double>{std::cos(ang), std::sin(ang)};
    }
    out[k] = acc;
  }
  return out;
}

inline double relu(double v) { return v > 0.0 ? v : 0.0; }
inline double sigmoid(double v) { return 1.0 / (1.0 + std::exp(-v)); }

inline std::vector<double> separable_conv(const std::vector<float>& in,
                                          int f_len,
                                          const ulcnet::SeparableConvWeights& w,
                                          bool use_relu) {
  std::vector<double> dw(static_cast<size_t>(f_len) * w.in_ch, 0.0);
  for (int f = 0; f < f_len; ++f)
    for (int c = 0; c < w.in_ch; ++c) {
      double a = w.dw_b[c];
      for (int tap = -1; tap <= 1; ++tap) {
        int src = f + tap;
        if (src < 0 || src >= f_len) continue;
        a += static_cast<double>(in[static_cast<size_t>(src) * w.in_ch + c]) *
             w.dw_w[static_cast<size_t>(c) * 3 + (tap + 1)];
      }
      dw[static_cast<size_t>(f) * w.in_ch + c] = use_relu ? relu(a) : a;
    }
  std::vector<double> out(static_cast<size_t>(f_len) * w.out_ch, 0.0);
  for (int f = 0; f < f_len; ++f)
    for (int co = 0; co < w.out_ch; ++co) {
      double a = w.pw_b[co];
      for (int ci = 0; ci < w.in_ch; ++ci)
        a += dw[static_cast<size_t>(f) * w.in_ch + ci] *
             w.pw_w[static_cast<size_t>(ci) * w.out_ch + co];
      out[static_cast<size_t>(f) * w.out_ch + co] = use_relu ? relu(a) : a;
    }
  return out;
}

inline std::vector<double> conv2d(const std::vector<float>& in, int f_len,
                                  const ulcnet::Conv2dWeights& w,
                                  bool use_relu) {
  std::vector<double> out(static_cast<size_t>(f_len) * w.out_ch, 0.0);
  const int half = w.taps / 2;
  for (int f = 0; f < f_len; ++f)
    for (int co = 0; co < w.out_ch; ++co) {
      double a = w.b[co];
      for (int tap = 0; tap < w.taps; ++tap) {
        int src = f + tap - half;
        if (src < 0 || src >= f_len) continue;
        for (int ci = 0; ci < w.in_ch; ++ci)
          a += static_cast<double>(
                   in[static_cast<size_t>(src) * w.in_ch + ci]) *
               w.w[(static_cast<size_t>(tap) * w.in_ch + ci) * w.out_ch + co];
      }
      out[static_cast<size_t>(f) * w.out_ch + co] = use_relu ? relu(a) : a;
    }
  return out;
}

inline std::vector<double> gru_step(const ulcnet::GruWeights& w,
                                    const std::vector<float>& x,
                                    const std::vector<double>& h) {
  std::vector<double> out(w.units);
  for (int u = 0; u < w.units; ++u) {
    double az = w.bwz[u], ar = w.bwr[u], ah = w.bwh[u];
    double rz = w.buz[u], rr = w.bur[u], rh = w.buh[u];
    for (int i = 0; i < w.input; ++i) {
      double xi = x[i];
      az += xi * w.wz[static_cast<size_t>(i) * w.units + u];
      ar += xi * w.wr[static_cast<size_t>(i) * w.units + u];
      ah += xi * w.wh[static_cast<size_t>(i) * w.units + u];
    }
    for (int i = 0; i < w.units; ++i) {
      rz += h[i] * w.uz[static_cast<size_t>(i) * w.units + u];
      rr += h[i] * w.ur[static_cast<size_t>(i) * w.units + u];
      rh += h[i] * w.uh[static_cast<size_t>(i) * w.units + u];
    }
    double z = sigmoid(az + rz);
    double r = sigmoid(ar + rr);
    double n = std::tanh(ah + r * rh);
    out[u] = (1.0 - z) * n + z * h[u];
  }
  return out;
}

inline std::vector<double> dense(const ulcnet::DenseWeights& w,
                                 const std::vector<float>& x, int act) {
  std::vector<double> out(w.out);
  for (int o = 0; o < w.out; ++o) {
    double a = w.b[o];
    for (int i = 0; i < w.in; ++i)
      a += static_cast<double>(x[i]) * w.w[static_cast<size_t>(i) * w.out + o];
    if (act == 1) a = relu(a);
    if (act == 2) a = sigmoid(a);
    out[o] = a;
  }
  return out;
}

}  // namespace oracle
