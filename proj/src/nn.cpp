#include "nn.h"

#include <cmath>
#include <string>

#include "error.h"

namespace ulcnet {

float apply_activation(float x, Activation act) {
  switch (act) {
    case Activation::kLinear:
      return x;
    case Activation::kRelu:
      return x > 0.0f ? x : 0.0f;
    case Activation::kSigmoid:
      return 1.0f / (1.0f + std::exp(-x));
  }
  return x;
}

SeparableConvWeights make_separable_conv(int in_ch, int out_ch) {
  SeparableConvWeights w;
  w.in_ch = in_ch;
  w.out_ch = out_ch;
  w.dw_w.assign(static_cast<size_t>(in_ch) * 3, 0.0f);
  w.dw_b.assign(in_ch, 0.0f);
  w.pw_w.assign(static_cast<size_t>(in_ch) * out_ch, 0.0f);
  w.pw_b.assign(out_ch, 0.0f);
  return w;
}

Conv2dWeights make_conv2d(int in_ch, int out_ch, int taps) {
  if (taps % 2 == 0) fail(ErrorCode::kConfig, "conv2d: tap count must be odd");
  Conv2dWeights w;
  w.in_ch = in_ch;
  w.out_ch = out_ch;
  w.taps = taps;
  w.w.assign(static_cast<size_t>(taps) * in_ch * out_ch, 0.0f);
  w.b.assign(out_ch, 0.0f);
  return w;
}

GruWeights make_gru(int input, int units) {
  GruWeights w;
  w.input = input;
  w.units = units;
  size_t iu = static_cast<size_t>(input) * units;
  size_t uu = static_cast<size_t>(units) * units;
  w.wz.assign(iu, 0.0f);
  w.wr.assign(iu, 0.0f);
  w.wh.assign(iu, 0.0f);
  w.uz.assign(uu, 0.0f);
  w.ur.assign(uu, 0.0f);
  w.uh.assign(uu, 0.0f);
  for (auto* b : {&w.bwz, &w.bwr, &w.bwh, &w.buz, &w.bur, &w.buh})
    b->assign(units, 0.0f);
  return w;
}

DenseWeights make_dense(int in, int out) {
  DenseWeights w;
  w.in = in;
  w.out = out;
  w.w.assign(static_cast<size_t>(in) * out, 0.0f);
  w.b.assign(out, 0.0f);
  return w;
}

namespace {

template <bool kCount>
void separable_conv_frame_impl(const float* in, int f_len,
                               const SeparableConvWeights& w, Activation act,
                               float* dw_tmp, float* acc, float* out,
                               uint64_t* macs) {
  const int ci_n = w.in_ch, co_n = w.out_ch;
  for (int f = 0; f < f_len; ++f) {
    float* trow = dw_tmp + static_cast<size_t>(f) * ci_n;
    for (int c = 0; c < ci_n; ++c) {
      float a = w.dw_b[c];
      const float* k = w.dw_w.data() + static_cast<size_t>(c) * 3;
      for (int tap = 0; tap < 3; ++tap) {
        int fi = f + tap - 1;
        if (fi < 0 || fi >= f_len) continue;
        a += in[static_cast<size_t>(fi) * ci_n + c] * k[tap];
        if constexpr (kCount) ++*macs;
      }
      trow[c] = apply_activation(a, act);
    }
  }
  for (int f = 0; f < f_len; ++f) {
    const float* trow = dw_tmp + static_cast<size_t>(f) * ci_n;
    for (int co = 0; co < co_n; ++co) acc[co] = w.pw_b[co];
    for (int ci = 0; ci < ci_n; ++ci) {
      float v = trow[ci];
      const float* wrow = w.pw_w.data() + static_cast<size_t>(ci) * co_n;
      for (int co = 0; co < co_n; ++co) {
        acc[co] += v * wrow[co];
        if constexpr (kCount) ++*macs;
      }
    }
    float* orow = out + static_cast<size_t>(f) * co_n;
    for (int co = 0; co < co_n; ++co) orow[co] = apply_activation(acc[co], act);
  }
}

template <bool kCount>
void conv2d_frame_impl(const float* in, int f_len, const Conv2dWeights& w,
                       Activation act, float* acc, float* out,
                       uint64_t* macs) {
  const int ci_n = w.in_ch, co_n = w.out_ch, half = w.taps / 2;
  for (int f = 0; f < f_len; ++f) {
    for (int co = 0; co < co_n; ++co) acc[co] = w.b[co];
    for (int tap = 0; tap < w.taps; ++tap) {
      int fi = f + tap - half;
      if (fi < 0 || fi >= f_len) continue;
      const float* irow = in + static_cast<size_t>(fi) * ci_n;
      const float* krow =
          w.w.data() + static_cast<size_t>(tap) * ci_n * co_n;
      for (int ci = 0; ci < ci_n; ++ci) {
        float v = irow[ci];
        const float* kr = krow + static_cast<size_t>(ci) * co_n;
        for (int co = 0; co < co_n; ++co) {
          acc[co] += v * kr[co];
          if constexpr (kCount) ++*macs;
        }
      }
    }
    float* orow = out + static_cast<size_t>(f) * co_n;
    for (int co = 0; co < co_n; ++co) orow[co] = apply_activation(acc[co], act);
  }
}

template <bool kCount>
void gru_step_impl(const GruWeights& w, const float* x, float* h,
                   GruScratch& s, uint64_t* macs) {
  const int units = w.units;
  for (int u = 0; u < units; ++u) {
    s.az[u] = w.bwz[u];
    s.ar[u] = w.bwr[u];
    s.ah[u] = w.bwh[u];
    s.rz[u] = w.buz[u];
    s.rr[u] = w.bur[u];
    s.rh[u] = w.buh[u];
  }
  auto matvec = [&](const std::vector<float>& m, const float* v, int rows,
                    float* dst) {
    for (int i = 0; i < rows; ++i) {
      float vi = v[i];
      const float* row = m.data() + static_cast<size_t>(i) * units;
      for (int u = 0; u < units; ++u) {
        dst[u] += vi * row[u];
        if constexpr (kCount) ++*macs;
      }
    }
  };
  matvec(w.wz, x, w.input, s.az.data());
  matvec(w.wr, x, w.input, s.ar.data());
  matvec(w.wh, x, w.input, s.ah.data());
  matvec(w.uz, h, units, s.rz.data());
  matvec(w.ur, h, units, s.rr.data());
  matvec(w.uh, h, units, s.rh.data());
  for (int u = 0; u < units; ++u) {
    float z = apply_activation(s.az[u] + s.rz[u], Activation::kSigmoid);
    float r = apply_activation(s.ar[u] + s.rr[u], Activation::kSigmoid);
    float n = std::tanh(s.ah[u] + r * s.rh[u]);
    h[u] = (1.0f - z) * n + z * h[u];
  }
}

template <bool kCount>
void dense_forward_impl(const DenseWeights& w, const float* x, float* y,
                        Activation act, uint64_t* macs) {
  for (int o = 0; o < w.out; ++o) y[o] = w.b[o];
  for (int i = 0; i < w.in; ++i) {
    float v = x[i];
    const float* row = w.w.data() + static_cast<size_t>(i) * w.out;
    for (int o = 0; o < w.out; ++o) {
      y[o] += v * row[o];
      if constexpr (kCount) ++*macs;
    }
  }
  for (int o = 0; o < w.out; ++o) y[o] = apply_activation(y[o], act);
}

}  // namespace

void separable_conv_frame(const float* in, int f_len,
                          const SeparableConvWeights& w, Activation act,
                          float* dw_tmp, float* acc, float* out,
                          uint64_t* macs) {
  if (macs)
    separable_conv_frame_impl<true>(in, f_len, w, act, dw_tmp, acc, out, macs);
  else
    separable_conv_frame_impl<false>(in, f_len, w, act, dw_tmp, acc, out,
                                     nullptr);
}

void conv2d_frame(const float* in, int f_len, const Conv2dWeights& w,
                  Activation act, float* acc, float* out, uint64_t* macs) {
  if (macs)
    conv2d_frame_impl<true>(in, f_len, w, act, acc, out, macs);
  else
    conv2d_frame_impl<false>(in, f_len, w, act, acc, out, nullptr);
}

void max_pool_frame(const float* in, int f_len, int ch, int factor,
                    float* out) {
  const int f_out = f_len / factor;
  for (int f = 0; f < f_out; ++f)
    for (int c = 0; c < ch; ++c) {
      float m = in[static_cast<size_t>(f * factor) * ch + c];
      for (int k = 1; k < factor; ++k) {
        float v = in[static_cast<size_t>(f * factor + k) * ch + c];
        if (v > m) m = v;
      }
      out[static_cast<size_t>(f) * ch + c] = m;
    }
}

void gru_step(const GruWeights& w, const float* x, float* h, GruScratch& s,
              uint64_t* macs) {
  if (macs)
    gru_step_impl<true>(w, x, h, s, macs);
  else
    gru_step_impl<false>(w, x, h, s, nullptr);
}

void dense_forward(const DenseWeights& w, const float* x, float* y,
                   Activation act, uint64_t* macs) {
  if (macs)
    dense_forward_impl<true>(w, x, y, act, macs);
  else
    dense_forward_impl<false>(w, x, y, act, nullptr);
}

Tensor depthwise_separable_conv(const Tensor& x, const SeparableConvWeights& w,
                                Activation act, uint64_t* macs) {
  if (x.c != w.in_ch)
    fail(ErrorCode::kDimension,
         "separable conv: input has " + std::to_string(x.c) +
             " channels, weights expect " + std::to_string(w.in_ch));
  Tensor out(x.t, x.f, w.out_ch);
  std::vector<float> dw_tmp(static_cast<size_t>(x.f) * w.in_ch);
  std::vector<float> acc(w.out_ch);
  for (int t = 0; t < x.t; ++t)
    separable_conv_frame(x.frame(t), x.f, w, act, dw_tmp.data(), acc.data(),
                         out.frame(t), macs);
  return out;
}

Tensor conv2d(const Tensor& x, const Conv2dWeights& w, Activation act,
              uint64_t* macs) {
  if (x.c != w.in_ch)
    fail(ErrorCode::kDimension,
         "conv2d: input has " + std::to_string(x.c) +
             " channels, weights expect " + std::to_string(w.in_ch));
  Tensor out(x.t, x.f, w.out_ch);
  std::vector<float> acc(w.out_ch);
  for (int t = 0; t < x.t; ++t)
    conv2d_frame(x.frame(t), x.f, w, act, acc.data(), out.frame(t), macs);
  return out;
}

Tensor max_pool_freq(const Tensor& x, int factor) {
  if (factor < 1) fail(ErrorCode::kConfig, "max pool: factor must be >= 1");
  if (x.f % factor != 0)
    fail(ErrorCode::kDimension,
         "max pool: frequency extent " + std::to_string(x.f) +
             " not divisible by " + std::to_string(factor));
  Tensor out(x.t, x.f / factor, x.c);
  for (int t = 0; t < x.t; ++t)
    max_pool_frame(x.frame(t), x.f, x.c, factor, out.frame(t));
  return out;
}

Tensor bidirectional_gru_over_freq(const Tensor& x, const GruWeights& fwd,
                                   const GruWeights& bwd, uint64_t* macs) {
  if (x.c != fwd.input || x.c != bwd.input)
    fail(ErrorCode::kDimension, "bidirectional gru: channel count mismatch");
  if (fwd.units != bwd.units)
    fail(ErrorCode::kDimension, "bidirectional gru: unit count mismatch");
  const int units = fwd.units;
  Tensor out(x.t, x.f, 2 * units);
  GruScratch scratch(units);
  std::vector<float> h(units);
  for (int t = 0; t < x.t; ++t) {
    std::fill(h.begin(), h.end(), 0.0f);
    for (int f = 0; f < x.f; ++f) {
      gru_step(fwd, x.frame(t) + static_cast<size_t>(f) * x.c, h.data(),
               scratch, macs);
      float* orow = out.frame(t) + static_cast<size_t>(f) * 2 * units;
      for (int u = 0; u < units; ++u) orow[u] = h[u];
    }
    std::fill(h.begin(), h.end(), 0.0f);
    for (int f = x.f - 1; f >= 0; --f) {
      gru_step(bwd, x.frame(t) + static_cast<size_t>(f) * x.c, h.data(),
               scratch, macs);
      float* orow = out.frame(t) + static_cast<size_t>(f) * 2 * units;
      for (int u = 0; u < units; ++u) orow[units + u] = h[u];
    }
  }
  return out;
}

std::vector<float> fully_connected(const DenseWeights& w,
                                   const std::vector<float>& x, Activation act,
                                   uint64_t* macs) {
  if (static_cast<int>(x.size()) != w.in)
    fail(ErrorCode::kDimension,
         "fully connected: input size " + std::to_string(x.size()) +
             ", weights expect " + std::to_string(w.in));
  std::vector<float> y(w.out);
  dense_forward(w, x.data(), y.data(), act, macs);
  return y;
}

}  // namespace ulcnet
