#pragma once

#include <cstdint>
#include <vector>

#include "tensor.h"

namespace ulcnet {

enum class Activation { kLinear, kRelu, kSigmoid };

float apply_activation(float x, Activation act);

// Depthwise 1x3 along frequency followed by a 1x1 pointwise mix; bias after
// each stage and the activation after each stage.  Same-padding, no time
// extent.  Logical layouts: depthwise (C_in x 3), pointwise (C_in x C_out).
struct SeparableConvWeights {
  int in_ch = 0, out_ch = 0;
  std::vector<float> dw_w, dw_b;
  std::vector<float> pw_w, pw_b;
};
SeparableConvWeights make_separable_conv(int in_ch, int out_ch);

// Standard cross-correlation over (frequency, channels), same-padding,
// odd tap count, time extent 1.  Kernel layout (taps x C_in x C_out).
struct Conv2dWeights {
  int in_ch = 0, out_ch = 0, taps = 0;
  std::vector<float> w, b;
};
Conv2dWeights make_conv2d(int in_ch, int out_ch, int taps);

// One GRU layer in the dual-bias convention:
//   z = sigmoid(Wz x + bwz + Uz h + buz)
//   r = sigmoid(Wr x + bwr + Ur h + bur)
//   n = tanh(Wh x + bwh + r * (Uh h + buh))
//   h' = (1 - z) * n + z * h
// W* are (input x units), U* (units x units), biases (units).
struct GruWeights {
  int input = 0, units = 0;
  std::vector<float> wz, wr, wh;
  std::vector<float> uz, ur, uh;
  std::vector<float> bwz, bwr, bwh;
  std::vector<float> buz, bur, buh;
};
GruWeights make_gru(int input, int units);

// Fully connected layer, weight (in x out).
struct DenseWeights {
  int in = 0, out = 0;
  std::vector<float> w, b;
};
DenseWeights make_dense(int in, int out);

// Scratch shared by every GRU evaluation; sized for the largest layer.
struct GruScratch {
  std::vector<float> az, ar, ah;  // input-side gate accumulators
  std::vector<float> rz, rr, rh;  // recurrent-side gate accumulators
  explicit GruScratch(int max_units = 0) { resize(max_units); }
  void resize(int max_units) {
    for (auto* v : {&az, &ar, &ah, &rz, &rr, &rh}) v->assign(max_units, 0.0f);
  }
};

// Per-frame kernels.  `in` is a contiguous (f_len x in_ch) block, `out`
// (f_len x out_ch).  When `macs` is non-null every executed multiply-
// accumulate is counted (bias adds and activations are not MACs).
void separable_conv_frame(const float* in, int f_len,
                          const SeparableConvWeights& w, Activation act,
                          float* dw_tmp, float* acc, float* out,
                          uint64_t* macs = nullptr);
void conv2d_frame(const float* in, int f_len, const Conv2dWeights& w,
                  Activation act, float* acc, float* out,
                  uint64_t* macs = nullptr);
void max_pool_frame(const float* in, int f_len, int ch, int factor,
                    float* out);
void gru_step(const GruWeights& w, const float* x, float* h, GruScratch& s,
              uint64_t* macs = nullptr);
void dense_forward(const DenseWeights& w, const float* x, float* y,
                   Activation act, uint64_t* macs = nullptr);

// Whole-tensor wrappers over the frame kernels.
Tensor depthwise_separable_conv(const Tensor& x, const SeparableConvWeights& w,
                                Activation act, uint64_t* macs = nullptr);
Tensor conv2d(const Tensor& x, const Conv2dWeights& w, Activation act,
              uint64_t* macs = nullptr);
Tensor max_pool_freq(const Tensor& x, int factor = 2);

// Bidirectional GRU along the frequency axis, evaluated independently per
// frame (zero initial state both directions, no state across frames).
// Output channels are [forward units | backward units].
Tensor bidirectional_gru_over_freq(const Tensor& x, const GruWeights& fwd,
                                   const GruWeights& bwd,
                                   uint64_t* macs = nullptr);

std::vector<float> fully_connected(const DenseWeights& w,
                                   const std::vector<float>& x, Activation act,
                                   uint64_t* macs = nullptr);

}  // namespace ulcnet
