#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "dsp.h"
#include "nn.h"
#include "reorient.h"
#include "tensor.h"

namespace ulcnet {

// How the stage-1 magnitude mask and the noisy phase are combined into the
// two-channel input of stage 2.  kCompressedPolar rebuilds a compressed-
// domain complex estimate directly from (mask, phase); kMaskedMagnitude
// additionally scales by the noisy compressed magnitude (kept for A/B
// comparisons, off by default).
enum class FusionMode { kCompressedPolar, kMaskedMagnitude };

struct ModelConfig {
  double alpha = 0.3;  // power-law exponent; 1.0 disables compression
  StftConfig stft;
  ReorientConfig reorient;
  std::array<int, 4> conv_filters{32, 64, 96, 128};
  int fgru_units = 64;
  int post_fgru_channels = 64;
  int num_groups = 2;
  int gru_layers = 2;
  int gru_units = 128;
  int fc_neurons = 257;  // both FC layers in the mask head
  int stage2_filters = 32;
  int stage2_taps = 3;
  FusionMode fusion = FusionMode::kCompressedPolar;

  int bins() const { return stft.bins(); }
  // Frequency extent after the three pooling layers.
  int conv_out_freq() const { return reorient.band_width / 8; }
  int bottleneck() const { return conv_out_freq() * post_fgru_channels; }
  int group_size() const { return bottleneck() / num_groups; }
  double frames_per_second() const {
    return static_cast<double>(kSampleRate) / stft.hop;
  }
};

ModelConfig make_default_config(double alpha = 0.3);
void validate(const ModelConfig& cfg);

struct ModelWeights {
  std::array<SeparableConvWeights, 4> conv;
  GruWeights fgru_fwd, fgru_bwd;
  DenseWeights post_fgru;  // pointwise conv applied per frequency position
  std::vector<std::vector<GruWeights>> subband;  // [group][layer]
  DenseWeights fc1, fc2;
  Conv2dWeights s2_conv1, s2_conv2;
  DenseWeights s2_pointwise;  // linear 1x1 down to (real, imag)
};

// Visits every tensor in canonical serialization order.  fn receives
// (name, dims, data pointer, element count, init limit).  The init limit is
// the Glorot-uniform bound sqrt(6 / (fan_in + fan_out)) of the owning
// matrix; bias vectors share their matrix's bound.
template <typename Weights, typename Fn>
void visit_tensors(Weights& w, Fn&& fn);

ModelWeights make_zero_weights(const ModelConfig& cfg);

// Deterministic Glorot-uniform initialization: one xoshiro256++ stream,
// seeded once, consumed across all tensors in canonical order.  Identical
// seeds give bit-identical weights.
ModelWeights init_weights(const ModelConfig& cfg, uint64_t seed);

// Throws a dimension error naming the first offending tensor.
void validate_weights(const ModelConfig& cfg, const ModelWeights& w);

uint64_t materialized_param_count(const ModelWeights& w);

struct Model {
  ModelConfig cfg;
  ModelWeights weights;
};

Model make_model(const ModelConfig& cfg, ModelWeights weights);

// Accumulates actual multiply-accumulate counts per layer when attached to
// a forward pass.
struct MacRecorder {
  std::map<std::string, uint64_t> by_layer;
  uint64_t* slot(const std::string& name) { return &by_layer[name]; }
};

inline uint64_t* mac_slot(MacRecorder* rec, const char* name) {
  return rec ? rec->slot(name) : nullptr;
}

// Hidden state of the two subband GRU stacks (the only state that persists
// across frames in the network).
struct TemporalState {
  std::vector<std::vector<std::vector<float>>> h;  // [group][layer][units]
  void reset();
};
TemporalState make_temporal_state(const ModelConfig& cfg);

// Preallocated intermediate buffers for one frame of processing; the
// streaming path reuses one of these so steady-state processing never
// allocates.
struct Workspace {
  explicit Workspace(const ModelConfig& cfg);

  std::vector<double> windowed;                 // fft_len
  std::vector<std::complex<double>> fft_buf;    // fft_len
  std::vector<double> synth_time;               // fft_len
  std::vector<float> spec_re, spec_im;          // bins
  std::vector<float> comp_re, comp_im;          // bins
  std::vector<float> mag, phase;                // bins
  std::vector<float> reor;                      // band_width * num_bands
  std::vector<float> buf_a, buf_b;              // conv ping-pong
  std::vector<float> dw_tmp;                    // depthwise intermediates
  std::vector<float> acc;                       // widest accumulator
  std::vector<float> fgru_out;                  // conv_out_freq * 2*fgru_units
  std::vector<float> fgru_h;                    // fgru_units
  std::vector<float> bottleneck;                // flattened pointwise output
  std::vector<float> concat;                    // num_groups * gru_units
  std::vector<float> fc1_out;                   // fc_neurons
  std::vector<float> mask;                      // bins
  std::vector<float> fused;                     // bins * 2
  std::vector<float> s2_a, s2_b;                // bins * stage2_filters
  std::vector<float> cm_re, cm_im;              // bins
  std::vector<float> out_re, out_im;            // bins
  std::vector<float> contribution;              // window_len
  GruScratch gru;
};

// --- per-frame network steps (shared by offline and streaming paths) ---

// Magnitude row (bins) -> stage-1 mask row (bins), advancing the temporal
// state by one frame.
void stage1_frame(const Model& m, const float* mag, TemporalState& state,
                  Workspace& ws, float* mask_out, MacRecorder* rec = nullptr);

// Mask row + phase row (+ compressed magnitude row for the alternative
// fusion mode) -> two-channel fused row (bins x 2, channels-last).
void fuse_frame(const float* mask, const float* phase, const float* mag,
                int bins, FusionMode mode, float* fused);

// Fused row -> complex mask rows.
void stage2_frame(const Model& m, const float* fused, Workspace& ws,
                  float* mask_re, float* mask_im, MacRecorder* rec = nullptr);

// Complex ratio mask application: s = x * m (complex multiply).
void apply_crm_row(const float* xr, const float* xi, const float* mr,
                   const float* mi, int bins, float* sr, float* si);

// --- whole-tensor operations ---

Plane stage1_forward(const Model& m, const Tensor& magnitude,
                     MacRecorder* rec = nullptr);
Tensor fuse_intermediate(const Plane& mask, const Tensor& phase,
                         const Tensor& magnitude, FusionMode mode);
Spectrogram stage2_forward(const Model& m, const Tensor& fused,
                           MacRecorder* rec = nullptr);
Spectrogram apply_crm(const Spectrogram& noisy_compressed,
                      const Spectrogram& mask);

// Full pipeline on a complex spectrogram: compress, features, stage 1,
// fusion, stage 2, mask application, decompress.
Spectrogram enhance_spectrogram(const Model& m, const Spectrogram& noisy,
                                MacRecorder* rec = nullptr);

// Same tail of the pipeline but with a caller-supplied complex mask in
// place of the network output; used to validate the non-learned paths.
Spectrogram enhance_with_mask(const Spectrogram& noisy,
                              const Spectrogram& mask, double alpha);

// Signal in, enhanced signal of identical length out (the tail is padded to
// a whole hop internally).
std::vector<float> enhance_signal(const Model& m,
                                  const std::vector<float>& samples);

// Mean squared distance between power-law-compressed spectrograms
// (averaged over frames x bins; each bin contributes its squared real plus
// squared imaginary difference).
double compressed_mse(const Spectrogram& estimate, const Spectrogram& clean,
                      double alpha);

// ---- template implementation ----

template <typename Weights, typename Fn>
void visit_tensors(Weights& w, Fn&& fn) {
  auto limit = [](int fan_in, int fan_out) {
    return std::sqrt(6.0 / (fan_in + fan_out));
  };
  auto sep = [&](auto& c, const std::string& prefix) {
    double dw_lim = limit(3, 3);
    double pw_lim = limit(c.in_ch, c.out_ch);
    fn(prefix + ".depthwise.weight", std::vector<int>{c.in_ch, 3},
       c.dw_w.data(), c.dw_w.size(), dw_lim);
    fn(prefix + ".depthwise.bias", std::vector<int>{c.in_ch}, c.dw_b.data(),
       c.dw_b.size(), dw_lim);
    fn(prefix + ".pointwise.weight", std::vector<int>{c.in_ch, c.out_ch},
       c.pw_w.data(), c.pw_w.size(), pw_lim);
    fn(prefix + ".pointwise.bias", std::vector<int>{c.out_ch}, c.pw_b.data(),
       c.pw_b.size(), pw_lim);
  };
  auto gru = [&](auto& g, const std::string& prefix) {
    double w_lim = limit(g.input, g.units);
    double u_lim = limit(g.units, g.units);
    const char* wn[3] = {"wz", "wr", "wh"};
    const char* un[3] = {"uz", "ur", "uh"};
    const char* bwn[3] = {"bwz", "bwr", "bwh"};
    const char* bun[3] = {"buz", "bur", "buh"};
    std::array wm{&g.wz, &g.wr, &g.wh};
    std::array um{&g.uz, &g.ur, &g.uh};
    std::array bwv{&g.bwz, &g.bwr, &g.bwh};
    std::array buv{&g.buz, &g.bur, &g.buh};
    for (int i = 0; i < 3; ++i)
      fn(prefix + "." + wn[i], std::vector<int>{g.input, g.units},
         wm[i]->data(), wm[i]->size(), w_lim);
    for (int i = 0; i < 3; ++i)
      fn(prefix + "." + un[i], std::vector<int>{g.units, g.units},
         um[i]->data(), um[i]->size(), u_lim);
    for (int i = 0; i < 3; ++i)
      fn(prefix + "." + bwn[i], std::vector<int>{g.units}, bwv[i]->data(),
         bwv[i]->size(), w_lim);
    for (int i = 0; i < 3; ++i)
      fn(prefix + "." + bun[i], std::vector<int>{g.units}, buv[i]->data(),
         buv[i]->size(), u_lim);
  };
  auto dense = [&](auto& d, const std::string& prefix) {
    double lim = limit(d.in, d.out);
    fn(prefix + ".weight", std::vector<int>{d.in, d.out}, d.w.data(),
       d.w.size(), lim);
    fn(prefix + ".bias", std::vector<int>{d.out}, d.b.data(), d.b.size(), lim);
  };
  auto conv2 = [&](auto& c, const std::string& prefix) {
    double lim = limit(c.taps * c.in_ch, c.taps * c.out_ch);
    fn(prefix + ".weight", std::vector<int>{c.taps, c.in_ch, c.out_ch},
       c.w.data(), c.w.size(), lim);
    fn(prefix + ".bias", std::vector<int>{c.out_ch}, c.b.data(), c.b.size(),
       lim);
  };

  for (int i = 0; i < 4; ++i)
    sep(w.conv[i], "stage1.conv" + std::to_string(i + 1));
  gru(w.fgru_fwd, "stage1.fgru.fwd");
  gru(w.fgru_bwd, "stage1.fgru.bwd");
  dense(w.post_fgru, "stage1.post_fgru.pointwise");
  for (size_t g = 0; g < w.subband.size(); ++g)
    for (size_t l = 0; l < w.subband[g].size(); ++l)
      gru(w.subband[g][l], "stage1.subband.g" + std::to_string(g) + ".l" +
                               std::to_string(l));
  dense(w.fc1, "stage1.fc1");
  dense(w.fc2, "stage1.fc2");
  conv2(w.s2_conv1, "stage2.conv1");
  conv2(w.s2_conv2, "stage2.conv2");
  dense(w.s2_pointwise, "stage2.pointwise");
}

}  // namespace ulcnet
