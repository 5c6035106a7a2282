#include "model.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "error.h"
#include "rng.h"

namespace ulcnet {

ModelConfig make_default_config(double alpha) {
  ModelConfig cfg;
  cfg.alpha = alpha;
  cfg.stft = make_stft_config();
  cfg.reorient = make_reorient_config();
  validate(cfg);
  return cfg;
}

void validate(const ModelConfig& cfg) {
  if (!(cfg.alpha > 0.0) || cfg.alpha > 1.0)
    fail(ErrorCode::kConfig, "model config: alpha must be in (0, 1]");
  validate(cfg.stft);
  validate(cfg.reorient);
  if (cfg.reorient.num_bins != cfg.bins())
    fail(ErrorCode::kConfig,
         "model config: band split covers " +
             std::to_string(cfg.reorient.num_bins) + " bins, transform has " +
             std::to_string(cfg.bins()));
  for (int f : cfg.conv_filters)
    if (f < 1) fail(ErrorCode::kConfig, "model config: conv filters must be positive");
  // Three halvings of the band width must land on whole positions.
  if (cfg.reorient.band_width % 8 != 0)
    fail(ErrorCode::kConfig,
         "model config: band width must be divisible by 8 for pooling");
  if (cfg.fgru_units < 1 || cfg.post_fgru_channels < 1 || cfg.gru_units < 1 ||
      cfg.fc_neurons < 1 || cfg.stage2_filters < 1)
    fail(ErrorCode::kConfig, "model config: layer sizes must be positive");
  if (cfg.num_groups < 1 || cfg.gru_layers < 1)
    fail(ErrorCode::kConfig, "model config: group/layer counts must be positive");
  if (cfg.bottleneck() % cfg.num_groups != 0)
    fail(ErrorCode::kConfig,
         "model config: bottleneck of " + std::to_string(cfg.bottleneck()) +
             " does not split into " + std::to_string(cfg.num_groups) +
             " groups");
  if (cfg.stage2_taps < 1 || cfg.stage2_taps % 2 == 0)
    fail(ErrorCode::kConfig, "model config: stage-2 tap count must be odd");
}

ModelWeights make_zero_weights(const ModelConfig& cfg) {
  ModelWeights w;
  int in = cfg.reorient.num_bands;
  for (int i = 0; i < 4; ++i) {
    w.conv[i] = make_separable_conv(in, cfg.conv_filters[i]);
    in = cfg.conv_filters[i];
  }
  w.fgru_fwd = make_gru(in, cfg.fgru_units);
  w.fgru_bwd = make_gru(in, cfg.fgru_units);
  w.post_fgru = make_dense(2 * cfg.fgru_units, cfg.post_fgru_channels);
  w.subband.resize(cfg.num_groups);
  for (int g = 0; g < cfg.num_groups; ++g) {
    w.subband[g].clear();
    int gin = cfg.group_size();
    for (int l = 0; l < cfg.gru_layers; ++l) {
      w.subband[g].push_back(make_gru(gin, cfg.gru_units));
      gin = cfg.gru_units;
    }
  }
  w.fc1 = make_dense(cfg.num_groups * cfg.gru_units, cfg.fc_neurons);
  w.fc2 = make_dense(cfg.fc_neurons, cfg.fc_neurons);
  w.s2_conv1 = make_conv2d(2, cfg.stage2_filters, cfg.stage2_taps);
  w.s2_conv2 = make_conv2d(cfg.stage2_filters, cfg.stage2_filters, cfg.stage2_taps);
  w.s2_pointwise = make_dense(cfg.stage2_filters, 2);
  return w;
}

ModelWeights init_weights(const ModelConfig& cfg, uint64_t seed) {
  ModelWeights w = make_zero_weights(cfg);
  Xoshiro256pp rng(seed);
  visit_tensors(w, [&](const std::string&, const std::vector<int>&, float* data,
                       size_t count, double limit) {
    for (size_t i = 0; i < count; ++i) data[i] = rng.uniform(-limit, limit);
  });
  return w;
}

void validate_weights(const ModelConfig& cfg, const ModelWeights& w) {
  struct Entry {
    std::string name;
    std::vector<int> dims;
    size_t count;
  };
  std::vector<Entry> expect, got;
  ModelWeights ref = make_zero_weights(cfg);
  visit_tensors(ref, [&](const std::string& n, const std::vector<int>& d,
                         const float*, size_t c, double) {
    expect.push_back({n, d, c});
  });
  visit_tensors(w, [&](const std::string& n, const std::vector<int>& d,
                       const float*, size_t c, double) {
    got.push_back({n, d, c});
  });
  if (got.size() != expect.size())
    fail(ErrorCode::kDimension,
         "weights: " + std::to_string(got.size()) + " tensors, expected " +
             std::to_string(expect.size()));
  for (size_t i = 0; i < expect.size(); ++i) {
    if (got[i].name != expect[i].name)
      fail(ErrorCode::kDimension, "weights: tensor " + std::to_string(i) +
                                      " is '" + got[i].name + "', expected '" +
                                      expect[i].name + "'");
    if (got[i].dims != expect[i].dims || got[i].count != expect[i].count) {
      auto shape = [](const std::vector<int>& d) {
        std::string s;
        for (size_t k = 0; k < d.size(); ++k)
          s += (k ? "x" : "") + std::to_string(d[k]);
        return s;
      };
      fail(ErrorCode::kDimension, "weights: " + got[i].name + " has shape " +
                                      shape(got[i].dims) + ", expected " +
                                      shape(expect[i].dims));
    }
  }
}

uint64_t materialized_param_count(const ModelWeights& w) {
  uint64_t total = 0;
  visit_tensors(w, [&](const std::string&, const std::vector<int>&,
                       const float*, size_t count, double) { total += count; });
  return total;
}

Model make_model(const ModelConfig& cfg, ModelWeights weights) {
  validate(cfg);
  validate_weights(cfg, weights);
  return Model{cfg, std::move(weights)};
}

void TemporalState::reset() {
  for (auto& group : h)
    for (auto& layer : group) std::fill(layer.begin(), layer.end(), 0.0f);
}

TemporalState make_temporal_state(const ModelConfig& cfg) {
  TemporalState st;
  st.h.assign(cfg.num_groups,
              std::vector<std::vector<float>>(
                  cfg.gru_layers, std::vector<float>(cfg.gru_units, 0.0f)));
  return st;
}

Workspace::Workspace(const ModelConfig& cfg) : gru(0) {
  const int bins = cfg.bins();
  const int bw = cfg.reorient.band_width;
  const int nb = cfg.reorient.num_bands;
  int max_ch = nb;
  for (int f : cfg.conv_filters) max_ch = std::max(max_ch, f);

  windowed.assign(cfg.stft.fft_len, 0.0);
  fft_buf.assign(cfg.stft.fft_len, {});
  synth_time.assign(cfg.stft.fft_len, 0.0);
  spec_re.assign(bins, 0.0f);
  spec_im.assign(bins, 0.0f);
  comp_re.assign(bins, 0.0f);
  comp_im.assign(bins, 0.0f);
  mag.assign(bins, 0.0f);
  phase.assign(bins, 0.0f);
  reor.assign(static_cast<size_t>(bw) * nb, 0.0f);
  buf_a.assign(static_cast<size_t>(bw) * max_ch, 0.0f);
  buf_b.assign(static_cast<size_t>(bw) * max_ch, 0.0f);
  dw_tmp.assign(static_cast<size_t>(bw) * max_ch, 0.0f);
  acc.assign(std::max(max_ch, cfg.stage2_filters), 0.0f);
  fgru_out.assign(static_cast<size_t>(cfg.conv_out_freq()) * 2 * cfg.fgru_units,
                  0.0f);
  fgru_h.assign(cfg.fgru_units, 0.0f);
  bottleneck.assign(cfg.bottleneck(), 0.0f);
  concat.assign(static_cast<size_t>(cfg.num_groups) * cfg.gru_units, 0.0f);
  fc1_out.assign(cfg.fc_neurons, 0.0f);
  mask.assign(bins, 0.0f);
  fused.assign(static_cast<size_t>(bins) * 2, 0.0f);
  s2_a.assign(static_cast<size_t>(bins) * cfg.stage2_filters, 0.0f);
  s2_b.assign(static_cast<size_t>(bins) * cfg.stage2_filters, 0.0f);
  cm_re.assign(bins, 0.0f);
  cm_im.assign(bins, 0.0f);
  out_re.assign(bins, 0.0f);
  out_im.assign(bins, 0.0f);
  contribution.assign(cfg.stft.window_len, 0.0f);
  gru.resize(std::max(cfg.fgru_units, cfg.gru_units));
}

void stage1_frame(const Model& m, const float* mag, TemporalState& state,
                  Workspace& ws, float* mask_out, MacRecorder* rec) {
  const ModelConfig& cfg = m.cfg;
  const ModelWeights& w = m.weights;

  reorient_frame(mag, cfg.reorient, ws.reor.data());

  // Four separable conv layers; frequency halves after layers 2-4.  The
  // ping-pong always ends with the pooled result back in buf_a.
  int f = cfg.reorient.band_width;
  separable_conv_frame(ws.reor.data(), f, w.conv[0], Activation::kRelu,
                       ws.dw_tmp.data(), ws.acc.data(), ws.buf_a.data(),
                       mac_slot(rec, "conv1"));
  separable_conv_frame(ws.buf_a.data(), f, w.conv[1], Activation::kRelu,
                       ws.dw_tmp.data(), ws.acc.data(), ws.buf_b.data(),
                       mac_slot(rec, "conv2"));
  max_pool_frame(ws.buf_b.data(), f, w.conv[1].out_ch, 2, ws.buf_a.data());
  f /= 2;
  separable_conv_frame(ws.buf_a.data(), f, w.conv[2], Activation::kRelu,
                       ws.dw_tmp.data(), ws.acc.data(), ws.buf_b.data(),
                       mac_slot(rec, "conv3"));
  max_pool_frame(ws.buf_b.data(), f, w.conv[2].out_ch, 2, ws.buf_a.data());
  f /= 2;
  separable_conv_frame(ws.buf_a.data(), f, w.conv[3], Activation::kRelu,
                       ws.dw_tmp.data(), ws.acc.data(), ws.buf_b.data(),
                       mac_slot(rec, "conv4"));
  max_pool_frame(ws.buf_b.data(), f, w.conv[3].out_ch, 2, ws.buf_a.data());
  f /= 2;

  // Bidirectional sweep over the remaining frequency positions, restarted
  // from zero every frame; output channels are [forward | backward].
  const float* conv_out = ws.buf_a.data();
  const int cch = w.conv[3].out_ch;
  const int units = cfg.fgru_units;
  uint64_t* fgru_macs = mac_slot(rec, "fgru");
  std::fill(ws.fgru_h.begin(), ws.fgru_h.end(), 0.0f);
  for (int i = 0; i < f; ++i) {
    gru_step(w.fgru_fwd, conv_out + static_cast<size_t>(i) * cch,
             ws.fgru_h.data(), ws.gru, fgru_macs);
    std::copy_n(ws.fgru_h.data(), units,
                ws.fgru_out.data() + static_cast<size_t>(i) * 2 * units);
  }
  std::fill(ws.fgru_h.begin(), ws.fgru_h.end(), 0.0f);
  for (int i = f - 1; i >= 0; --i) {
    gru_step(w.fgru_bwd, conv_out + static_cast<size_t>(i) * cch,
             ws.fgru_h.data(), ws.gru, fgru_macs);
    std::copy_n(ws.fgru_h.data(), units,
                ws.fgru_out.data() + static_cast<size_t>(i) * 2 * units + units);
  }

  uint64_t* pf_macs = mac_slot(rec, "post_fgru_pointwise");
  for (int i = 0; i < f; ++i)
    dense_forward(w.post_fgru,
                  ws.fgru_out.data() + static_cast<size_t>(i) * 2 * units,
                  ws.bottleneck.data() +
                      static_cast<size_t>(i) * cfg.post_fgru_channels,
                  Activation::kLinear, pf_macs);

  // Contiguous split of the flattened bottleneck; each group runs its own
  // stacked recurrent chain, the only place with cross-frame state.
  const int gs = cfg.group_size();
  for (int g = 0; g < cfg.num_groups; ++g) {
    const float* x = ws.bottleneck.data() + static_cast<size_t>(g) * gs;
    for (int l = 0; l < cfg.gru_layers; ++l) {
      uint64_t* sb_macs = nullptr;
      if (rec)
        sb_macs = rec->slot("subband.g" + std::to_string(g) + ".l" +
                            std::to_string(l));
      gru_step(w.subband[g][l], x, state.h[g][l].data(), ws.gru, sb_macs);
      x = state.h[g][l].data();
    }
    std::copy_n(x, cfg.gru_units,
                ws.concat.data() + static_cast<size_t>(g) * cfg.gru_units);
  }

  dense_forward(w.fc1, ws.concat.data(), ws.fc1_out.data(), Activation::kRelu,
                mac_slot(rec, "fc1"));
  dense_forward(w.fc2, ws.fc1_out.data(), mask_out, Activation::kSigmoid,
                mac_slot(rec, "fc2"));
}

void fuse_frame(const float* mask, const float* phase, const float* mag,
                int bins, FusionMode mode, float* fused) {
  for (int k = 0; k < bins; ++k) {
    double m = mask[k];
    if (mode == FusionMode::kMaskedMagnitude) m *= mag[k];
    double p = phase[k];
    fused[2 * k] = static_cast<float>(m * std::cos(p));
    fused[2 * k + 1] = static_cast<float>(m * std::sin(p));
  }
}

void stage2_frame(const Model& m, const float* fused, Workspace& ws,
                  float* mask_re, float* mask_im, MacRecorder* rec) {
  const int bins = m.cfg.bins();
  conv2d_frame(fused, bins, m.weights.s2_conv1, Activation::kRelu,
               ws.acc.data(), ws.s2_a.data(), mac_slot(rec, "stage2.conv1"));
  conv2d_frame(ws.s2_a.data(), bins, m.weights.s2_conv2, Activation::kRelu,
               ws.acc.data(), ws.s2_b.data(), mac_slot(rec, "stage2.conv2"));
  uint64_t* pw_macs = mac_slot(rec, "stage2.pointwise");
  const int ch = m.weights.s2_conv2.out_ch;
  for (int k = 0; k < bins; ++k) {
    float ri[2];
    dense_forward(m.weights.s2_pointwise,
                  ws.s2_b.data() + static_cast<size_t>(k) * ch, ri,
                  Activation::kLinear, pw_macs);
    mask_re[k] = ri[0];
    mask_im[k] = ri[1];
  }
}

void apply_crm_row(const float* xr, const float* xi, const float* mr,
                   const float* mi, int bins, float* sr, float* si) {
  for (int k = 0; k < bins; ++k) {
    double a = xr[k], b = xi[k], c = mr[k], d = mi[k];
    sr[k] = static_cast<float>(a * c - b * d);
    si[k] = static_cast<float>(a * d + b * c);
  }
}

Plane stage1_forward(const Model& m, const Tensor& magnitude,
                     MacRecorder* rec) {
  if (magnitude.f != m.cfg.bins() || magnitude.c != 1)
    fail(ErrorCode::kDimension,
         "stage 1: expected (T, " + std::to_string(m.cfg.bins()) +
             ", 1) magnitude, got (T, " + std::to_string(magnitude.f) + ", " +
             std::to_string(magnitude.c) + ")");
  Workspace ws(m.cfg);
  TemporalState state = make_temporal_state(m.cfg);
  Plane mask(magnitude.t, magnitude.f);
  for (int t = 0; t < magnitude.t; ++t)
    stage1_frame(m, magnitude.frame(t), state, ws, mask.row(t), rec);
  return mask;
}

Tensor fuse_intermediate(const Plane& mask, const Tensor& phase,
                         const Tensor& magnitude, FusionMode mode) {
  if (phase.t != mask.frames || phase.f != mask.bins || phase.c != 1)
    fail(ErrorCode::kDimension, "fuse: mask and phase shapes disagree");
  if (mode == FusionMode::kMaskedMagnitude &&
      (magnitude.t != mask.frames || magnitude.f != mask.bins ||
       magnitude.c != 1))
    fail(ErrorCode::kDimension, "fuse: mask and magnitude shapes disagree");
  Tensor out(mask.frames, mask.bins, 2);
  for (int t = 0; t < mask.frames; ++t) {
    const float* mg =
        mode == FusionMode::kMaskedMagnitude ? magnitude.frame(t) : nullptr;
    fuse_frame(mask.row(t), phase.frame(t), mg, mask.bins, mode, out.frame(t));
  }
  return out;
}

Spectrogram stage2_forward(const Model& m, const Tensor& fused,
                           MacRecorder* rec) {
  if (fused.f != m.cfg.bins() || fused.c != 2)
    fail(ErrorCode::kDimension,
         "stage 2: expected (T, " + std::to_string(m.cfg.bins()) +
             ", 2) input, got (T, " + std::to_string(fused.f) + ", " +
             std::to_string(fused.c) + ")");
  Workspace ws(m.cfg);
  Spectrogram cm(fused.t, fused.f);
  for (int t = 0; t < fused.t; ++t)
    stage2_frame(m, fused.frame(t), ws, cm.re_row(t), cm.im_row(t), rec);
  return cm;
}

Spectrogram apply_crm(const Spectrogram& noisy_compressed,
                      const Spectrogram& mask) {
  if (noisy_compressed.frames != mask.frames ||
      noisy_compressed.bins != mask.bins)
    fail(ErrorCode::kDimension, "mask application: shapes disagree");
  Spectrogram out(noisy_compressed.frames, noisy_compressed.bins);
  for (int t = 0; t < out.frames; ++t)
    apply_crm_row(noisy_compressed.re_row(t), noisy_compressed.im_row(t),
                  mask.re_row(t), mask.im_row(t), out.bins, out.re_row(t),
                  out.im_row(t));
  return out;
}

Spectrogram enhance_spectrogram(const Model& m, const Spectrogram& noisy,
                                MacRecorder* rec) {
  Spectrogram comp = power_law_compress(noisy, m.cfg.alpha);
  Tensor mag, phase;
  features_from_compressed(comp, mag, phase);
  Plane mask = stage1_forward(m, mag, rec);
  Tensor fused = fuse_intermediate(mask, phase, mag, m.cfg.fusion);
  Spectrogram cm = stage2_forward(m, fused, rec);
  Spectrogram est = apply_crm(comp, cm);
  return power_law_decompress(est, m.cfg.alpha);
}

Spectrogram enhance_with_mask(const Spectrogram& noisy,
                              const Spectrogram& mask, double alpha) {
  Spectrogram comp = power_law_compress(noisy, alpha);
  Spectrogram est = apply_crm(comp, mask);
  return power_law_decompress(est, alpha);
}

std::vector<float> enhance_signal(const Model& m,
                                  const std::vector<float>& samples) {
  if (samples.empty()) return {};
  const size_t hop = m.cfg.stft.hop;
  std::vector<float> padded = samples;
  if (padded.size() % hop != 0)
    padded.resize(padded.size() + hop - padded.size() % hop, 0.0f);
  Spectrogram est = enhance_spectrogram(m, stft(padded, m.cfg.stft));
  std::vector<float> out = istft(est, m.cfg.stft);
  out.resize(samples.size());
  return out;
}

double compressed_mse(const Spectrogram& estimate, const Spectrogram& clean,
                      double alpha) {
  if (estimate.frames != clean.frames || estimate.bins != clean.bins)
    fail(ErrorCode::kDimension, "compressed mse: shapes disagree");
  if (estimate.frames == 0 || estimate.bins == 0)
    fail(ErrorCode::kDimension, "compressed mse: empty spectrogram");
  Spectrogram ce = power_law_compress(estimate, alpha);
  Spectrogram cc = power_law_compress(clean, alpha);
  double acc = 0.0;
  const size_t n = ce.re.size();
  for (size_t i = 0; i < n; ++i) {
    double dr = static_cast<double>(ce.re[i]) - static_cast<double>(cc.re[i]);
    double di = static_cast<double>(ce.im[i]) - static_cast<double>(cc.im[i]);
    acc += dr * dr + di * di;
  }
  return acc / static_cast<double>(n);
}

}  // namespace ulcnet
