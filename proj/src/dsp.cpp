#include "dsp.h"

#include <cmath>
#include <numbers>
#include <string>

#include "error.h"
#include "fft.h"

namespace ulcnet {

StftConfig make_stft_config() {
  StftConfig cfg;
  cfg.analysis_window.resize(cfg.window_len);
  cfg.synthesis_window.resize(cfg.window_len);
  for (int n = 0; n < cfg.window_len; ++n) {
    // Periodic Hann; sqrt on both sides so analysis*synthesis is Hann and
    // sums to 1 across the two overlapping frames.
    double hann =
        0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * n / cfg.window_len));
    double w = std::sqrt(hann);
    cfg.analysis_window[n] = w;
    cfg.synthesis_window[n] = w;
  }
  validate(cfg);
  return cfg;
}

void validate(const StftConfig& cfg) {
  if (cfg.hop <= 0 || cfg.hop > cfg.window_len || cfg.window_len > cfg.fft_len)
    fail(ErrorCode::kConfig, "stft config: require 0 < hop <= window <= fft");
  if ((cfg.fft_len & (cfg.fft_len - 1)) != 0)
    fail(ErrorCode::kConfig, "stft config: fft length must be a power of two");
  if (static_cast<int>(cfg.analysis_window.size()) != cfg.window_len ||
      static_cast<int>(cfg.synthesis_window.size()) != cfg.window_len)
    fail(ErrorCode::kConfig, "stft config: window size mismatch");
  for (int n = 0; n < cfg.hop; ++n) {
    double acc = 0.0;
    for (int idx = n; idx < cfg.window_len; idx += cfg.hop)
      acc += cfg.analysis_window[idx] * cfg.synthesis_window[idx];
    if (std::abs(acc - 1.0) > 1e-9)
      fail(ErrorCode::kConfig,
           "stft config: windows violate constant overlap-add");
  }
}

void analysis_frame(const float* frame, const StftConfig& cfg,
                    std::vector<double>& windowed,
                    std::complex<double>* scratch, float* out_re,
                    float* out_im) {
  for (int n = 0; n < cfg.window_len; ++n)
    windowed[n] = static_cast<double>(frame[n]) * cfg.analysis_window[n];
  for (int n = cfg.window_len; n < cfg.fft_len; ++n) windowed[n] = 0.0;
  rfft(windowed.data(), cfg.fft_len, scratch, out_re, out_im);
}

void synthesis_frame(const float* re, const float* im, const StftConfig& cfg,
                     std::vector<double>& time_buf,
                     std::complex<double>* scratch, float* out_contribution) {
  irfft(re, im, cfg.fft_len, scratch, time_buf.data());
  for (int n = 0; n < cfg.window_len; ++n)
    out_contribution[n] =
        static_cast<float>(time_buf[n] * cfg.synthesis_window[n]);
}

Spectrogram stft(const std::vector<float>& samples, const StftConfig& cfg) {
  validate(cfg);
  const int len = static_cast<int>(samples.size());
  if (len < cfg.hop)
    fail(ErrorCode::kDimension, "stft: need at least one hop of samples");

  const int num_frames = len / cfg.hop;
  const int lead = cfg.window_len - cfg.hop;
  Spectrogram spec(num_frames, cfg.bins());

  std::vector<float> frame(cfg.window_len);
  std::vector<double> windowed(cfg.fft_len);
  std::vector<std::complex<double>> scratch(cfg.fft_len);
  for (int t = 0; t < num_frames; ++t) {
    for (int n = 0; n < cfg.window_len; ++n) {
      int idx = t * cfg.hop - lead + n;  // original-signal index
      frame[n] = (idx >= 0 && idx < len) ? samples[idx] : 0.0f;
    }
    analysis_frame(frame.data(), cfg, windowed, scratch.data(), spec.re_row(t),
                   spec.im_row(t));
  }
  return spec;
}

std::vector<float> istft(const Spectrogram& spec, const StftConfig& cfg) {
  validate(cfg);
  if (spec.frames < 1) fail(ErrorCode::kDimension, "istft: empty spectrogram");
  if (spec.bins != cfg.bins())
    fail(ErrorCode::kDimension,
         "istft: bin count mismatch (got " + std::to_string(spec.bins) +
             ", expected " + std::to_string(cfg.bins()) + ")");

  const int lead = cfg.window_len - cfg.hop;
  const int padded_len = (spec.frames - 1) * cfg.hop + cfg.window_len;
  // Overlap-add runs in float32 so the offline path matches the streaming
  // accumulator bit for bit.
  std::vector<float> ola(padded_len, 0.0f);
  std::vector<float> contribution(cfg.window_len);
  std::vector<double> time_buf(cfg.fft_len);
  std::vector<std::complex<double>> scratch(cfg.fft_len);

  for (int t = 0; t < spec.frames; ++t) {
    synthesis_frame(spec.re_row(t), spec.im_row(t), cfg, time_buf,
                    scratch.data(), contribution.data());
    float* dst = ola.data() + t * cfg.hop;
    for (int n = 0; n < cfg.window_len; ++n) dst[n] += contribution[n];
  }

  // Drop the leading pad region so output sample j lines up with input
  // sample j of stft().
  std::vector<float> out(static_cast<size_t>(spec.frames) * cfg.hop);
  for (size_t j = 0; j < out.size(); ++j) out[j] = ola[j + lead];
  return out;
}

float power_law_value(float x, double alpha) {
  if (x == 0.0f) return 0.0f;
  double mag = std::pow(std::abs(static_cast<double>(x)), alpha);
  return static_cast<float>(x < 0.0f ? -mag : mag);
}

static void check_alpha(double alpha) {
  if (!(alpha > 0.0) || alpha > 1.0)
    fail(ErrorCode::kConfig, "power law: alpha must be in (0, 1]");
}

void compress_row(const float* re, const float* im, int bins, double alpha,
                  float* out_re, float* out_im) {
  for (int k = 0; k < bins; ++k) {
    out_re[k] = power_law_value(re[k], alpha);
    out_im[k] = power_law_value(im[k], alpha);
  }
}

void decompress_row(const float* re, const float* im, int bins, double alpha,
                    float* out_re, float* out_im) {
  const double inv = 1.0 / alpha;
  for (int k = 0; k < bins; ++k) {
    out_re[k] = power_law_value(re[k], inv);
    out_im[k] = power_law_value(im[k], inv);
  }
}

Spectrogram power_law_compress(const Spectrogram& spec, double alpha) {
  check_alpha(alpha);
  Spectrogram out(spec.frames, spec.bins);
  for (int t = 0; t < spec.frames; ++t)
    compress_row(spec.re_row(t), spec.im_row(t), spec.bins, alpha,
                 out.re_row(t), out.im_row(t));
  return out;
}

Spectrogram power_law_decompress(const Spectrogram& spec, double alpha) {
  check_alpha(alpha);
  Spectrogram out(spec.frames, spec.bins);
  for (int t = 0; t < spec.frames; ++t)
    decompress_row(spec.re_row(t), spec.im_row(t), spec.bins, alpha,
                   out.re_row(t), out.im_row(t));
  return out;
}

void features_row(const float* re, const float* im, int bins, float* mag,
                  float* phase) {
  for (int k = 0; k < bins; ++k) {
    double r = re[k], i = im[k];
    if (r == 0.0 && i == 0.0) {
      mag[k] = 0.0f;
      phase[k] = 0.0f;
      continue;
    }
    mag[k] = static_cast<float>(std::sqrt(r * r + i * i));
    phase[k] = static_cast<float>(std::atan2(i, r));
  }
}

void features_from_compressed(const Spectrogram& compressed, Tensor& magnitude,
                              Tensor& phase) {
  magnitude = Tensor(compressed.frames, compressed.bins, 1);
  phase = Tensor(compressed.frames, compressed.bins, 1);
  for (int t = 0; t < compressed.frames; ++t)
    features_row(compressed.re_row(t), compressed.im_row(t), compressed.bins,
                 magnitude.frame(t), phase.frame(t));
}

void compressed_features(const Spectrogram& spec, double alpha,
                         Tensor& magnitude, Tensor& phase) {
  Spectrogram compressed = power_law_compress(spec, alpha);
  features_from_compressed(compressed, magnitude, phase);
}

}  // namespace ulcnet
