#pragma once

#include <complex>
#include <vector>

#include "tensor.h"

namespace ulcnet {

inline constexpr int kSampleRate = 16000;

// Complex spectrogram stored as separate real/imaginary planes,
// (frames x bins) row-major.  Also doubles as the complex-mask container.
struct Spectrogram {
  int frames = 0, bins = 0;
  std::vector<float> re, im;

  Spectrogram() = default;
  Spectrogram(int frames_, int bins_)
      : frames(frames_), bins(bins_),
        re(static_cast<size_t>(frames_) * bins_, 0.0f),
        im(static_cast<size_t>(frames_) * bins_, 0.0f) {}

  float* re_row(int t) { return re.data() + static_cast<size_t>(t) * bins; }
  float* im_row(int t) { return im.data() + static_cast<size_t>(t) * bins; }
  const float* re_row(int t) const {
    return re.data() + static_cast<size_t>(t) * bins;
  }
  const float* im_row(int t) const {
    return im.data() + static_cast<size_t>(t) * bins;
  }
};

// 32 ms sqrt-Hann analysis/synthesis windows at 50% overlap.  Window values
// are kept in double and applied in double so the overlap-add identity
// (analysis * synthesis summing to exactly 1) holds to ~1e-16; everything at
// rest (signals, spectra, states) stays float32.
struct StftConfig {
  int window_len = 512;
  int hop = 256;
  int fft_len = 512;
  std::vector<double> analysis_window;
  std::vector<double> synthesis_window;

  int bins() const { return fft_len / 2 + 1; }
};

StftConfig make_stft_config();
void validate(const StftConfig& cfg);

// Causal framing: the signal is zero-padded at the front by
// (window_len - hop) samples, and frame t covers padded samples
// [t*hop, t*hop + window_len).  Frame t therefore depends only on input
// samples up to t*hop + hop, and one new frame is available per hop of
// input.  Only complete hops are framed: num_frames = len / hop.
Spectrogram stft(const std::vector<float>& samples, const StftConfig& cfg);

// Overlap-add inverse.  Output has num_frames * hop samples and is aligned
// with the input of stft() (the leading pad region is dropped).  The final
// hop has only one overlapping frame and is amplitude-tapered; everything
// before it reconstructs exactly.
std::vector<float> istft(const Spectrogram& spec, const StftConfig& cfg);

// Elementwise power-law compression applied separately to real and
// imaginary parts: y = sign(x) * |x|^alpha.  No epsilon flooring; the value
// is exactly zero at zero and the inverse uses exponent 1/alpha.
float power_law_value(float x, double alpha);
Spectrogram power_law_compress(const Spectrogram& spec, double alpha);
Spectrogram power_law_decompress(const Spectrogram& spec, double alpha);

// Magnitude / phase of an already-compressed spectrogram.  Phase uses the
// four-quadrant arctangent and is defined as 0 for a zero bin.
void features_from_compressed(const Spectrogram& compressed, Tensor& magnitude,
                              Tensor& phase);

// Convenience composition: compress, then take features.
void compressed_features(const Spectrogram& spec, double alpha,
                         Tensor& magnitude, Tensor& phase);

// Per-element kernels shared by the offline and streaming paths so both
// produce bit-identical arithmetic.
void compress_row(const float* re, const float* im, int bins, double alpha,
                  float* out_re, float* out_im);
void decompress_row(const float* re, const float* im, int bins, double alpha,
                    float* out_re, float* out_im);
void features_row(const float* re, const float* im, int bins, float* mag,
                  float* phase);

// One analysis frame: window (double) -> FFT -> float bins.  frame must hold
// window_len samples, scratch fft_len complex values.
void analysis_frame(const float* frame, const StftConfig& cfg,
                    std::vector<double>& windowed,
                    std::complex<double>* scratch, float* out_re,
                    float* out_im);

// One synthesis frame: bins -> inverse FFT -> synthesis window -> float
// contribution of window_len samples, ready for overlap-add.
void synthesis_frame(const float* re, const float* im, const StftConfig& cfg,
                     std::vector<double>& time_buf,
                     std::complex<double>* scratch, float* out_contribution);

}  // namespace ulcnet
