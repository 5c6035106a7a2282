#pragma once

#include <cstdint>
#include <vector>

#include "model.h"

namespace ulcnet {

// Hop-by-hop enhancer.  Each call consumes one hop of input and emits one
// hop of output delayed by exactly one window (512 samples at the default
// configuration); after that offset the output is bit-identical to the
// offline path, because both run the same per-frame kernels in the same
// order.  The model must outlive the stream.  Steady-state processing does
// not allocate.
class Stream {
 public:
  explicit Stream(const Model& model);

  // n must equal the hop size.
  void process(const float* in, float* out, int n);
  void reset();

  uint64_t frames_processed() const { return frames_; }
  int hop_size() const { return model_.cfg.stft.hop; }
  int latency_samples() const { return model_.cfg.stft.window_len; }

  // float32 values carried between calls: analysis history, the two
  // synthesis accumulators, and the recurrent state.
  int state_float_count() const;

 private:
  const Model& model_;
  Workspace ws_;
  TemporalState state_;
  std::vector<float> ring_;   // last window_len input samples
  std::vector<float> ola_a_;  // hop emitted on the next call
  std::vector<float> ola_b_;  // hop still accumulating
  uint64_t frames_ = 0;
};

// Wall-clock real-time factor (processing time over audio time) of the
// streaming path on one thread, over `seconds` of deterministic noise.
double measure_rtf(const Model& model, double seconds);

}  // namespace ulcnet
