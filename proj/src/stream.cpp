#include "stream.h"

#include <algorithm>
#include <chrono>
#include <string>

#include "error.h"
#include "rng.h"

namespace ulcnet {

Stream::Stream(const Model& model)
    : model_(model),
      ws_(model.cfg),
      state_(make_temporal_state(model.cfg)),
      ring_(model.cfg.stft.window_len, 0.0f),
      ola_a_(model.cfg.stft.hop, 0.0f),
      ola_b_(model.cfg.stft.hop, 0.0f) {}

void Stream::process(const float* in, float* out, int n) {
  const StftConfig& stft = model_.cfg.stft;
  const int hop = stft.hop;
  if (n != hop)
    fail(ErrorCode::kContract, "stream: chunk must be " + std::to_string(hop) +
                                   " samples, got " + std::to_string(n));

  // Slide the analysis history and run the frame that just became complete.
  std::copy(ring_.begin() + hop, ring_.end(), ring_.begin());
  std::copy_n(in, hop, ring_.end() - hop);
  analysis_frame(ring_.data(), stft, ws_.windowed, ws_.fft_buf.data(),
                 ws_.spec_re.data(), ws_.spec_im.data());

  const int bins = model_.cfg.bins();
  const double alpha = model_.cfg.alpha;
  compress_row(ws_.spec_re.data(), ws_.spec_im.data(), bins, alpha,
               ws_.comp_re.data(), ws_.comp_im.data());
  features_row(ws_.comp_re.data(), ws_.comp_im.data(), bins, ws_.mag.data(),
               ws_.phase.data());
  stage1_frame(model_, ws_.mag.data(), state_, ws_, ws_.mask.data());
  fuse_frame(ws_.mask.data(), ws_.phase.data(), ws_.mag.data(), bins,
             model_.cfg.fusion, ws_.fused.data());
  stage2_frame(model_, ws_.fused.data(), ws_, ws_.cm_re.data(),
               ws_.cm_im.data());
  apply_crm_row(ws_.comp_re.data(), ws_.comp_im.data(), ws_.cm_re.data(),
                ws_.cm_im.data(), bins, ws_.out_re.data(), ws_.out_im.data());
  decompress_row(ws_.out_re.data(), ws_.out_im.data(), bins, alpha,
                 ws_.spec_re.data(), ws_.spec_im.data());
  synthesis_frame(ws_.spec_re.data(), ws_.spec_im.data(), stft, ws_.synth_time,
                  ws_.fft_buf.data(), ws_.contribution.data());

  // The first half of this frame's contribution completes the hop begun by
  // the previous frame; its second half opens the next one.  Emitting the
  // hop finished one call earlier puts the delay at exactly one window.
  for (int i = 0; i < hop; ++i) ola_b_[i] += ws_.contribution[i];
  std::copy_n(ola_a_.data(), hop, out);
  std::copy(ola_b_.begin(), ola_b_.end(), ola_a_.begin());
  std::copy_n(ws_.contribution.data() + hop, hop, ola_b_.begin());

  ++frames_;
}

void Stream::reset() {
  std::fill(ring_.begin(), ring_.end(), 0.0f);
  std::fill(ola_a_.begin(), ola_a_.end(), 0.0f);
  std::fill(ola_b_.begin(), ola_b_.end(), 0.0f);
  state_.reset();
  frames_ = 0;
}

int Stream::state_float_count() const {
  const ModelConfig& cfg = model_.cfg;
  return cfg.stft.window_len + 2 * cfg.stft.hop +
         cfg.num_groups * cfg.gru_layers * cfg.gru_units;
}

double measure_rtf(const Model& model, double seconds) {
  if (!(seconds > 0.0))
    fail(ErrorCode::kInvalidArg, "rtf: duration must be positive");
  const int hop = model.cfg.stft.hop;
  const uint64_t chunks = static_cast<uint64_t>(
      (seconds * kSampleRate + hop - 1) / hop);

  std::vector<float> audio(chunks * hop);
  Xoshiro256pp rng(0x5eedu);
  for (auto& s : audio) s = rng.uniform(-0.5, 0.5);
  std::vector<float> out(hop);

  Stream stream(model);
  auto start = std::chrono::steady_clock::now();
  for (uint64_t c = 0; c < chunks; ++c)
    stream.process(audio.data() + c * hop, out.data(), hop);
  auto stop = std::chrono::steady_clock::now();

  double processing =
      std::chrono::duration<double>(stop - start).count();
  double audio_time = static_cast<double>(chunks) * hop / kSampleRate;
  return processing / audio_time;
}

}  // namespace ulcnet
