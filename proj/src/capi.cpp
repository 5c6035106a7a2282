#include "ulcnet.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>
#include <vector>

#include "complexity.h"
#include "dsp.h"
#include "error.h"
#include "metrics.h"
#include "model.h"
#include "stream.h"
#include "wav.h"
#include "weights_io.h"

struct ulcnet_model {
  ulcnet::Model m;
};

struct ulcnet_stream {
  explicit ulcnet_stream(const ulcnet::Model& m) : s(m) {}
  ulcnet::Stream s;
};

namespace {

thread_local std::string g_last_error;

template <typename Fn>
ulcnet_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return ULCNET_OK;
  } catch (const ulcnet::Error& e) {
    g_last_error = e.what();
    return static_cast<ulcnet_status>(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return ULCNET_ERR_INVALID_ARG;
  }
}

[[noreturn]] void require_failed(const char* what) {
  ulcnet::fail(ulcnet::ErrorCode::kInvalidArg,
               std::string(what) + " must not be null");
}

void require(const void* p, const char* what) {
  if (!p) require_failed(what);
}

char* dup_string(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

}  // namespace

extern "C" {

const char* ulcnet_last_error(void) { return g_last_error.c_str(); }

int ulcnet_sample_rate(void) { return ulcnet::kSampleRate; }

int ulcnet_hop_size(void) { return ulcnet::StftConfig{}.hop; }

int ulcnet_latency_samples(void) { return ulcnet::StftConfig{}.window_len; }

ulcnet_status ulcnet_model_create_seeded(uint64_t seed, double alpha,
                                         ulcnet_model** out) {
  return guarded([&] {
    require(out, "out");
    ulcnet::ModelConfig cfg = ulcnet::make_default_config(alpha);
    *out = new ulcnet_model{
        ulcnet::make_model(cfg, ulcnet::init_weights(cfg, seed))};
  });
}

ulcnet_status ulcnet_model_load(const char* path, double alpha,
                                ulcnet_model** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    ulcnet::ModelConfig cfg = ulcnet::make_default_config(alpha);
    *out = new ulcnet_model{
        ulcnet::make_model(cfg, ulcnet::load_weights(path, cfg))};
  });
}

ulcnet_status ulcnet_model_save(const ulcnet_model* m, const char* path) {
  return guarded([&] {
    require(m, "model");
    require(path, "path");
    ulcnet::save_weights(path, m->m.weights);
  });
}

void ulcnet_model_destroy(ulcnet_model* m) { delete m; }

uint64_t ulcnet_model_param_count(const ulcnet_model* m) {
  return m ? ulcnet::materialized_param_count(m->m.weights) : 0;
}

ulcnet_status ulcnet_enhance(const ulcnet_model* m, const float* in, size_t n,
                             float* out) {
  return guarded([&] {
    require(m, "model");
    require(in, "in");
    require(out, "out");
    std::vector<float> samples(in, in + n);
    std::vector<float> enhanced = ulcnet::enhance_signal(m->m, samples);
    if (!enhanced.empty())
      std::memcpy(out, enhanced.data(), enhanced.size() * sizeof(float));
  });
}

ulcnet_status ulcnet_stream_create(const ulcnet_model* m,
                                   ulcnet_stream** out) {
  return guarded([&] {
    require(m, "model");
    require(out, "out");
    *out = new ulcnet_stream(m->m);
  });
}

void ulcnet_stream_destroy(ulcnet_stream* s) { delete s; }

ulcnet_status ulcnet_stream_process(ulcnet_stream* s, const float* in,
                                    float* out, size_t n) {
  return guarded([&] {
    require(s, "stream");
    require(in, "in");
    require(out, "out");
    s->s.process(in, out, static_cast<int>(n));
  });
}

ulcnet_status ulcnet_stream_reset(ulcnet_stream* s) {
  return guarded([&] {
    require(s, "stream");
    s->s.reset();
  });
}

uint64_t ulcnet_stream_frames(const ulcnet_stream* s) {
  return s ? s->s.frames_processed() : 0;
}

size_t ulcnet_stream_state_floats(const ulcnet_stream* s) {
  return s ? static_cast<size_t>(s->s.state_float_count()) : 0;
}

ulcnet_status ulcnet_measure_rtf(const ulcnet_model* m, double seconds,
                                 double* rtf) {
  return guarded([&] {
    require(m, "model");
    require(rtf, "rtf");
    *rtf = ulcnet::measure_rtf(m->m, seconds);
  });
}

ulcnet_status ulcnet_complexity_json(char** out) {
  return guarded([&] {
    require(out, "out");
    *out = dup_string(ulcnet::complexity_json(
        ulcnet::analyze_complexity(ulcnet::make_default_config())));
  });
}

ulcnet_status ulcnet_complexity_text(char** out) {
  return guarded([&] {
    require(out, "out");
    *out = dup_string(ulcnet::complexity_text(
        ulcnet::analyze_complexity(ulcnet::make_default_config())));
  });
}

ulcnet_status ulcnet_si_sdr(const float* reference, const float* estimate,
                            size_t n, double* out) {
  return guarded([&] {
    require(reference, "reference");
    require(estimate, "estimate");
    require(out, "out");
    *out = ulcnet::si_sdr(std::vector<float>(reference, reference + n),
                          std::vector<float>(estimate, estimate + n));
  });
}

ulcnet_status ulcnet_compressed_mse(const float* reference,
                                    const float* estimate, size_t n,
                                    double alpha, double* out) {
  return guarded([&] {
    require(reference, "reference");
    require(estimate, "estimate");
    require(out, "out");
    ulcnet::StftConfig stft = ulcnet::make_stft_config();
    std::vector<float> ref(reference, reference + n);
    std::vector<float> est(estimate, estimate + n);
    *out = ulcnet::compressed_mse(ulcnet::stft(est, stft),
                                  ulcnet::stft(ref, stft), alpha);
  });
}

ulcnet_status ulcnet_mix_at_snr(const float* reference, const float* noise,
                                size_t n, double snr_db, float* out) {
  return guarded([&] {
    require(reference, "reference");
    require(noise, "noise");
    require(out, "out");
    std::vector<float> mixed =
        ulcnet::mix_at_snr(std::vector<float>(reference, reference + n),
                           std::vector<float>(noise, noise + n), snr_db);
    std::memcpy(out, mixed.data(), mixed.size() * sizeof(float));
  });
}

ulcnet_status ulcnet_wav_read(const char* path, float** samples, size_t* n) {
  return guarded([&] {
    require(path, "path");
    require(samples, "samples");
    require(n, "n");
    std::vector<float> s = ulcnet::read_wav(path);
    float* p = static_cast<float*>(
        std::malloc(s.empty() ? sizeof(float) : s.size() * sizeof(float)));
    if (!p) throw std::bad_alloc();
    if (!s.empty()) std::memcpy(p, s.data(), s.size() * sizeof(float));
    *samples = p;
    *n = s.size();
  });
}

ulcnet_status ulcnet_wav_write(const char* path, const float* samples,
                               size_t n) {
  return guarded([&] {
    require(path, "path");
    require(samples, "samples");
    ulcnet::write_wav(path, std::vector<float>(samples, samples + n));
  });
}

void ulcnet_buffer_free(float* p) { std::free(p); }

ulcnet_status ulcnet_weights_inspect(const char* path, char** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = dup_string(ulcnet::inspect_weights(path));
  });
}

void ulcnet_string_free(char* p) { std::free(p); }

}  // extern "C"
