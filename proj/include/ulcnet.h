/* Real-time speech enhancement: two-stage mask estimation on compressed
 * spectra, 16 kHz mono, hop-synchronous streaming with one window of
 * latency.
 *
 * Every fallible call returns a status code; on failure,
 * ulcnet_last_error() holds a message for the calling thread.  Buffers
 * returned through out-parameters are owned by the caller and released
 * with the matching *_free function. */
#ifndef ULCNET_H
#define ULCNET_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ulcnet_status {
  ULCNET_OK = 0,
  ULCNET_ERR_INVALID_ARG = 1,
  ULCNET_ERR_IO = 2,        /* file missing / unreadable / unwritable */
  ULCNET_ERR_FORMAT = 3,    /* malformed or unsupported file content */
  ULCNET_ERR_CONFIG = 4,    /* inconsistent configuration or weight set */
  ULCNET_ERR_DIMENSION = 5, /* buffer or tensor shape mismatch */
  ULCNET_ERR_CONTRACT = 6   /* call outside the API contract */
} ulcnet_status;

typedef struct ulcnet_model ulcnet_model;
typedef struct ulcnet_stream ulcnet_stream;

/* Message of the most recent failing call on this thread; empty string if
 * the last call succeeded. */
const char* ulcnet_last_error(void);

/* Fixed processing geometry. */
int ulcnet_sample_rate(void);     /* 16000 */
int ulcnet_hop_size(void);        /* samples per streaming chunk */
int ulcnet_latency_samples(void); /* streaming delay: one window */

/* --- model lifecycle -------------------------------------------------- */

/* Fresh model with deterministically initialized weights (same seed, same
 * weights, on every platform).  alpha in (0, 1] is the spectral
 * compression exponent; 1.0 disables compression. */
ulcnet_status ulcnet_model_create_seeded(uint64_t seed, double alpha,
                                         ulcnet_model** out);
ulcnet_status ulcnet_model_load(const char* path, double alpha,
                                ulcnet_model** out);
ulcnet_status ulcnet_model_save(const ulcnet_model* m, const char* path);
void ulcnet_model_destroy(ulcnet_model* m);
uint64_t ulcnet_model_param_count(const ulcnet_model* m);

/* --- offline processing ----------------------------------------------- */

/* Enhance n samples; out must hold n floats.  Output is time-aligned with
 * the input (no streaming delay). */
ulcnet_status ulcnet_enhance(const ulcnet_model* m, const float* in, size_t n,
                             float* out);

/* --- streaming -------------------------------------------------------- */

/* The model must outlive the stream. */
ulcnet_status ulcnet_stream_create(const ulcnet_model* m, ulcnet_stream** out);
void ulcnet_stream_destroy(ulcnet_stream* s);

/* n must equal ulcnet_hop_size(); out receives n samples delayed by
 * ulcnet_latency_samples().  Never allocates. */
ulcnet_status ulcnet_stream_process(ulcnet_stream* s, const float* in,
                                    float* out, size_t n);
ulcnet_status ulcnet_stream_reset(ulcnet_stream* s);
uint64_t ulcnet_stream_frames(const ulcnet_stream* s);
size_t ulcnet_stream_state_floats(const ulcnet_stream* s);

/* --- performance and cost accounting ---------------------------------- */

/* Real-time factor of the streaming path over `seconds` of audio on one
 * thread (processing time / audio time). */
ulcnet_status ulcnet_measure_rtf(const ulcnet_model* m, double seconds,
                                 double* rtf);

/* Per-layer parameter and multiply-accumulate breakdown of the default
 * configuration.  No model instance needed. */
ulcnet_status ulcnet_complexity_json(char** out);
ulcnet_status ulcnet_complexity_text(char** out);

/* --- quality metrics --------------------------------------------------- */

ulcnet_status ulcnet_si_sdr(const float* reference, const float* estimate,
                            size_t n, double* out);

/* Mean squared spectral distance after power-law compression with
 * exponent alpha; both signals are transformed internally. */
ulcnet_status ulcnet_compressed_mse(const float* reference,
                                    const float* estimate, size_t n,
                                    double alpha, double* out);

/* out receives reference + g*noise with g chosen to hit snr_db. */
ulcnet_status ulcnet_mix_at_snr(const float* reference, const float* noise,
                                size_t n, double snr_db, float* out);

/* --- file I/O ---------------------------------------------------------- */

/* 16-bit PCM mono WAV at the engine sample rate. */
ulcnet_status ulcnet_wav_read(const char* path, float** samples, size_t* n);
ulcnet_status ulcnet_wav_write(const char* path, const float* samples,
                               size_t n);
void ulcnet_buffer_free(float* p);

/* Listing of a weight file's tensors (name, shape, size). */
ulcnet_status ulcnet_weights_inspect(const char* path, char** out);
void ulcnet_string_free(char* p);

#ifdef __cplusplus
}
#endif

#endif /* ULCNET_H */
