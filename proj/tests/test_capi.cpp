#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "ulcnet.h"

namespace {

std::vector<float> deterministic_noise(size_t n, uint32_t seed) {
  // Small LCG; the C surface should not depend on the core's generator.
  std::vector<float> x(n);
  uint64_t state = seed;
  for (auto& v : x) {
    state = state * 6364136223846793005ULL + 1442695040888963407ULL;
    v = static_cast<float>(static_cast<int32_t>(state >> 33)) /
        static_cast<float>(1u << 31) * 0.5f;
  }
  return x;
}

std::vector<uint8_t> slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  REQUIRE(f.good());
  return std::vector<uint8_t>(std::istreambuf_iterator<char>(f), {});
}

struct ModelGuard {
  ulcnet_model* m = nullptr;
  ~ModelGuard() { ulcnet_model_destroy(m); }
};

struct StreamGuard {
  ulcnet_stream* s = nullptr;
  ~StreamGuard() { ulcnet_stream_destroy(s); }
};

}  // namespace

TEST_CASE("geometry constants") {
  CHECK(ulcnet_sample_rate() == 16000);
  CHECK(ulcnet_hop_size() == 256);
  CHECK(ulcnet_latency_samples() == 512);
}

TEST_CASE("model lifecycle and persistence") {
  ModelGuard g;
  REQUIRE(ulcnet_model_create_seeded(7, 0.3, &g.m) == ULCNET_OK);
  CHECK(ulcnet_model_param_count(g.m) == 685797);

  std::string path = "/tmp/ulcnet_capi_w.ulcw";
  REQUIRE(ulcnet_model_save(g.m, path.c_str()) == ULCNET_OK);

  ModelGuard loaded;
  REQUIRE(ulcnet_model_load(path.c_str(), 0.3, &loaded.m) == ULCNET_OK);
  CHECK(ulcnet_model_param_count(loaded.m) == 685797);

  // The loaded model must reproduce the original's output bit for bit.
  std::vector<float> x = deterministic_noise(4096, 1);
  std::vector<float> y1(x.size()), y2(x.size());
  REQUIRE(ulcnet_enhance(g.m, x.data(), x.size(), y1.data()) == ULCNET_OK);
  REQUIRE(ulcnet_enhance(loaded.m, x.data(), x.size(), y2.data()) == ULCNET_OK);
  CHECK(std::memcmp(y1.data(), y2.data(), x.size() * sizeof(float)) == 0);

  // Same-seed models written twice give byte-identical files.
  ModelGuard again;
  REQUIRE(ulcnet_model_create_seeded(7, 0.3, &again.m) == ULCNET_OK);
  std::string path2 = "/tmp/ulcnet_capi_w2.ulcw";
  REQUIRE(ulcnet_model_save(again.m, path2.c_str()) == ULCNET_OK);
  CHECK(slurp(path) == slurp(path2));

  std::remove(path.c_str());
  std::remove(path2.c_str());
}

TEST_CASE("failures set a status and a thread-local message") {
  ModelGuard g;
  CHECK(ulcnet_model_load("/tmp/ulcnet_missing_file.ulcw", 0.3, &g.m) ==
        ULCNET_ERR_IO);
  CHECK(std::string(ulcnet_last_error()).size() > 0);

  CHECK(ulcnet_model_create_seeded(1, 1.5, &g.m) == ULCNET_ERR_CONFIG);
  CHECK(std::string(ulcnet_last_error()).find("alpha") != std::string::npos);

  // A garbage weight file is a format error, not an io error.
  std::string path = "/tmp/ulcnet_capi_garbage.ulcw";
  {
    std::ofstream f(path, std::ios::binary);
    f << "definitely not weights";
  }
  CHECK(ulcnet_model_load(path.c_str(), 0.3, &g.m) == ULCNET_ERR_FORMAT);
  std::remove(path.c_str());

  CHECK(ulcnet_model_create_seeded(1, 0.3, nullptr) == ULCNET_ERR_INVALID_ARG);
  CHECK(ulcnet_enhance(nullptr, nullptr, 0, nullptr) ==
        ULCNET_ERR_INVALID_ARG);

  // A successful call clears the message.
  REQUIRE(ulcnet_model_create_seeded(1, 0.3, &g.m) == ULCNET_OK);
  CHECK(std::string(ulcnet_last_error()).empty());
}

TEST_CASE("offline enhancement is deterministic and length-preserving") {
  ModelGuard g;
  REQUIRE(ulcnet_model_create_seeded(3, 0.3, &g.m) == ULCNET_OK);
  std::vector<float> x = deterministic_noise(5000, 2);
  std::vector<float> y1(x.size()), y2(x.size());
  REQUIRE(ulcnet_enhance(g.m, x.data(), x.size(), y1.data()) == ULCNET_OK);
  REQUIRE(ulcnet_enhance(g.m, x.data(), x.size(), y2.data()) == ULCNET_OK);
  CHECK(std::memcmp(y1.data(), y2.data(), x.size() * sizeof(float)) == 0);
  for (float v : y1) CHECK(std::isfinite(v));
}

TEST_CASE("streaming through the C surface matches offline") {
  ModelGuard g;
  REQUIRE(ulcnet_model_create_seeded(9, 0.3, &g.m) == ULCNET_OK);

  StreamGuard s;
  REQUIRE(ulcnet_stream_create(g.m, &s.s) == ULCNET_OK);
  CHECK(ulcnet_stream_state_floats(s.s) == 1536);
  CHECK(ulcnet_stream_frames(s.s) == 0);

  const size_t n = 8192;
  std::vector<float> x = deterministic_noise(n, 3);
  std::vector<float> offline(n), streamed(n);
  REQUIRE(ulcnet_enhance(g.m, x.data(), n, offline.data()) == ULCNET_OK);
  for (size_t off = 0; off < n; off += 256)
    REQUIRE(ulcnet_stream_process(s.s, x.data() + off, streamed.data() + off,
                                  256) == ULCNET_OK);
  CHECK(ulcnet_stream_frames(s.s) == n / 256);

  double worst = 0.0;
  for (size_t k = 0; k + 512 < n; ++k)
    worst = std::max(worst, std::abs(static_cast<double>(streamed[k + 512]) -
                                     offline[k]));
  CHECK(worst == 0.0);

  // Wrong chunk size violates the streaming contract.
  CHECK(ulcnet_stream_process(s.s, x.data(), streamed.data(), 100) ==
        ULCNET_ERR_CONTRACT);
  CHECK(std::string(ulcnet_last_error()).find("256") != std::string::npos);

  REQUIRE(ulcnet_stream_reset(s.s) == ULCNET_OK);
  CHECK(ulcnet_stream_frames(s.s) == 0);
}

TEST_CASE("complexity reports through the C surface") {
  char* json = nullptr;
  REQUIRE(ulcnet_complexity_json(&json) == ULCNET_OK);
  REQUIRE(json != nullptr);
  nlohmann::json j = nlohmann::json::parse(json);
  CHECK(j["total_params"].get<uint64_t>() == 685797);
  CHECK(j["gmacs"].get<double>() > 0.065);
  CHECK(j["gmacs"].get<double>() < 0.15);
  ulcnet_string_free(json);

  char* text = nullptr;
  REQUIRE(ulcnet_complexity_text(&text) == ULCNET_OK);
  CHECK(std::string(text).find("685797") != std::string::npos);
  ulcnet_string_free(text);
}

TEST_CASE("metrics through the C surface") {
  std::vector<float> ref = deterministic_noise(4000, 5);
  std::vector<float> noise = deterministic_noise(4000, 6);

  double sdr = 0.0;
  REQUIRE(ulcnet_si_sdr(ref.data(), ref.data(), ref.size(), &sdr) == ULCNET_OK);
  CHECK(sdr == 100.0);

  std::vector<float> mixed(ref.size());
  REQUIRE(ulcnet_mix_at_snr(ref.data(), noise.data(), ref.size(), 0.0,
                            mixed.data()) == ULCNET_OK);
  REQUIRE(ulcnet_si_sdr(ref.data(), mixed.data(), ref.size(), &sdr) ==
          ULCNET_OK);
  CHECK(sdr < 10.0);  // a 0 dB mixture is far from clean

  double mse = 0.0;
  REQUIRE(ulcnet_compressed_mse(ref.data(), ref.data(), ref.size(), 0.3,
                                &mse) == ULCNET_OK);
  CHECK(mse == 0.0);
  REQUIRE(ulcnet_compressed_mse(ref.data(), mixed.data(), ref.size(), 0.3,
                                &mse) == ULCNET_OK);
  CHECK(mse > 0.0);
}

TEST_CASE("wav and weight-listing round-trips") {
  std::vector<float> x = deterministic_noise(3000, 7);
  std::string path = "/tmp/ulcnet_capi_rt.wav";
  REQUIRE(ulcnet_wav_write(path.c_str(), x.data(), x.size()) == ULCNET_OK);

  float* back = nullptr;
  size_t n = 0;
  REQUIRE(ulcnet_wav_read(path.c_str(), &back, &n) == ULCNET_OK);
  REQUIRE(n == x.size());
  double worst = 0.0;
  for (size_t i = 0; i < n; ++i)
    worst = std::max(worst, std::abs(static_cast<double>(back[i]) - x[i]));
  CHECK(worst <= 1.0 / 32768.0);
  ulcnet_buffer_free(back);
  std::remove(path.c_str());

  ModelGuard g;
  REQUIRE(ulcnet_model_create_seeded(11, 0.3, &g.m) == ULCNET_OK);
  std::string wpath = "/tmp/ulcnet_capi_inspect.ulcw";
  REQUIRE(ulcnet_model_save(g.m, wpath.c_str()) == ULCNET_OK);
  char* listing = nullptr;
  REQUIRE(ulcnet_weights_inspect(wpath.c_str(), &listing) == ULCNET_OK);
  CHECK(std::string(listing).find("100 tensors") != std::string::npos);
  ulcnet_string_free(listing);
  std::remove(wpath.c_str());
}

TEST_CASE("real-time factor through the C surface") {
  ModelGuard g;
  REQUIRE(ulcnet_model_create_seeded(13, 0.3, &g.m) == ULCNET_OK);
  double rtf = 0.0;
  REQUIRE(ulcnet_measure_rtf(g.m, 0.5, &rtf) == ULCNET_OK);
  CHECK(rtf > 0.0);
  CHECK(rtf < 1.0);
  CHECK(ulcnet_measure_rtf(g.m, -1.0, &rtf) == ULCNET_ERR_INVALID_ARG);
}
