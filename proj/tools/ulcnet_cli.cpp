#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "ulcnet.h"

namespace {

int fail_with(ulcnet_status st) {
  std::fprintf(stderr, "ulcnet: %s\n", ulcnet_last_error());
  // Missing or unreadable files are usage-level mistakes, like bad flags.
  return st == ULCNET_ERR_IO ? 2 : 1;
}

struct WavBuffer {
  float* samples = nullptr;
  size_t n = 0;
  ~WavBuffer() { ulcnet_buffer_free(samples); }
};

struct ModelHandle {
  ulcnet_model* m = nullptr;
  ~ModelHandle() { ulcnet_model_destroy(m); }
};

int cmd_enhance(const std::string& in, const std::string& out,
                const std::string& weights, double alpha) {
  WavBuffer wav;
  if (ulcnet_status st = ulcnet_wav_read(in.c_str(), &wav.samples, &wav.n))
    return fail_with(st);
  if (wav.n == 0) {
    std::fprintf(stderr, "ulcnet: %s is empty\n", in.c_str());
    return 1;
  }
  ModelHandle model;
  if (ulcnet_status st = ulcnet_model_load(weights.c_str(), alpha, &model.m))
    return fail_with(st);
  std::vector<float> enhanced(wav.n);
  if (ulcnet_status st =
          ulcnet_enhance(model.m, wav.samples, wav.n, enhanced.data()))
    return fail_with(st);
  if (ulcnet_status st = ulcnet_wav_write(out.c_str(), enhanced.data(), wav.n))
    return fail_with(st);
  std::printf("wrote %s (%zu samples, %.2f s)\n", out.c_str(), wav.n,
              static_cast<double>(wav.n) / ulcnet_sample_rate());
  return 0;
}

int cmd_bench(const std::string& weights, uint64_t seed, double seconds,
              double alpha, bool json) {
  ModelHandle model;
  ulcnet_status st =
      weights.empty()
          ? ulcnet_model_create_seeded(seed, alpha, &model.m)
          : ulcnet_model_load(weights.c_str(), alpha, &model.m);
  if (st) return fail_with(st);
  double rtf = 0.0;
  if ((st = ulcnet_measure_rtf(model.m, seconds, &rtf))) return fail_with(st);
  if (json) {
    nlohmann::json j{{"rtf", rtf},
                     {"seconds", seconds},
                     {"hop", ulcnet_hop_size()},
                     {"latency_samples", ulcnet_latency_samples()},
                     {"realtime", rtf < 1.0}};
    std::printf("%s\n", j.dump(2).c_str());
  } else {
    std::printf("rtf %.4f over %.1f s of audio (%.1fx real time)\n", rtf,
                seconds, 1.0 / rtf);
  }
  return 0;
}

int cmd_count(bool json) {
  char* text = nullptr;
  ulcnet_status st =
      json ? ulcnet_complexity_json(&text) : ulcnet_complexity_text(&text);
  if (st) return fail_with(st);
  std::printf("%s%s", text, json ? "\n" : "");
  ulcnet_string_free(text);
  return 0;
}

int cmd_metrics(const std::string& estimate, const std::string& reference,
                double alpha, bool json) {
  WavBuffer est, ref;
  if (ulcnet_status st =
          ulcnet_wav_read(estimate.c_str(), &est.samples, &est.n))
    return fail_with(st);
  if (ulcnet_status st =
          ulcnet_wav_read(reference.c_str(), &ref.samples, &ref.n))
    return fail_with(st);
  if (est.n != ref.n) {
    std::fprintf(stderr,
                 "ulcnet: length mismatch (%zu vs %zu samples); compare "
                 "aligned files\n",
                 est.n, ref.n);
    return 1;
  }
  double sdr = 0.0, mse = 0.0;
  if (ulcnet_status st = ulcnet_si_sdr(ref.samples, est.samples, ref.n, &sdr))
    return fail_with(st);
  if (ulcnet_status st =
          ulcnet_compressed_mse(ref.samples, est.samples, ref.n, alpha, &mse))
    return fail_with(st);
  if (json) {
    nlohmann::json j{{"si_sdr_db", sdr}, {"compressed_mse", mse}};
    std::printf("%s\n", j.dump(2).c_str());
  } else {
    std::printf("si-sdr %.2f dB\ncompressed mse %.6g\n", sdr, mse);
  }
  return 0;
}

int cmd_init_weights(uint64_t seed, const std::string& out, double alpha) {
  ModelHandle model;
  if (ulcnet_status st = ulcnet_model_create_seeded(seed, alpha, &model.m))
    return fail_with(st);
  if (ulcnet_status st = ulcnet_model_save(model.m, out.c_str()))
    return fail_with(st);
  std::printf("wrote %s (%llu parameters, seed %llu)\n", out.c_str(),
              static_cast<unsigned long long>(ulcnet_model_param_count(model.m)),
              static_cast<unsigned long long>(seed));
  return 0;
}

int cmd_inspect(const std::string& weights) {
  char* text = nullptr;
  if (ulcnet_status st = ulcnet_weights_inspect(weights.c_str(), &text))
    return fail_with(st);
  std::fputs(text, stdout);
  ulcnet_string_free(text);
  return 0;
}

}  // namespace

int cli_main(int argc, char** argv) {
  CLI::App app{"Real-time speech enhancement (16 kHz mono)"};
  app.require_subcommand(1);
  int rc = 0;

  auto* enh = app.add_subcommand("enhance", "Denoise a WAV file");
  std::string enh_in, enh_out, enh_weights;
  double enh_alpha = 0.3;
  enh->add_option("--in", enh_in, "noisy input WAV")->required();
  enh->add_option("--out", enh_out, "enhanced output WAV")->required();
  enh->add_option("--weights", enh_weights, "weight file")->required();
  enh->add_option("--alpha", enh_alpha, "compression exponent (default 0.3)");
  enh->callback(
      [&] { rc = cmd_enhance(enh_in, enh_out, enh_weights, enh_alpha); });

  auto* bench = app.add_subcommand("bench", "Measure the real-time factor");
  std::string bench_weights;
  uint64_t bench_seed = 1;
  double bench_seconds = 10.0, bench_alpha = 0.3;
  bool bench_json = false;
  bench->add_option("--weights", bench_weights,
                    "weight file (default: seeded weights)");
  bench->add_option("--seed", bench_seed, "seed when no weight file is given");
  bench->add_option("--seconds", bench_seconds, "audio duration to process");
  bench->add_option("--alpha", bench_alpha, "compression exponent");
  bench->add_flag("--json", bench_json, "machine-readable output");
  bench->callback([&] {
    rc = cmd_bench(bench_weights, bench_seed, bench_seconds, bench_alpha,
                   bench_json);
  });

  auto* count =
      app.add_subcommand("count", "Print the parameter and MAC breakdown");
  bool count_json = false;
  count->add_flag("--json", count_json, "machine-readable output");
  count->callback([&] { rc = cmd_count(count_json); });

  auto* metrics =
      app.add_subcommand("metrics", "Compare an estimate against a reference");
  std::string met_est, met_ref;
  double met_alpha = 0.3;
  bool met_json = false;
  metrics->add_option("--estimate", met_est, "estimate WAV")->required();
  metrics->add_option("--reference", met_ref, "reference WAV")->required();
  metrics->add_option("--alpha", met_alpha, "compression exponent");
  metrics->add_flag("--json", met_json, "machine-readable output");
  metrics->callback(
      [&] { rc = cmd_metrics(met_est, met_ref, met_alpha, met_json); });

  auto* init =
      app.add_subcommand("init-weights", "Write deterministic seeded weights");
  uint64_t init_seed = 1;
  std::string init_out;
  double init_alpha = 0.3;
  init->add_option("--seed", init_seed, "random seed")->required();
  init->add_option("--out", init_out, "output weight file")->required();
  init->add_option("--alpha", init_alpha, "compression exponent");
  init->callback([&] { rc = cmd_init_weights(init_seed, init_out, init_alpha); });

  auto* inspect = app.add_subcommand("inspect", "List a weight file's tensors");
  std::string inspect_weights_path;
  inspect->add_option("--weights", inspect_weights_path, "weight file")
      ->required();
  inspect->callback([&] { rc = cmd_inspect(inspect_weights_path); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  return rc;
}

int main(int argc, char** argv) { return cli_main(argc, argv); }
