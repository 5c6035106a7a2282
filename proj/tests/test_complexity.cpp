#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <map>
#include <string>

#include "complexity.h"
#include "doctest.h"
#include "dsp.h"
#include "json.hpp"
#include "model.h"
#include "rng.h"

using namespace ulcnet;

namespace {

const LayerCost& row(const ComplexityReport& r, const std::string& name) {
  for (const auto& l : r.layers)
    if (l.name == name) return l;
  REQUIRE_MESSAGE(false, "missing layer " << name);
  static LayerCost dummy;
  return dummy;
}

}  // namespace

TEST_CASE("per-layer parameter counts") {
  ComplexityReport r = analyze_complexity(make_default_config());
  REQUIRE(r.layers.size() == 16);

  CHECK(row(r, "reorient").params == 0);
  CHECK(row(r, "conv1").params == 320);
  CHECK(row(r, "conv2").params == 2240);
  CHECK(row(r, "conv3").params == 6496);
  CHECK(row(r, "conv4").params == 12800);
  CHECK(row(r, "fgru").params == 74496);
  CHECK(row(r, "post_fgru_pointwise").params == 8256);
  CHECK(row(r, "subband.g0.l0").params == 123648);
  CHECK(row(r, "subband.g0.l1").params == 99072);
  CHECK(row(r, "subband.g1.l0").params == 123648);
  CHECK(row(r, "subband.g1.l1").params == 99072);
  CHECK(row(r, "fc1").params == 66049);
  CHECK(row(r, "fc2").params == 66306);
  CHECK(row(r, "stage2.conv1").params == 224);
  CHECK(row(r, "stage2.conv2").params == 3104);
  CHECK(row(r, "stage2.pointwise").params == 66);

  CHECK(r.total_params == 685797);
  CHECK(r.total_params_no_bias == 680793);
  CHECK(r.stage2_params == 224 + 3104 + 66);
  CHECK(r.stage2_share == doctest::Approx(3394.0 / 685797.0));
  CHECK(r.stage2_share_no_bias == doctest::Approx(3328.0 / 680793.0));
  // The fully connected head dominates the stage-1 mask output.
  CHECK(row(r, "fc1").params + row(r, "fc2").params == 132355);
}

TEST_CASE("parameter budget") {
  ComplexityReport r = analyze_complexity(make_default_config());
  CHECK(r.total_params >= 674000);
  CHECK(r.total_params <= 702000);
  // And the analytic count is what a materialized weight set carries.
  ModelConfig cfg = make_default_config();
  CHECK(materialized_param_count(init_weights(cfg, 1)) == r.total_params);
}

TEST_CASE("per-layer multiply-accumulate counts") {
  ComplexityReport r = analyze_complexity(make_default_config());

  CHECK(row(r, "reorient").macs_per_frame == 0);
  CHECK(row(r, "conv1").macs_per_frame == 13440);
  CHECK(row(r, "conv2").macs_per_frame == 102912);
  CHECK(row(r, "conv3").macs_per_frame == 152064);
  CHECK(row(r, "conv4").macs_per_frame == 150912);
  CHECK(row(r, "fgru").macs_per_frame == 442368);
  CHECK(row(r, "post_fgru_pointwise").macs_per_frame == 49152);
  CHECK(row(r, "subband.g0.l0").macs_per_frame == 122880);
  CHECK(row(r, "subband.g0.l1").macs_per_frame == 98304);
  CHECK(row(r, "fc1").macs_per_frame == 65792);
  CHECK(row(r, "fc2").macs_per_frame == 66049);
  CHECK(row(r, "stage2.conv1").macs_per_frame == 49344);
  CHECK(row(r, "stage2.conv2").macs_per_frame == 789504);
  CHECK(row(r, "stage2.pointwise").macs_per_frame == 16448);

  CHECK(r.macs_per_frame == 2340353);
  CHECK(r.frames_per_second == doctest::Approx(62.5));
  CHECK(r.gmacs == doctest::Approx(2340353 * 62.5 / 1e9));
  CHECK(r.gmacs >= 0.065);
  CHECK(r.gmacs <= 0.15);
}

TEST_CASE("band-split separable stack versus conventional full-band stack") {
  ModelConfig cfg = make_default_config();
  std::array<int, 4> filters = cfg.conv_filters;

  uint64_t banded = conv_block_macs(48, 8, filters, true);
  uint64_t full = conv_block_macs(257, 1, filters, false);
  CHECK(banded == 419328);
  CHECK(full == 6322272);

  double ratio = conv_block_reduction_ratio(cfg);
  CHECK(ratio == doctest::Approx(static_cast<double>(full) / banded));
  CHECK(ratio > 5.0);
  CHECK(ratio == doctest::Approx(15.0772).epsilon(1e-3));

  // Comparing a stack against itself must give exactly 1.
  CHECK(static_cast<double>(conv_block_macs(48, 8, filters, true)) /
            conv_block_macs(48, 8, filters, true) ==
        1.0);
}

TEST_CASE("costs scale with the configuration") {
  ModelConfig base = make_default_config();
  ComplexityReport r0 = analyze_complexity(base);

  ModelConfig wider = base;
  wider.gru_units = 160;
  ComplexityReport r1 = analyze_complexity(wider);
  CHECK(r1.macs_per_frame > r0.macs_per_frame);
  CHECK(r1.total_params > r0.total_params);

  ModelConfig heavier = base;
  heavier.stage2_filters = 64;
  ComplexityReport r2 = analyze_complexity(heavier);
  CHECK(row(r2, "stage2.conv1").macs_per_frame ==
        2 * row(r0, "stage2.conv1").macs_per_frame);
  CHECK(r2.stage2_share > r0.stage2_share);
}

TEST_CASE("json report round-trips the numbers") {
  ComplexityReport r = analyze_complexity(make_default_config());
  nlohmann::json j = nlohmann::json::parse(complexity_json(r));

  CHECK(j["total_params"].get<uint64_t>() == 685797);
  CHECK(j["total_params_no_bias"].get<uint64_t>() == 680793);
  CHECK(j["macs_per_frame"].get<uint64_t>() == 2340353);
  CHECK(j["gmacs"].get<double>() == doctest::Approx(r.gmacs));
  CHECK(j["conv_reduction_ratio"].get<double>() ==
        doctest::Approx(r.conv_reduction_ratio));
  REQUIRE(j["layers"].is_array());
  CHECK(j["layers"].size() == 16);
  CHECK(j["layers"][1]["name"].get<std::string>() == "conv1");
  CHECK(j["layers"][1]["params"].get<uint64_t>() == 320);
}

TEST_CASE("text report carries the headline numbers") {
  ComplexityReport r = analyze_complexity(make_default_config());
  std::string text = complexity_text(r);
  CHECK(text.find("685797") != std::string::npos);
  CHECK(text.find("conv1") != std::string::npos);
  CHECK(text.find("2340353") != std::string::npos);
}

TEST_CASE("analytic rows agree with executed counts within one percent") {
  ModelConfig cfg = make_default_config();
  Model m = make_model(cfg, init_weights(cfg, 2));
  ComplexityReport r = analyze_complexity(cfg);

  const int frames = 4;
  Xoshiro256pp rng(40);
  std::vector<float> x(frames * 256);
  for (auto& v : x) v = rng.uniform(-0.5, 0.5);
  MacRecorder rec;
  enhance_spectrogram(m, stft(x, cfg.stft), &rec);

  double worst = 0.0;
  uint64_t analytic_total = 0, executed_total = 0;
  for (const auto& l : r.layers) {
    if (l.macs_per_frame == 0) continue;  // pure data movement
    REQUIRE(rec.by_layer.count(l.name) == 1);
    double executed =
        static_cast<double>(rec.by_layer.at(l.name)) / frames;
    double rel = std::abs(executed - static_cast<double>(l.macs_per_frame)) /
                 static_cast<double>(l.macs_per_frame);
    worst = std::max(worst, rel);
    analytic_total += l.macs_per_frame;
    executed_total += rec.by_layer.at(l.name);
  }
  CHECK(worst <= 0.01);
  CHECK(analytic_total == r.macs_per_frame);
  CHECK(executed_total / frames == 2340353 - 2576);
}
