#include "complexity.h"

#include <iomanip>
#include <sstream>

#include "error.h"
#include "json.hpp"

namespace ulcnet {

namespace {

uint64_t gru_params(int input, int units) {
  return 3ull * input * units + 3ull * units * units + 6ull * units;
}

uint64_t gru_macs(int input, int units) {
  return 3ull * input * units + 3ull * units * units;
}

std::string shape2(int a, int b) {
  return std::to_string(a) + "x" + std::to_string(b);
}

}  // namespace

uint64_t conv_block_macs(int freq, int in_ch, const std::array<int, 4>& filters,
                         bool separable) {
  uint64_t total = 0;
  int f = freq, cin = in_ch;
  for (int i = 0; i < 4; ++i) {
    int cout = filters[i];
    if (separable)
      total += static_cast<uint64_t>(f) * 3 * cin +
               static_cast<uint64_t>(f) * cin * cout;
    else
      total += static_cast<uint64_t>(f) * 3 * cin * cout;
    if (i > 0) f /= 2;  // pooling follows layers 2-4
    cin = cout;
  }
  return total;
}

double conv_block_reduction_ratio(const ModelConfig& cfg) {
  uint64_t conventional =
      conv_block_macs(cfg.bins(), 1, cfg.conv_filters, false);
  uint64_t banded = conv_block_macs(cfg.reorient.band_width,
                                    cfg.reorient.num_bands, cfg.conv_filters,
                                    true);
  if (banded == 0) fail(ErrorCode::kConfig, "complexity: empty conv stack");
  return static_cast<double>(conventional) / static_cast<double>(banded);
}

ComplexityReport analyze_complexity(const ModelConfig& cfg) {
  validate(cfg);
  ComplexityReport r;
  uint64_t bias_total = 0, stage2_bias = 0;

  auto add = [&](const std::string& name, uint64_t params, uint64_t biases,
                 uint64_t macs, const std::string& shape, bool stage2) {
    r.layers.push_back({name, params, macs, shape});
    r.total_params += params;
    bias_total += biases;
    r.macs_per_frame += macs;
    if (stage2) {
      r.stage2_params += params;
      stage2_bias += biases;
    }
  };

  const int bw = cfg.reorient.band_width;
  const int nb = cfg.reorient.num_bands;
  add("reorient", 0, 0, 0, shape2(bw, nb), false);

  int f = bw, cin = nb;
  for (int i = 0; i < 4; ++i) {
    int cout = cfg.conv_filters[i];
    uint64_t params = 3ull * cin + cin + static_cast<uint64_t>(cin) * cout + cout;
    uint64_t macs = static_cast<uint64_t>(f) * 3 * cin +
                    static_cast<uint64_t>(f) * cin * cout;
    if (i > 0) f /= 2;
    add("conv" + std::to_string(i + 1), params, static_cast<uint64_t>(cin) + cout,
        macs, shape2(f, cout), false);
    cin = cout;
  }

  const int u = cfg.fgru_units;
  add("fgru", 2 * gru_params(cin, u), 2ull * 6 * u,
      2ull * f * gru_macs(cin, u), shape2(f, 2 * u), false);

  const int pc = cfg.post_fgru_channels;
  add("post_fgru_pointwise", 2ull * u * pc + pc, pc,
      static_cast<uint64_t>(f) * 2 * u * pc, shape2(f, pc), false);

  int gin = cfg.group_size();
  for (int g = 0; g < cfg.num_groups; ++g) {
    int in = gin;
    for (int l = 0; l < cfg.gru_layers; ++l) {
      add("subband.g" + std::to_string(g) + ".l" + std::to_string(l),
          gru_params(in, cfg.gru_units), 6ull * cfg.gru_units,
          gru_macs(in, cfg.gru_units), std::to_string(cfg.gru_units), false);
      in = cfg.gru_units;
    }
  }

  const int concat = cfg.num_groups * cfg.gru_units;
  add("fc1", static_cast<uint64_t>(concat) * cfg.fc_neurons + cfg.fc_neurons,
      cfg.fc_neurons, static_cast<uint64_t>(concat) * cfg.fc_neurons,
      std::to_string(cfg.fc_neurons), false);
  add("fc2",
      static_cast<uint64_t>(cfg.fc_neurons) * cfg.fc_neurons + cfg.fc_neurons,
      cfg.fc_neurons,
      static_cast<uint64_t>(cfg.fc_neurons) * cfg.fc_neurons,
      std::to_string(cfg.fc_neurons), false);

  const int bins = cfg.bins();
  const int taps = cfg.stage2_taps;
  const int sf = cfg.stage2_filters;
  add("stage2.conv1", static_cast<uint64_t>(taps) * 2 * sf + sf, sf,
      static_cast<uint64_t>(bins) * taps * 2 * sf, shape2(bins, sf), true);
  add("stage2.conv2", static_cast<uint64_t>(taps) * sf * sf + sf, sf,
      static_cast<uint64_t>(bins) * taps * sf * sf, shape2(bins, sf), true);
  add("stage2.pointwise", static_cast<uint64_t>(sf) * 2 + 2, 2,
      static_cast<uint64_t>(bins) * sf * 2, shape2(bins, 2), true);

  r.total_params_no_bias = r.total_params - bias_total;
  r.stage2_share = static_cast<double>(r.stage2_params) / r.total_params;
  r.stage2_share_no_bias = static_cast<double>(r.stage2_params - stage2_bias) /
                           r.total_params_no_bias;
  r.frames_per_second = cfg.frames_per_second();
  r.gmacs = static_cast<double>(r.macs_per_frame) * r.frames_per_second / 1e9;
  r.conv_reduction_ratio = conv_block_reduction_ratio(cfg);
  return r;
}

std::string complexity_json(const ComplexityReport& r) {
  nlohmann::json j;
  j["layers"] = nlohmann::json::array();
  for (const auto& l : r.layers)
    j["layers"].push_back({{"name", l.name},
                           {"params", l.params},
                           {"macs_per_frame", l.macs_per_frame},
                           {"output_shape", l.output_shape}});
  j["total_params"] = r.total_params;
  j["total_params_no_bias"] = r.total_params_no_bias;
  j["stage2_params"] = r.stage2_params;
  j["stage2_share"] = r.stage2_share;
  j["stage2_share_no_bias"] = r.stage2_share_no_bias;
  j["macs_per_frame"] = r.macs_per_frame;
  j["frames_per_second"] = r.frames_per_second;
  j["gmacs"] = r.gmacs;
  j["conv_reduction_ratio"] = r.conv_reduction_ratio;
  return j.dump(2);
}

std::string complexity_text(const ComplexityReport& r) {
  std::ostringstream os;
  os << std::left << std::setw(22) << "layer" << std::right << std::setw(10)
     << "params" << std::setw(14) << "macs/frame" << "  shape\n";
  for (const auto& l : r.layers)
    os << std::left << std::setw(22) << l.name << std::right << std::setw(10)
       << l.params << std::setw(14) << l.macs_per_frame << "  "
       << l.output_shape << "\n";
  os << std::left << std::setw(22) << "total" << std::right << std::setw(10)
     << r.total_params << std::setw(14) << r.macs_per_frame << "\n";
  os << std::fixed;
  os << "params (no bias):     " << r.total_params_no_bias << "\n";
  os << std::setprecision(3);
  os << "second-stage share:   " << 100.0 * r.stage2_share << "% ("
     << 100.0 * r.stage2_share_no_bias << "% excluding biases)\n";
  os << std::setprecision(4);
  os << "gmacs:                " << r.gmacs << " (" << r.macs_per_frame
     << " macs/frame at " << std::setprecision(1) << r.frames_per_second
     << " fps)\n";
  os << std::setprecision(2);
  os << "conv stack reduction: " << r.conv_reduction_ratio << "x\n";
  return os.str();
}

}  // namespace ulcnet
