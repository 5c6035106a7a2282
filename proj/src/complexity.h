#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "model.h"

namespace ulcnet {

// Closed-form cost of one layer.  macs_per_frame follows the usual
// accounting: one multiply-accumulate per weight application, with
// convolutions priced at their full tap count (no edge discount); bias
// adds, activations and gate products are not counted.
struct LayerCost {
  std::string name;
  uint64_t params = 0;
  uint64_t macs_per_frame = 0;
  std::string output_shape;
};

struct ComplexityReport {
  std::vector<LayerCost> layers;
  uint64_t total_params = 0;
  uint64_t total_params_no_bias = 0;
  uint64_t stage2_params = 0;
  double stage2_share = 0.0;          // biases included
  double stage2_share_no_bias = 0.0;  // biases excluded on both sides
  uint64_t macs_per_frame = 0;
  double frames_per_second = 0.0;
  double gmacs = 0.0;
  double conv_reduction_ratio = 0.0;
};

ComplexityReport analyze_complexity(const ModelConfig& cfg);

// MACs per frame of the four-layer frequency conv stack starting from
// `freq` positions and `in_ch` channels, with 2x pooling after layers 2-4.
// separable=false prices conventional full convolutions at the same filter
// counts, which is the baseline the reduction ratio is measured against.
uint64_t conv_block_macs(int freq, int in_ch, const std::array<int, 4>& filters,
                         bool separable);

// Conventional full-band stack (bins x 1 input, full convolutions) over the
// configured band-split separable stack.
double conv_block_reduction_ratio(const ModelConfig& cfg);

std::string complexity_json(const ComplexityReport& r);
std::string complexity_text(const ComplexityReport& r);

}  // namespace ulcnet
