#pragma once

#include <vector>

#include "tensor.h"

namespace ulcnet {

// Splits the 257-bin axis into overlapping uniform subbands that become
// input channels: band b, local bin j reads global bin b*band_hop + j, and
// positions past the last real bin are zero.  With the defaults this turns
// (T, 257, 1) into (T, 48, 8) over a virtual 272-bin padded axis.
struct ReorientConfig {
  int num_bins = 257;
  int band_width = 48;
  int band_hop = 32;
  int num_bands = 8;
  int padded_bins = 272;
};

ReorientConfig make_reorient_config(int num_bins = 257, int band_width = 48,
                                    double overlap_factor = 0.33);
void validate(const ReorientConfig& cfg);

Tensor reorient(const Tensor& x, const ReorientConfig& cfg);

// One frame: in_bins has num_bins values, out is (band_width x num_bands)
// channels-last.
void reorient_frame(const float* in_bins, const ReorientConfig& cfg,
                    float* out);

// How many bands read each global bin; every bin is covered at least once.
std::vector<int> band_coverage(const ReorientConfig& cfg);

}  // namespace ulcnet
