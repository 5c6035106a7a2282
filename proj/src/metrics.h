#pragma once

#include <vector>

namespace ulcnet {

// Scale-invariant signal-to-distortion ratio in dB: the estimate is
// projected onto the reference and the residual is measured against that
// projection.  Invariant under rescaling of the estimate; capped at +100 dB
// so an exact reconstruction stays finite.
double si_sdr(const std::vector<float>& reference,
              const std::vector<float>& estimate);

// Gain to apply to `noise` so that reference + gain*noise sits at `snr_db`.
double mix_scale(const std::vector<float>& reference,
                 const std::vector<float>& noise, double snr_db);

std::vector<float> mix_at_snr(const std::vector<float>& reference,
                              const std::vector<float>& noise, double snr_db);

}  // namespace ulcnet
