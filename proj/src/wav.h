#pragma once

#include <string>
#include <vector>

namespace ulcnet {

// 16-bit PCM mono at 16 kHz.  Samples map to [-1, 1) with a fixed 1/32768
// scale; the writer rounds to nearest and saturates.
std::vector<float> read_wav(const std::string& path);
void write_wav(const std::string& path, const std::vector<float>& samples);

}  // namespace ulcnet
