#pragma once

#include <string>

#include "model.h"

namespace ulcnet {

// Container layout (little-endian):
//   "ULCW" | u16 version (=1) | u32 tensor count |
//   per tensor: u16 name length | name | u8 rank | u32 dims[rank] | f32 data
// Tensors appear in canonical order; the loader checks that order strictly
// and names the first tensor that disagrees.
void save_weights(const std::string& path, const ModelWeights& w);
ModelWeights load_weights(const std::string& path, const ModelConfig& cfg);

// Human-readable listing of a weight file's contents.  Parses the container
// only; no model configuration is consulted.
std::string inspect_weights(const std::string& path);

}  // namespace ulcnet
