#pragma once

#include <cstddef>
#include <vector>

namespace ulcnet {

// Rank-3 feature tensor, (time, frequency, channel) with channels fastest.
// A frame slice is therefore a contiguous (f x c) block, which is what all
// the per-frame kernels operate on.
struct Tensor {
  int t = 0, f = 0, c = 0;
  std::vector<float> data;

  Tensor() = default;
  Tensor(int t_, int f_, int c_)
      : t(t_), f(f_), c(c_),
        data(static_cast<size_t>(t_) * f_ * c_, 0.0f) {}

  float* frame(int ti) { return data.data() + static_cast<size_t>(ti) * f * c; }
  const float* frame(int ti) const {
    return data.data() + static_cast<size_t>(ti) * f * c;
  }
  float& at(int ti, int fi, int ci) {
    return data[(static_cast<size_t>(ti) * f + fi) * c + ci];
  }
  float at(int ti, int fi, int ci) const {
    return data[(static_cast<size_t>(ti) * f + fi) * c + ci];
  }
};

// Real-valued (frames x bins) plane; used for magnitudes, phases and masks.
struct Plane {
  int frames = 0, bins = 0;
  std::vector<float> v;

  Plane() = default;
  Plane(int frames_, int bins_)
      : frames(frames_), bins(bins_),
        v(static_cast<size_t>(frames_) * bins_, 0.0f) {}

  float* row(int t) { return v.data() + static_cast<size_t>(t) * bins; }
  const float* row(int t) const {
    return v.data() + static_cast<size_t>(t) * bins;
  }
};

}  // namespace ulcnet
