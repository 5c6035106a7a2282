#pragma once

#include <array>
#include <cstdint>

namespace ulcnet {

// xoshiro256++ seeded through splitmix64.  The generator is spelled out here
// (rather than using std::mt19937 + a distribution) so that a given seed
// produces bit-identical streams on every platform and standard library.
class Xoshiro256pp {
 public:
  explicit Xoshiro256pp(uint64_t seed) {
    uint64_t x = seed;
    for (auto& v : s_) {
      x += 0x9e3779b97f4a7c15ULL;
      uint64_t z = x;
      z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
      z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
      v = z ^ (z >> 31);
    }
  }

  uint64_t next() {
    uint64_t r = rotl(s_[0] + s_[3], 23) + s_[0];
    uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return r;
  }

  // Uniform in [0, 1) with 53 bits of randomness.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  float uniform(double lo, double hi) {
    return static_cast<float>(lo + uniform01() * (hi - lo));
  }

 private:
  static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  std::array<uint64_t, 4> s_;
};

}  // namespace ulcnet
