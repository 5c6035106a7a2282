#include "metrics.h"

#include <cmath>
#include <string>

#include "error.h"

namespace ulcnet {

namespace {

constexpr double kSdrCapDb = 100.0;

double dot(const std::vector<float>& a, const std::vector<float>& b) {
  double acc = 0.0;
  for (size_t i = 0; i < a.size(); ++i)
    acc += static_cast<double>(a[i]) * static_cast<double>(b[i]);
  return acc;
}

}  // namespace

double si_sdr(const std::vector<float>& reference,
              const std::vector<float>& estimate) {
  if (reference.size() != estimate.size())
    fail(ErrorCode::kDimension,
         "si-sdr: lengths disagree (" + std::to_string(reference.size()) +
             " vs " + std::to_string(estimate.size()) + ")");
  if (reference.empty()) fail(ErrorCode::kInvalidArg, "si-sdr: empty signals");
  double ref_energy = dot(reference, reference);
  if (ref_energy == 0.0)
    fail(ErrorCode::kInvalidArg, "si-sdr: reference is all zeros");

  double scale = dot(estimate, reference) / ref_energy;
  double target_energy = scale * scale * ref_energy;
  double resid_energy = 0.0;
  for (size_t i = 0; i < reference.size(); ++i) {
    double r = static_cast<double>(estimate[i]) -
               scale * static_cast<double>(reference[i]);
    resid_energy += r * r;
  }
  if (resid_energy <= 0.0) return kSdrCapDb;
  double sdr = 10.0 * std::log10(target_energy / resid_energy);
  return sdr > kSdrCapDb ? kSdrCapDb : sdr;
}

double mix_scale(const std::vector<float>& reference,
                 const std::vector<float>& noise, double snr_db) {
  if (reference.size() != noise.size())
    fail(ErrorCode::kDimension,
         "mix: lengths disagree (" + std::to_string(reference.size()) +
             " vs " + std::to_string(noise.size()) + ")");
  if (reference.empty()) fail(ErrorCode::kInvalidArg, "mix: empty signals");
  double ref_energy = dot(reference, reference);
  double noise_energy = dot(noise, noise);
  if (ref_energy == 0.0)
    fail(ErrorCode::kInvalidArg, "mix: reference is all zeros");
  if (noise_energy == 0.0)
    fail(ErrorCode::kInvalidArg, "mix: noise is all zeros");
  return std::sqrt(ref_energy / (noise_energy * std::pow(10.0, snr_db / 10.0)));
}

std::vector<float> mix_at_snr(const std::vector<float>& reference,
                              const std::vector<float>& noise, double snr_db) {
  double g = mix_scale(reference, noise, snr_db);
  std::vector<float> mix(reference.size());
  for (size_t i = 0; i < mix.size(); ++i)
    mix[i] = static_cast<float>(static_cast<double>(reference[i]) +
                                g * static_cast<double>(noise[i]));
  return mix;
}

}  // namespace ulcnet
