#include "reorient.h"

#include <cmath>
#include <string>

#include "error.h"

namespace ulcnet {

ReorientConfig make_reorient_config(int num_bins, int band_width,
                                    double overlap_factor) {
  ReorientConfig cfg;
  cfg.num_bins = num_bins;
  cfg.band_width = band_width;
  cfg.band_hop =
      static_cast<int>(std::lround(band_width * (1.0 - overlap_factor)));
  cfg.num_bands =
      (num_bins <= band_width)
          ? 1
          : static_cast<int>(
                std::ceil(static_cast<double>(num_bins - band_width) /
                          cfg.band_hop)) +
                1;
  cfg.padded_bins = (cfg.num_bands - 1) * cfg.band_hop + cfg.band_width;
  validate(cfg);
  return cfg;
}

void validate(const ReorientConfig& cfg) {
  if (cfg.num_bins < 1 || cfg.band_width < 1 || cfg.band_hop < 1 ||
      cfg.num_bands < 1)
    fail(ErrorCode::kConfig, "reorient config: non-positive field");
  if (cfg.band_hop > cfg.band_width)
    fail(ErrorCode::kConfig, "reorient config: hop exceeds band width");
  if (cfg.padded_bins != (cfg.num_bands - 1) * cfg.band_hop + cfg.band_width)
    fail(ErrorCode::kConfig, "reorient config: inconsistent padded size");
  if (cfg.padded_bins < cfg.num_bins)
    fail(ErrorCode::kConfig, "reorient config: bands do not cover all bins");
}

void reorient_frame(const float* in_bins, const ReorientConfig& cfg,
                    float* out) {
  for (int j = 0; j < cfg.band_width; ++j) {
    float* row = out + static_cast<size_t>(j) * cfg.num_bands;
    for (int b = 0; b < cfg.num_bands; ++b) {
      int bin = b * cfg.band_hop + j;
      row[b] = bin < cfg.num_bins ? in_bins[bin] : 0.0f;
    }
  }
}

Tensor reorient(const Tensor& x, const ReorientConfig& cfg) {
  validate(cfg);
  if (x.f != cfg.num_bins || x.c != 1)
    fail(ErrorCode::kDimension,
         "reorient: expected (T, " + std::to_string(cfg.num_bins) +
             ", 1) input, got (T, " + std::to_string(x.f) + ", " +
             std::to_string(x.c) + ")");
  Tensor out(x.t, cfg.band_width, cfg.num_bands);
  for (int t = 0; t < x.t; ++t) reorient_frame(x.frame(t), cfg, out.frame(t));
  return out;
}

std::vector<int> band_coverage(const ReorientConfig& cfg) {
  std::vector<int> cover(cfg.num_bins, 0);
  for (int b = 0; b < cfg.num_bands; ++b)
    for (int j = 0; j < cfg.band_width; ++j) {
      int bin = b * cfg.band_hop + j;
      if (bin < cfg.num_bins) ++cover[bin];
    }
  return cover;
}

}  // namespace ulcnet
