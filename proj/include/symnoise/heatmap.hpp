#pragma once

#include <symnoise/qbasis.hpp>

#include <string>

namespace symnoise {

// |rho_kl| in the Q eigenbasis with sector boundary annotations. Both outputs
// are deterministic byte-for-byte for a given input.
std::string heatmap_csv(const CMat& rho, const SectorSpectrum& spec);
CMat heatmap_csv_parse(const std::string& text);  // back to the magnitude matrix

struct HeatmapStyle {
  bool log_scale = false;
  double log_floor = 1e-6;  // relative to the maximum
  int cell_px = 28;
};

std::string heatmap_svg(const CMat& rho, const SectorSpectrum& spec,
                        const HeatmapStyle& style = {});

}  // namespace symnoise
