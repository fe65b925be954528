#pragma once

#include <vector>

#include "vwmark/frame.hpp"

namespace vwmark {

struct FidelityScore {
  std::vector<double> per_frame_mse;
  std::vector<double> per_frame_psnr;  // +inf where mse == 0
  double mean_mse = 0.0;
  // 10*log10(255^2 / mean_mse); +inf iff every frame is identical.
  double mean_psnr = 0.0;
};

// MSE/PSNR over all planes. Clips must match in frame count, dimensions and
// colorspace (DimensionError otherwise).
FidelityScore psnr(const VideoClip& reference, const VideoClip& test);

// Bit error rate between two bit vectors. Accepts {0,1} or {-1,+1} alphabets
// (any value > 0 reads as 1, else 0). Length mismatch throws UsageError;
// empty vectors throw UsageError.
double ber(const std::vector<int>& a, const std::vector<int>& b);

}  // namespace vwmark
