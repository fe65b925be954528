#pragma once

#include <optional>
#include <vector>

#include "vwmark/detection.hpp"
#include "vwmark/frame.hpp"
#include "vwmark/prng.hpp"

namespace vwmark {

enum class HighpassKind { LAPLACIAN3X3, TEMPORAL_DIFF };

struct SpreadParams {
  int chip_rate = 4096;       // cover samples per payload bit
  double amplitude = 2.0;     // additive strength, pixel units
  HighpassKind highpass = HighpassKind::LAPLACIAN3X3;
};

// Raster order within a frame, frames concatenated. GRAY8 only (convert
// first); other colorspaces throw UsageError.
std::vector<double> line_scan(const VideoClip& clip);

// Exact inverse of line_scan for a GRAY8 clip of the given geometry.
// samples.size() != width*height*frame_count throws DimensionError.
VideoClip line_unscan(const std::vector<double>& samples, int width,
                      int height, int frame_count, double fps = 30.0);

// y_i = bits[i / cr]. Bits must be +-1 (UsageError otherwise, including 0).
std::vector<int> spread_bits(const std::vector<int>& bits, int chip_rate);

// Adds amplitude * y_i * p_i to the luma samples in line-scan order, with
// p = pn_sequence(key, "ss", n). Payload beyond capacity throws
// CapacityError. Color clips embed in luma.
VideoClip ss_embed(const VideoClip& clip, const std::vector<int>& bits,
                   const WatermarkKey& key, const SpreadParams& params);

// High-pass filter (per frame for LAPLACIAN3X3, zero-padded borders;
// successive frame difference for TEMPORAL_DIFF) of the line-scanned clip.
// Exposed for tests and reused by ss_detect.
std::vector<double> ss_filtered_signal(const VideoClip& clip,
                                       const SpreadParams& params);

// Correlation detector: s_j = sum over the j-th chip-rate window of
// p_i * filtered_i; bits = sign(s_j) with sign(0) = +1. Presence:
// mean |s_j| >= 4 * sqrt(cr) * std(filtered), and the threshold must be
// positive (an all-zero filtered signal is never "present").
DetectionResult ss_detect(const VideoClip& clip, const WatermarkKey& key,
                          const SpreadParams& params, int nbits,
                          const std::optional<std::vector<int>>& ground_truth =
                              std::nullopt);

}  // namespace vwmark
