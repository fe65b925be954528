#pragma once

#include <optional>
#include <vector>

#include "vwmark/detection.hpp"
#include "vwmark/frame.hpp"
#include "vwmark/prng.hpp"

namespace vwmark {

struct DctParams {
  int chip_rate = 512;
  double amplitude = 10.0;
  // Zig-zag indices of the 8x8 block carrying chips; DC (index 0) excluded.
  std::vector<int> band = {6, 7, 8, 9, 10, 11, 12, 13, 14};
};

// Number of host coefficients one clip offers at these params:
// frames * blocks_per_frame * band size.
long long dct_capacity(const VideoClip& clip, const DctParams& params);

// Spread-spectrum embedding in block-DCT mid-band coefficients of the luma
// plane. Walk order: frames -> 8x8 blocks in raster order -> band
// coefficients in zig-zag order. Coefficient i gains
// amplitude * y_i * p_i with p = pn_sequence(key, "dct", n). Frames are
// edge-padded to block multiples, padding stripped after the inverse.
// Capacity shortfall throws CapacityError.
VideoClip dct_embed(const VideoClip& clip, const std::vector<int>& bits,
                    const WatermarkKey& key, const DctParams& params);

// Band coefficients of the clip in embed walk order (first n entries).
// Exposed so tests can diff the walk against an independent derivation.
std::vector<double> dct_walk_coefficients(const VideoClip& clip,
                                          const DctParams& params,
                                          long long n);

// Correlates chips directly against the walked band coefficients; s_j and
// the sign/presence rules match the spread-spectrum detector.
DetectionResult dct_detect(const VideoClip& clip, const WatermarkKey& key,
                           const DctParams& params, int nbits,
                           const std::optional<std::vector<int>>&
                               ground_truth = std::nullopt);

}  // namespace vwmark
