#pragma once

#include <vector>

#include "vwmark/dwt.hpp"
#include "vwmark/frame.hpp"
#include "vwmark/prng.hpp"

namespace vwmark {

struct DwtParams {
  int levels = 4;
  std::vector<SubbandRef> target_bands = {{3, SubbandKind::LH},
                                          {3, SubbandKind::HL}};
  int window = 5;              // coefficient group size, odd, >= 3
  double scene_threshold = 0.35;
  // Tile geometry. 64 matches the classic construction; smaller tiles let
  // low-resolution covers host the full pattern.
  int tile_side = 64;
};

// Watermark image cut into binary tiles, one tile per scene (cyclically).
// Each tile is stored as its 8 bit planes laid side by side: a
// (8*side) x side binary pattern, row-major, plane 0 = MSB leftmost.
struct BitplaneWatermark {
  int tile_side = 64;
  int n = 0;                   // 2^n tiles
  int p = 0;                   // mosaic is 2^p tiles wide...
  int q = 0;                   // ...by 2^q tiles tall (p + q = n, p >= q)
  int source_width = 0;        // original watermark image size
  int source_height = 0;
  std::vector<std::vector<uint8_t>> tiles;      // gray tiles, side*side
  std::vector<int> scene_assignment;            // tile t -> scene

  int tile_count() const { return static_cast<int>(tiles.size()); }
  int pattern_bits() const { return 8 * tile_side * tile_side; }
  // Bit j of tile t's embedded pattern (row-major over the side-by-side
  // bit-plane image).
  int pattern_bit(int t, int j) const;
  // Rebuild a gray tile from pattern bits (inverse of the decomposition).
  static std::vector<uint8_t> assemble_tile(const std::vector<uint8_t>& bits,
                                            int side);
};

// Rescales (nearest neighbour) to side*2^p x side*2^q with
// n = floor(log2(scene_count)), p = ceil(n/2), splits into 2^n tiles and
// assigns tile t to scene t mod scene_count. scene_count < 1 throws
// UsageError.
BitplaneWatermark watermark_preprocess(const Plane& image, int scene_count,
                                       int tile_side = 64);

struct DwtDetection {
  Plane image;                     // reassembled watermark, source_dims scale
  std::vector<double> tile_ber;    // vs truth, when supplied
  double mean_ber = 0.0;
  bool sync_warning = false;       // detected scene count != embed-time count
  int scenes_used = 0;
};

// Coefficient-exchange embedding: per frame of scene s, the target-band
// coefficients (flattened in the keyed order of stream "dwt-order") are
// grouped in windows of `window`; group j encodes pattern bit j of scene
// s's tile by swapping the group's first coefficient with the group max
// (bit 1) or min (bit 0). Every frame of a scene carries the full tile.
// Band budget below window*pattern_bits throws CapacityError.
VideoClip dwt_embed(const VideoClip& clip, const BitplaneWatermark& wm,
                    const WatermarkKey& key, const DwtParams& params);

// Median detector: bit j = 1 iff the group's first coefficient exceeds the
// group median (ties read 0), majority-voted across each scene's frames,
// tiles reassembled by scene order and rescaled to (wm_width, wm_height).
// `scene_count` is the embed-time scene count; a different detected count
// sets sync_warning and proceeds on the overlap. `truth` fills tile_ber.
DwtDetection dwt_detect(const VideoClip& clip, const WatermarkKey& key,
                        const DwtParams& params, int scene_count, int wm_width,
                        int wm_height, const BitplaneWatermark* truth = nullptr);

// Keyed flattening order of the target bands (shared by embed/detect and
// exposed for the multiset-preservation tests).
std::vector<int> dwt_coefficient_order(const WatermarkKey& key, int count);

// One embedding pass over a flattened band vector: window j (entries
// flat[order[j*window + k]], k < window) encodes bits[j] by swapping its
// first coefficient with the window max (bit 1) or min (bit 0). Pure
// exchange, so every window's coefficient multiset is preserved; exposed
// with dwt_coefficient_order so that property is testable pre-IDWT.
void dwt_window_rule(std::vector<double>& flat, const std::vector<int>& order,
                     const std::vector<uint8_t>& bits, int window);

}  // namespace vwmark
