#pragma once

#include <vector>

#include "vwmark/frame.hpp"
#include "vwmark/prng.hpp"

namespace vwmark {

enum class SvdMatrixChoice { U, V, S };

struct SvdParams {
  SvdMatrixChoice matrix_choice = SvdMatrixChoice::S;
  int per_frame_bits = 8;         // diagonal entries used per frame
  double scene_threshold = 0.35;
  // Diagonal entries with |entry| below this are skipped in U/V modes, on
  // both sides, so embed and extract stay aligned without side information.
  double skip_epsilon = 1e-9;
};

// Replace bit 6 (weight 64) of trunc(|x|), keeping fraction and sign.
// Non-finite x throws NumericError.
double set_bit7(double x, int bit);
// Bit 6 of trunc(|x|).
int get_bit7(double x);

// Per-scene embedding: every frame's (square, edge-padded if needed) luma is
// SVD-factored; diagonal position i of the chosen factor carries one payload
// bit via set_bit7 (S directly; U/V through x = 1/entry). Scene s's frames
// all carry the same per_frame_bits-wide slice of the payload, which wraps
// cyclically so every scene is filled. Payload longer than
// scene_count * per_frame_bits throws CapacityError.
VideoClip svd_embed(const VideoClip& clip, const std::vector<int>& bits,
                    const WatermarkKey& key, const SvdParams& params);

struct SvdExtraction {
  std::vector<std::vector<int>> scene_bits;  // majority vote per scene
  std::vector<int> bits;                     // cascade, truncated to nbits
};

// Reads bits back frame by frame, majority-votes within each re-detected
// scene, and concatenates scene slices in order.
SvdExtraction svd_extract(const VideoClip& clip, const WatermarkKey& key,
                          const SvdParams& params, int nbits);

}  // namespace vwmark
