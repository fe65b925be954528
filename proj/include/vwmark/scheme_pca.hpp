#pragma once

#include <vector>

#include "vwmark/detection.hpp"
#include "vwmark/frame.hpp"
#include "vwmark/prng.hpp"

namespace vwmark {

struct PcaParams {
  double alpha = 0.1;                 // relative strength
  int block = 8;                      // sample vector = block*block pixels
  int chip_count = 256;               // watermark length M
  std::vector<int> components = {0};  // principal coordinates carrying chips
  // Presence threshold on the aggregate correlation; <= 0 means calibrate
  // from 100 key-derived wrong keys (3 sigma).
  double correlation_threshold = 0.0;
  double scene_threshold = 0.35;
};

struct PcaEmbedRecord {
  VideoClip clip;
  std::vector<int> chips;       // the +-1 watermark actually embedded
  std::vector<int> key_frames;  // frames that carry it
};

// Embeds chips w = pn_sequence(key, "pca", M) into the PCA coordinates of
// 8x8 blocks of each RGB channel of every key frame (first frame of each
// detected scene): y_c <- y_c + alpha * |y_c| * w_i for each selected
// component. Non-RGB clip throws UsageError; M > block count throws
// CapacityError.
PcaEmbedRecord pca_embed(const VideoClip& clip, const WatermarkKey& key,
                         const PcaParams& params);

// Blind detector: re-detects scenes, re-fits PCA per key frame/channel,
// correlates re-projected coordinates with the keyed chips: CV = mean over
// non-erased chips of w_i * y*_i, aggregated over channels and key frames.
// present <=> aggregate > threshold (auto-calibrated when <= 0).
// correlations in the result = per (frame, channel) CVs.
DetectionResult pca_detect(const VideoClip& clip, const WatermarkKey& key,
                           const PcaParams& params);

}  // namespace vwmark
