#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vwmark/detection.hpp"
#include "vwmark/frame.hpp"
#include "vwmark/prng.hpp"

namespace vwmark {

// Temporal-axis CDMA watermarking over fixed-length frame segments.
struct WmsParams {
  int segment_frames = 32;        // N, power of two
  double beta = 1.0;              // global scaling factor
  int chips_per_bit = 8;          // M = Tb/Tc; must divide N
  int template_count = 3;         // >= 3
  int payload_positions = 16;     // pixels carrying the CDMA payload
  int sync_copies = 1;            // q extra keyed position sets
  double detect_threshold = 0.6;  // per-template correlation threshold
  // Presence threshold on the aggregate payload statistic; <= 0 means
  // calibrate from 100 key-derived wrong keys (4 sigma).
  double presence_threshold = 0.0;
  int search_radius = 8;          // template search window, +- pixels
};

struct TemplateDetection {
  struct Hit {
    int x = 0;
    int y = 0;
    int template_index = 0;
    int offset = 0;       // temporal offset l at the best correlation
    double score = 0.0;   // normalized correlation
  };
  std::vector<Hit> hits;
  int start_offset = 0;   // consensus l
  bool found = false;     // >= 3 hits above threshold agreeing on l

  std::string to_json() const;
};

// Population standard deviation of the luma at (x, y) across the segment
// frames [begin, end). Fewer than 2 frames throws UsageError.
double temporal_sigma(const VideoClip& clip, int begin, int end, int x, int y);

// Per-pixel temporal mean removal: filtered(k) = value(k) - mean over the
// segment. The prediction filter used by all detectors here.
std::vector<double> temporal_residual(const VideoClip& clip, int begin,
                                      int end, int x, int y);

// Embeds the keyed time-axis templates into one segment (in place on a
// copy): luma(k) += beta * (sigma + 1) * v_i(k) at each template position.
VideoClip embed_template(const VideoClip& clip, int begin, int end,
                         const WatermarkKey& key, const WmsParams& params);

// Searches the +-search_radius neighbourhood of every keyed template
// position over all cyclic offsets l for normalized correlation above
// detect_threshold. found requires >= 3 hits agreeing on one l.
TemplateDetection detect_template(const VideoClip& clip, int begin, int end,
                                  const WatermarkKey& key,
                                  const WmsParams& params);

// DS-CDMA spreading: W(k) = bits[k / M] * c(k) with
// c = pn_sequence(key, "cdma-chips", N). bits.size() * M != N throws
// UsageError.
std::vector<double> cdma_encode(const std::vector<int>& bits,
                                const WatermarkKey& key,
                                const WmsParams& params);

// Full embedding: templates + sync copies + payload chips, each at disjoint
// keyed position sets, per segment. Payload bits are repetition-coded over
// the available (position, bit-slot) capacity.
VideoClip wms_embed(const VideoClip& clip, const std::vector<int>& bits,
                    const WatermarkKey& key, const WmsParams& params);

// Detection: template search fixes the temporal offset per segment; payload
// correlations are folded across positions and segments by majority
// weighting. Template miss on every segment returns present=false with
// empty bits.
DetectionResult wms_detect(const VideoClip& clip, const WatermarkKey& key,
                           const WmsParams& params, int nbits,
                           const std::optional<std::vector<int>>&
                               ground_truth = std::nullopt);

// The disjoint keyed position sets used by one segment, in stream order:
// "template", "payload", then "sync-0" .. "sync-(q-1)". Exposed for the
// disjointness property tests.
std::vector<std::vector<std::pair<int, int>>> wms_position_sets(
    const WatermarkKey& key, const WmsParams& params, int width, int height);

}  // namespace vwmark
