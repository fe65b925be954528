#pragma once

#include <string>
#include <utility>
#include <vector>

#include "vwmark/frame.hpp"

namespace vwmark {

enum class SceneMethod { HISTOGRAM_DIFF, FIXED_LENGTH };

struct SceneSegmentation {
  SceneMethod method = SceneMethod::HISTOGRAM_DIFF;
  // Half-open [begin, end) frame ranges, in order, non-overlapping.
  std::vector<std::pair<int, int>> scenes;
  int total_frames = 0;
  // Frames below covered_end are assigned to a scene. HISTOGRAM_DIFF covers
  // everything; FIXED_LENGTH may leave an uncovered tail shorter than the
  // segment length.
  int covered_end = 0;

  int scene_count() const { return static_cast<int>(scenes.size()); }
  // Scene index owning `frame`, or -1 if uncovered.
  int scene_of(int frame) const;
  // Throws DimensionError if ranges overlap, disorder, or exceed bounds.
  void validate() const;
  std::string to_json() const;
};

// 256-bin luma histogram distance: sum |h_a - h_b| / (2*W*H), in [0, 1].
// RGB frames are binned on BT.601 luma. Dimension mismatch throws UsageError.
double histogram_difference(const Frame& a, const Frame& b);

// Cut before frame k wherever histogram_difference(frame[k-1], frame[k])
// exceeds the threshold. Empty clip or threshold outside (0, 1] throws
// UsageError.
SceneSegmentation detect_scenes(const VideoClip& clip, double threshold = 0.35);

// Partition into runs of exactly `segment_len` frames (segment_len >= 2);
// the tail shorter than segment_len stays uncovered. A clip shorter than one
// segment throws CapacityError.
SceneSegmentation wms_segments(const VideoClip& clip, int segment_len);

// First frame index of every scene.
std::vector<int> key_frames(const SceneSegmentation& seg);

}  // namespace vwmark
