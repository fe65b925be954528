#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vwmark/errors.hpp"
#include "vwmark/mat.hpp"

namespace vwmark {

enum class Colorspace { GRAY8, RGB8, YCBCR8 };

std::string colorspace_name(Colorspace cs);

// One sample plane, 8-bit, row-major.
struct Plane {
  int width = 0;
  int height = 0;
  std::vector<uint8_t> samples;

  Plane() = default;
  Plane(int w, int h, uint8_t fill = 0)
      : width(w), height(h), samples(static_cast<size_t>(w) * h, fill) {}

  uint8_t at(int x, int y) const { return samples[static_cast<size_t>(y) * width + x]; }
  uint8_t& at(int x, int y) { return samples[static_cast<size_t>(y) * width + x]; }
};

// One picture. GRAY8: 1 plane. RGB8: R,G,B planes. YCBCR8: Y,Cb,Cr planes
// (full resolution in memory; 4:2:0 subsampling happens only at the Y4M
// container boundary).
struct Frame {
  int width = 0;
  int height = 0;
  Colorspace colorspace = Colorspace::GRAY8;
  std::vector<Plane> planes;

  static Frame make(int w, int h, Colorspace cs, uint8_t fill = 0);

  // Throws DimensionError if plane count/sizes disagree with the colorspace.
  void validate() const;
};

struct VideoClip {
  std::vector<Frame> frames;
  double fps = 30.0;
  std::string label;

  int frame_count() const { return static_cast<int>(frames.size()); }
  int width() const { return frames.empty() ? 0 : frames[0].width; }
  int height() const { return frames.empty() ? 0 : frames[0].height; }
  Colorspace colorspace() const {
    return frames.empty() ? Colorspace::GRAY8 : frames[0].colorspace;
  }

  // All frames must share dimensions and colorspace.
  void validate() const;
};

// Supported conversions: RGB8 <-> YCBCR8, RGB8 <-> GRAY8 (BT.601 full-range).
// Converting to the current colorspace returns a copy. Other pairs throw
// UsageError.
Frame convert_colorspace(const Frame& f, Colorspace target);
VideoClip convert_colorspace(const VideoClip& clip, Colorspace target);

// Luma of a frame as doubles. GRAY8/YCBCR8: plane 0 verbatim. RGB8: BT.601
// luma, unrounded (analysis path).
Mat luma_matrix(const Frame& f);

// Write a modified luma plane back into a frame. GRAY8/YCBCR8: plane 0 is
// replaced (quantized). RGB8: the frame goes through YCbCr, Y is replaced,
// and the result converts back to RGB.
Frame with_luma(const Frame& f, const Mat& luma);

}  // namespace vwmark
