#pragma once

#include "vwmark/frame.hpp"

namespace vwmark {

// The bundled evaluation clip: 64 frames of 128x128 RGB8, four scenes with
// hard cuts at frames 16/32/48, scrolling band-limited texture plus moving
// rectangles. Fully deterministic (internal seed 0); every call returns the
// same samples.
VideoClip make_acceptance_clip();

// Single-value GRAY8 clip.
VideoClip make_constant_clip(int width, int height, int frames,
                             uint8_t value = 128, double fps = 30.0);

// Uniform-noise GRAY8 clip for Monte-Carlo tests.
VideoClip make_noise_clip(int width, int height, int frames, uint64_t seed);

// Deterministic 8-bit grayscale pattern used as the default watermark
// image (rings plus gradient; full 0..255 range).
Plane make_watermark_image(int width = 64, int height = 64);

}  // namespace vwmark
