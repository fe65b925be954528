#include "vwmark/testclip.hpp"

#include <array>
#include <cmath>

#include "vwmark/mat.hpp"
#include "vwmark/prng.hpp"

namespace vwmark {

namespace {

constexpr int kSide = 128;
constexpr int kFramesPerScene = 16;
constexpr int kScenes = 4;
constexpr double kPi = 3.14159265358979323846;

// Distinct per-axis cycle counts keep the texture terms mutually orthogonal,
// so each term contributes one isolated singular value of exactly
// 64 * amplitude. Odd integer amplitudes put those values half-way between
// multiples of 128, where bit-carrying perturbations of the spectrum are
// farthest from a carry, and the gaps of 128 keep the descending order
// stable under attack noise. Wavelengths 4..12 px land the energy in the
// mid-band DCT bins.
constexpr int kCyclesX[7] = {11, 13, 16, 19, 23, 27, 31};
constexpr int kCyclesY[7] = {12, 14, 17, 21, 25, 29, 32};
constexpr double kAmp[7] = {19, 17, 15, 13, 11, 9, 7};

struct Rect {
  int x0 = 0, y0 = 0;  // start position
  int vx = 0, vy = 0;  // pixels per two frames
  double delta = 0.0;
};

}  // namespace

VideoClip make_acceptance_clip() {
  // Bases 45 apart: scene-cut histogram distance stays well above the
  // detection threshold even when temporal filtering blends frames across
  // a cut.
  const int bases[kScenes] = {50, 95, 140, 185};

  uint64_t state = 0;
  // Static scrolling dither field, values -3..4. Forcing the field mean to
  // exactly +1/2 parks the flat background's leading singular value
  // (128 * (base + 1/2)) mid-way between multiples of 128 as well.
  std::vector<int> dither(static_cast<size_t>(kSide) * kSide);
  long long sum = 0;
  for (int& d : dither) {
    d = static_cast<int>(splitmix64_next(state) % 8) - 3;
    sum += d;
  }
  const long long target = static_cast<long long>(kSide) * kSide / 2;
  for (size_t i = 0; sum != target; i = (i + 1) % dither.size()) {
    if (sum < target && dither[i] < 4) {
      ++dither[i];
      ++sum;
    } else if (sum > target && dither[i] > -3) {
      --dither[i];
      --sum;
    }
  }

  // Per-scene static texture and per-scene moving rectangles.
  std::vector<std::vector<double>> tex(
      kScenes, std::vector<double>(static_cast<size_t>(kSide) * kSide, 0.0));
  std::vector<std::array<Rect, 2>> rects(kScenes);
  for (int s = 0; s < kScenes; ++s) {
    std::vector<double> ux(kSide), vy(kSide);
    for (int i = 0; i < 7; ++i) {
      const double phix = uniform01(state) * 2.0 * kPi;
      const double phiy = uniform01(state) * 2.0 * kPi;
      for (int x = 0; x < kSide; ++x)
        ux[x] = std::sin(2.0 * kPi * kCyclesX[i] * x / kSide + phix);
      for (int y = 0; y < kSide; ++y)
        vy[y] = std::sin(2.0 * kPi * kCyclesY[i] * y / kSide + phiy);
      for (int y = 0; y < kSide; ++y)
        for (int x = 0; x < kSide; ++x)
          tex[s][static_cast<size_t>(y) * kSide + x] += kAmp[i] * ux[x] * vy[y];
    }
    for (int r = 0; r < 2; ++r) {
      Rect& rect = rects[s][r];
      // Paths stay interior for the whole scene: start in [8, 88], drift at
      // most 8 px.
      rect.x0 = 8 + static_cast<int>(splitmix64_next(state) % 81);
      rect.y0 = 8 + static_cast<int>(splitmix64_next(state) % 81);
      rect.vx = r == 0 ? 1 : 0;
      rect.vy = r == 0 ? 0 : 1;
      rect.delta = r == 0 ? 12.0 : -12.0;
    }
  }

  VideoClip clip;
  clip.fps = 30.0;
  clip.label = "acceptance";
  for (int f = 0; f < kScenes * kFramesPerScene; ++f) {
    const int s = f / kFramesPerScene;
    const int k = f % kFramesPerScene;
    Frame frame = Frame::make(kSide, kSide, Colorspace::RGB8);
    for (int y = 0; y < kSide; ++y)
      for (int x = 0; x < kSide; ++x) {
        double luma = bases[s] + tex[s][static_cast<size_t>(y) * kSide + x] +
                      dither[static_cast<size_t>(y) * kSide + (x + f) % kSide];
        for (const Rect& rect : rects[s]) {
          const int rx = rect.x0 + rect.vx * (k / 2);
          const int ry = rect.y0 + rect.vy * (k / 2);
          if (x >= rx && x < rx + 24 && y >= ry && y < ry + 24)
            luma += rect.delta;
        }
        // Chroma detail with exactly compensated luma: R and B carry small
        // patterns, G absorbs their BT.601 luma contribution.
        const double dr =
            8.0 * std::sin(2.0 * kPi * (3.0 * x + 2.0 * y) / kSide + s);
        const double db =
            8.0 * std::cos(2.0 * kPi * (2.0 * x - 3.0 * y) / kSide + s);
        const double dg = -(0.299 * dr + 0.114 * db) / 0.587;
        frame.planes[0].at(x, y) = quantize_u8(luma + dr);
        frame.planes[1].at(x, y) = quantize_u8(luma + dg);
        frame.planes[2].at(x, y) = quantize_u8(luma + db);
      }
    clip.frames.push_back(std::move(frame));
  }
  return clip;
}

VideoClip make_constant_clip(int width, int height, int frames, uint8_t value,
                             double fps) {
  if (width < 1 || height < 1 || frames < 1)
    throw UsageError("make_constant_clip: empty dimensions");
  VideoClip clip;
  clip.fps = fps;
  clip.label = "constant";
  for (int f = 0; f < frames; ++f)
    clip.frames.push_back(Frame::make(width, height, Colorspace::GRAY8, value));
  return clip;
}

VideoClip make_noise_clip(int width, int height, int frames, uint64_t seed) {
  if (width < 1 || height < 1 || frames < 1)
    throw UsageError("make_noise_clip: empty dimensions");
  VideoClip clip;
  clip.fps = 30.0;
  clip.label = "noise";
  uint64_t state = seed;
  for (int f = 0; f < frames; ++f) {
    Frame frame = Frame::make(width, height, Colorspace::GRAY8);
    for (uint8_t& v : frame.planes[0].samples)
      v = static_cast<uint8_t>(splitmix64_next(state) & 0xFF);
    clip.frames.push_back(std::move(frame));
  }
  return clip;
}

Plane make_watermark_image(int width, int height) {
  if (width < 2 || height < 2)
    throw UsageError("make_watermark_image: dimensions >= 2");
  Plane p(width, height);
  const double cx = (width - 1) / 2.0, cy = (height - 1) / 2.0;
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x) {
      const double r = std::hypot(x - cx, y - cy);
      const int grad = x * 255 / (width - 1);
      const bool band = static_cast<int>(r / 5.0) % 2 == 0;
      p.at(x, y) = static_cast<uint8_t>(band ? grad : 255 - grad);
    }
  return p;
}

}  // namespace vwmark
