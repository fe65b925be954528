#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "vwmark/dwt.hpp"
#include "vwmark/errors.hpp"
#include "vwmark/prng.hpp"
#include "vwmark/scene.hpp"
#include "vwmark/scheme_dwt.hpp"
#include "vwmark/testclip.hpp"

using namespace vwmark;

namespace {

// Mid-range noise keeps reconstruction clear of the 0/255 clamps, so
// coefficient damage stays at quantization scale.
VideoClip midrange_noise_clip(int w, int h, int frames, uint64_t seed) {
  VideoClip clip;
  uint64_t state = seed;
  for (int i = 0; i < frames; ++i) {
    Frame f = Frame::make(w, h, Colorspace::GRAY8);
    for (uint8_t& s : f.planes[0].samples)
      s = static_cast<uint8_t>(96 + splitmix64_next(state) % 64);
    clip.frames.push_back(std::move(f));
  }
  return clip;
}

// Two visually distinct mid-range scenes: a hard histogram step at `cut`.
VideoClip two_scene_clip(int w, int h, int frames, int cut, uint64_t seed) {
  VideoClip clip = midrange_noise_clip(w, h, frames, seed);
  for (int i = cut; i < frames; ++i)
    for (uint8_t& s : clip.frames[i].planes[0].samples) s += 70;
  return clip;
}

DwtParams small_params() {
  DwtParams p;
  p.levels = 1;
  p.target_bands = {{1, SubbandKind::LH}, {1, SubbandKind::HL}};
  p.window = 3;
  p.tile_side = 2;  // 32-bit pattern
  return p;
}

std::vector<double> sorted_bands(const Frame& f, const DwtParams& params) {
  const DwtPyramid pyr = dwt2(luma_matrix(f), params.levels);
  std::vector<double> flat;
  for (const SubbandRef& b : params.target_bands) {
    const Mat& m = pyr.band(b);
    flat.insert(flat.end(), m.data(), m.data() + m.size());
  }
  std::sort(flat.begin(), flat.end());
  return flat;
}

}  // namespace

TEST_SUITE("scheme-dwt") {

TEST_CASE("watermark_preprocess geometry follows the scene count") {
  const Plane img = make_watermark_image(64, 64);

  const BitplaneWatermark four = watermark_preprocess(img, 4);
  CHECK(four.n == 2);
  CHECK(four.p == 1);
  CHECK(four.q == 1);
  CHECK(four.tile_count() == 4);
  CHECK(four.scene_assignment == std::vector<int>{0, 1, 2, 3});
  CHECK(four.source_width == 64);
  CHECK(four.pattern_bits() == 8 * 64 * 64);

  const BitplaneWatermark three = watermark_preprocess(img, 3);
  CHECK(three.n == 1);
  CHECK(three.p == 1);
  CHECK(three.q == 0);
  CHECK(three.tile_count() == 2);
  CHECK(three.scene_assignment == std::vector<int>{0, 1});

  const BitplaneWatermark one = watermark_preprocess(img, 1);
  CHECK(one.tile_count() == 1);
  REQUIRE(one.tiles[0].size() == 64u * 64u);

  const BitplaneWatermark small = watermark_preprocess(img, 1, 4);
  CHECK(small.tile_side == 4);
  CHECK(small.pattern_bits() == 128);

  CHECK_THROWS_AS(watermark_preprocess(img, 0), UsageError);
  CHECK_THROWS_AS(watermark_preprocess(img, 1, 1), UsageError);
  CHECK_THROWS_AS(watermark_preprocess(img, 1, 65), UsageError);
}

TEST_CASE("single-tile preprocess resamples the source") {
  // A constant image decomposes to a constant tile regardless of scale.
  Plane flat(10, 7);
  for (uint8_t& s : flat.samples) s = 200;
  const BitplaneWatermark wm = watermark_preprocess(flat, 1, 4);
  for (uint8_t v : wm.tiles[0]) CHECK(v == 200);
}

TEST_CASE("bit planes decompose and reassemble tiles exactly") {
  const int side = 4;
  const BitplaneWatermark wm =
      watermark_preprocess(make_watermark_image(32, 32), 2, side);
  for (int t = 0; t < wm.tile_count(); ++t) {
    std::vector<uint8_t> bits(wm.pattern_bits());
    for (int j = 0; j < wm.pattern_bits(); ++j)
      bits[j] = static_cast<uint8_t>(wm.pattern_bit(t, j));
    CHECK(BitplaneWatermark::assemble_tile(bits, side) == wm.tiles[t]);
  }
}

TEST_CASE("coefficient order is a keyed permutation") {
  const std::vector<int> order = dwt_coefficient_order(WatermarkKey{4}, 512);
  std::set<int> seen(order.begin(), order.end());
  CHECK(seen.size() == 512);
  CHECK(*seen.begin() == 0);
  CHECK(*seen.rbegin() == 511);
  CHECK(dwt_coefficient_order(WatermarkKey{4}, 512) == order);
  CHECK(dwt_coefficient_order(WatermarkKey{5}, 512) != order);
}

TEST_CASE("window rule is a pure exchange with the right winner") {
  const int window = 5, nbits = 12;
  uint64_t state = 0xD4;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> flat(64);
    for (double& v : flat) v = (uniform01(state) - 0.5) * 40.0;
    const std::vector<int> order =
        dwt_coefficient_order(WatermarkKey{0xD40u + static_cast<uint64_t>(trial)}, 64);
    std::vector<uint8_t> bits(nbits);
    for (uint8_t& b : bits) b = splitmix64_next(state) & 1;

    const std::vector<double> before = flat;
    dwt_window_rule(flat, order, bits, window);

    std::vector<char> covered(64, 0);
    for (int j = 0; j < nbits; ++j) {
      std::vector<double> wb(window), wa(window);
      for (int k = 0; k < window; ++k) {
        const int idx = order[j * window + k];
        covered[idx] = 1;
        wb[k] = before[idx];
        wa[k] = flat[idx];
      }
      const double first = flat[order[j * window]];
      std::sort(wb.begin(), wb.end());
      std::sort(wa.begin(), wa.end());
      CHECK(wb == wa);
      CHECK(first == (bits[j] ? wb.back() : wb.front()));
    }
    for (int idx = 0; idx < 64; ++idx)
      if (!covered[idx]) CHECK(flat[idx] == before[idx]);
  }

  std::vector<double> flat(10, 0.0);
  const std::vector<int> order = dwt_coefficient_order(WatermarkKey{1}, 10);
  CHECK_THROWS_AS(dwt_window_rule(flat, order, {1, 0}, 4), UsageError);
  CHECK_THROWS_AS(dwt_window_rule(flat, order, {1, 0, 1}, 5), UsageError);
  CHECK_THROWS_AS(dwt_window_rule(flat, order, {2, 0}, 5), UsageError);
}

TEST_CASE("embedding permutes band coefficients within quantization error") {
  const VideoClip cover = midrange_noise_clip(32, 32, 4, 70);
  const DwtParams p = small_params();
  const BitplaneWatermark wm =
      watermark_preprocess(make_watermark_image(16, 16), 1, p.tile_side);
  const VideoClip marked = dwt_embed(cover, wm, WatermarkKey{8}, p);

  for (int i = 0; i < 4; ++i) {
    const std::vector<double> before = sorted_bands(cover.frames[i], p);
    const std::vector<double> after = sorted_bands(marked.frames[i], p);
    REQUIRE(before.size() == after.size());
    double worst = 0;
    for (size_t k = 0; k < before.size(); ++k)
      worst = std::max(worst, std::abs(before[k] - after[k]));
    // The swap itself preserves the multiset exactly; pixel rounding moves
    // each Haar coefficient by at most 1.
    CHECK(worst <= 1.5);
  }
}

TEST_CASE("clean detection recovers every tile bit") {
  const VideoClip cover = midrange_noise_clip(32, 32, 8, 71);
  const DwtParams p = small_params();
  const Plane src = make_watermark_image(16, 16);
  const BitplaneWatermark wm = watermark_preprocess(src, 1, p.tile_side);
  const WatermarkKey key{0xD1};
  const VideoClip marked = dwt_embed(cover, wm, key, p);

  const DwtDetection det = dwt_detect(marked, key, p, 1, 16, 16, &wm);
  CHECK_FALSE(det.sync_warning);
  CHECK(det.scenes_used == 1);
  CHECK(det.mean_ber == 0.0);
  CHECK(det.image.width == 16);
  CHECK(det.image.height == 16);
}

TEST_CASE("two scenes carry two tiles independently") {
  const VideoClip cover = two_scene_clip(32, 32, 16, 8, 72);
  REQUIRE(detect_scenes(cover).scene_count() == 2);
  const DwtParams p = small_params();
  const BitplaneWatermark wm =
      watermark_preprocess(make_watermark_image(16, 16), 2, p.tile_side);
  REQUIRE(wm.tile_count() == 2);
  const WatermarkKey key{0xD2};
  const VideoClip marked = dwt_embed(cover, wm, key, p);

  const DwtDetection det = dwt_detect(marked, key, p, 2, 16, 16, &wm);
  CHECK_FALSE(det.sync_warning);
  CHECK(det.scenes_used == 2);
  REQUIRE(det.tile_ber.size() == 2);
  CHECK(det.tile_ber[0] == 0.0);
  CHECK(det.tile_ber[1] == 0.0);
  CHECK(det.mean_ber == 0.0);
}

TEST_CASE("scene-count disagreement raises the sync flag but proceeds") {
  const VideoClip cover = two_scene_clip(32, 32, 16, 8, 73);
  const DwtParams p = small_params();
  const BitplaneWatermark wm =
      watermark_preprocess(make_watermark_image(16, 16), 2, p.tile_side);
  const WatermarkKey key{0xD3};
  const VideoClip marked = dwt_embed(cover, wm, key, p);

  // Losing the second scene leaves fewer detected scenes than embedded.
  VideoClip cut = marked;
  cut.frames.resize(8);
  const DwtDetection det = dwt_detect(cut, key, p, 2, 16, 16, &wm);
  CHECK(det.sync_warning);
  CHECK(det.scenes_used == 1);
  REQUIRE(det.tile_ber.size() == 2);
  CHECK(det.tile_ber[0] == 0.0);  // surviving scene still decodes

  // A truth pattern that cannot cover the claimed scene count is rejected.
  const BitplaneWatermark single =
      watermark_preprocess(make_watermark_image(16, 16), 1, p.tile_side);
  CHECK_THROWS_AS(dwt_detect(marked, key, p, 2, 16, 16, &single), UsageError);
}

TEST_CASE("band budget below the pattern throws") {
  const VideoClip cover = midrange_noise_clip(16, 16, 2, 74);
  DwtParams p = small_params();
  p.tile_side = 8;  // 512 bits * window 3 > 128 level-1 coefficients
  const BitplaneWatermark wm =
      watermark_preprocess(make_watermark_image(16, 16), 1, p.tile_side);
  CHECK_THROWS_AS(dwt_embed(cover, wm, WatermarkKey{1}, p), CapacityError);
  CHECK_THROWS_AS(dwt_detect(cover, WatermarkKey{1}, p, 1, 16, 16),
                  CapacityError);
}

TEST_CASE("parameter validation") {
  const VideoClip cover = midrange_noise_clip(16, 16, 2, 75);
  const BitplaneWatermark wm =
      watermark_preprocess(make_watermark_image(16, 16), 1, 2);
  DwtParams p = small_params();
  p.window = 4;
  CHECK_THROWS_AS(dwt_embed(cover, wm, WatermarkKey{1}, p), UsageError);
  p = small_params();
  p.target_bands = {{1, SubbandKind::LL}};
  CHECK_THROWS_AS(dwt_embed(cover, wm, WatermarkKey{1}, p), UsageError);
  p = small_params();
  p.target_bands = {{2, SubbandKind::LH}};  // deeper than levels=1
  CHECK_THROWS_AS(dwt_embed(cover, wm, WatermarkKey{1}, p), UsageError);
  p = small_params();
  p.target_bands.clear();
  CHECK_THROWS_AS(dwt_embed(cover, wm, WatermarkKey{1}, p), UsageError);
}

}  // TEST_SUITE
