#include <doctest.h>

#include <set>
#include <utility>
#include <vector>

#include "vwmark/errors.hpp"
#include "vwmark/prng.hpp"
#include "vwmark/scheme_wms.hpp"
#include "vwmark/testclip.hpp"

using namespace vwmark;

namespace {

VideoClip alternating_clip(int w, int h, int frames, uint8_t lo, uint8_t hi) {
  VideoClip clip;
  for (int i = 0; i < frames; ++i)
    clip.frames.push_back(Frame::make(w, h, Colorspace::GRAY8,
                                      i % 2 ? hi : lo));
  return clip;
}

WmsParams bench_profile() {
  WmsParams p;
  p.beta = 2.0;
  p.template_count = 5;
  return p;
}

}  // namespace

TEST_SUITE("scheme-wms") {

TEST_CASE("temporal sigma and residual on an alternating segment") {
  const VideoClip clip = alternating_clip(8, 8, 32, 100, 120);
  CHECK(temporal_sigma(clip, 0, 32, 3, 4) == doctest::Approx(10.0));

  const std::vector<double> r = temporal_residual(clip, 0, 32, 3, 4);
  REQUIRE(r.size() == 32);
  double sum = 0.0;
  for (int k = 0; k < 32; ++k) {
    CHECK(r[k] == doctest::Approx(k % 2 ? 10.0 : -10.0));
    sum += r[k];
  }
  CHECK(sum == doctest::Approx(0.0));

  CHECK_THROWS_AS(temporal_sigma(clip, 0, 1, 0, 0), UsageError);
  CHECK_THROWS_AS(temporal_sigma(clip, 0, 32, 8, 0), UsageError);
  CHECK_THROWS_AS(temporal_residual(clip, 4, 5, 0, 0), UsageError);
  CHECK_THROWS_AS(temporal_residual(clip, 0, 32, 0, -1), UsageError);
}

TEST_CASE("cdma_encode spreads sign bits over the keyed chips") {
  WmsParams p;
  p.segment_frames = 4;
  p.chips_per_bit = 2;
  const WatermarkKey key{0x77};
  const std::vector<int> chips = pn_sequence(key, "cdma-chips", 4).chips;

  const std::vector<double> w = cdma_encode({1, -1}, key, p);
  REQUIRE(w.size() == 4);
  CHECK(w[0] == chips[0]);
  CHECK(w[1] == chips[1]);
  CHECK(w[2] == -chips[2]);
  CHECK(w[3] == -chips[3]);

  CHECK_THROWS_AS(cdma_encode({1}, key, p), UsageError);          // 1*2 != 4
  CHECK_THROWS_AS(cdma_encode({1, 0}, key, p), UsageError);       // not +-1
  CHECK_THROWS_AS(cdma_encode({1, -1, 1}, key, p), UsageError);
}

TEST_CASE("keyed position sets are disjoint and sized per role") {
  WmsParams p = bench_profile();
  p.sync_copies = 2;
  const auto sets = wms_position_sets(WatermarkKey{0x42}, p, 48, 48);
  REQUIRE(sets.size() == 4u);  // template, payload, sync-0, sync-1
  CHECK(sets[0].size() == 5u);
  CHECK(sets[1].size() == 16u);
  CHECK(sets[2].size() == 5u);
  CHECK(sets[3].size() == 5u);

  std::set<std::pair<int, int>> all;
  for (const auto& s : sets)
    for (const auto& pos : s) {
      CHECK(pos.first >= 0);
      CHECK(pos.first < 48);
      CHECK(pos.second >= 0);
      CHECK(pos.second < 48);
      CHECK(all.insert(pos).second);  // never seen before
    }

  CHECK_THROWS_AS(wms_position_sets(WatermarkKey{1}, p, 4, 4), CapacityError);
}

TEST_CASE("template embedding is found at offset zero") {
  const VideoClip cover = make_constant_clip(48, 48, 32);
  WmsParams p = bench_profile();
  p.beta = 4.0;
  const WatermarkKey key{0x91};
  const VideoClip em = embed_template(cover, 0, 32, key, p);

  const TemplateDetection det = detect_template(em, 0, 32, key, p);
  CHECK(det.found);
  CHECK(det.start_offset == 0);
  CHECK(det.hits.size() >= 3u);
  for (const auto& h : det.hits) CHECK(h.score > 0.5);
}

TEST_CASE("cyclic frame delay shows up as the consensus offset") {
  const VideoClip cover = make_constant_clip(48, 48, 32);
  WmsParams p = bench_profile();
  p.beta = 4.0;
  const WatermarkKey key{0x92};
  const VideoClip em = embed_template(cover, 0, 32, key, p);

  VideoClip rot = em;
  for (int k = 0; k < 32; ++k) rot.frames[(k + 3) % 32] = em.frames[k];
  const TemplateDetection det = detect_template(rot, 0, 32, key, p);
  CHECK(det.found);
  CHECK(det.start_offset == 3);
}

TEST_CASE("zero beta embeds nothing") {
  const VideoClip cover = make_constant_clip(16, 16, 32);
  WmsParams p;
  p.beta = 0.0;
  const VideoClip out = wms_embed(cover, {1, -1, -1, 1}, WatermarkKey{5}, p);
  REQUIRE(out.frames.size() == cover.frames.size());
  for (size_t i = 0; i < out.frames.size(); ++i)
    CHECK(out.frames[i].planes[0].samples == cover.frames[i].planes[0].samples);
}

TEST_CASE("clean payload round trip on a still cover") {
  const VideoClip cover = make_constant_clip(48, 48, 64);  // two segments
  const WmsParams p = bench_profile();
  const std::vector<int> payload = {1, -1, -1, 1};
  for (uint64_t seed : {0xA1ull, 0xB2ull, 0xC3ull}) {
    const WatermarkKey key{seed};
    const VideoClip marked = wms_embed(cover, payload, key, p);
    const DetectionResult det = wms_detect(marked, key, p, 4, payload);
    CHECK(det.present);
    REQUIRE(det.bits.size() == 4);
    CHECK(det.bits == std::vector<int>{1, 0, 0, 1});
    REQUIRE(det.ber_vs_truth.has_value());
    CHECK(*det.ber_vs_truth == 0.0);
  }
}

TEST_CASE("wrong key and blank cover stay silent") {
  const VideoClip cover = make_constant_clip(48, 48, 64);
  const WmsParams p = bench_profile();
  const WatermarkKey key{0xA1};
  const VideoClip marked = wms_embed(cover, {1, -1, -1, 1}, key, p);

  const DetectionResult wrong = wms_detect(marked, WatermarkKey{0xF00}, p, 4);
  CHECK_FALSE(wrong.present);

  // No templates anywhere: detector reports a miss with no decoded bits.
  const DetectionResult blank = wms_detect(cover, key, p, 4);
  CHECK_FALSE(blank.present);
  CHECK(blank.bits.empty());
}

TEST_CASE("parameter validation") {
  const VideoClip cover = make_constant_clip(48, 48, 32);
  WmsParams p;
  p.segment_frames = 33;
  CHECK_THROWS_AS(wms_embed(cover, {1}, WatermarkKey{1}, p), UsageError);
  p = WmsParams{};
  p.chips_per_bit = 7;
  CHECK_THROWS_AS(wms_embed(cover, {1}, WatermarkKey{1}, p), UsageError);
  p = WmsParams{};
  p.template_count = 2;
  CHECK_THROWS_AS(wms_embed(cover, {1}, WatermarkKey{1}, p), UsageError);
  p = WmsParams{};
  p.detect_threshold = 0.0;
  CHECK_THROWS_AS(wms_detect(cover, WatermarkKey{1}, p, 1), UsageError);
  p = WmsParams{};
  p.detect_threshold = 1.5;
  CHECK_THROWS_AS(wms_detect(cover, WatermarkKey{1}, p, 1), UsageError);
  p = WmsParams{};
  p.beta = -1.0;
  CHECK_THROWS_AS(wms_embed(cover, {1}, WatermarkKey{1}, p), UsageError);
  CHECK_THROWS_AS(wms_embed(cover, {}, WatermarkKey{1}, WmsParams{}),
                  UsageError);
  CHECK_THROWS_AS(wms_embed(cover, {1, 0}, WatermarkKey{1}, WmsParams{}),
                  UsageError);
}

}  // TEST_SUITE
