#include "vwmark/scene.hpp"

#include <array>
#include <cmath>

#include <json.hpp>

namespace vwmark {

int SceneSegmentation::scene_of(int frame) const {
  for (size_t i = 0; i < scenes.size(); ++i)
    if (frame >= scenes[i].first && frame < scenes[i].second)
      return static_cast<int>(i);
  return -1;
}

void SceneSegmentation::validate() const {
  int expect = 0;
  for (const auto& [begin, end] : scenes) {
    if (begin != expect || end <= begin)
      throw DimensionError("SceneSegmentation: ranges must tile [0, covered_end)");
    expect = end;
  }
  if (expect != covered_end || covered_end > total_frames || covered_end < 0)
    throw DimensionError("SceneSegmentation: coverage bookkeeping broken");
}

std::string SceneSegmentation::to_json() const {
  nlohmann::ordered_json j;
  j["method"] =
      method == SceneMethod::HISTOGRAM_DIFF ? "HISTOGRAM_DIFF" : "FIXED_LENGTH";
  j["total_frames"] = total_frames;
  j["covered_end"] = covered_end;
  auto arr = nlohmann::ordered_json::array();
  for (const auto& [begin, end] : scenes) arr.push_back({begin, end});
  j["scenes"] = arr;
  return j.dump();
}

namespace {

std::array<int, 256> luma_histogram(const Frame& f) {
  std::array<int, 256> h{};
  if (f.colorspace == Colorspace::RGB8) {
    const auto& r = f.planes[0].samples;
    const auto& g = f.planes[1].samples;
    const auto& b = f.planes[2].samples;
    for (size_t i = 0; i < r.size(); ++i) {
      const double y = 0.299 * r[i] + 0.587 * g[i] + 0.114 * b[i];
      ++h[quantize_u8(y)];
    }
  } else {
    for (uint8_t s : f.planes[0].samples) ++h[s];
  }
  return h;
}

}  // namespace

double histogram_difference(const Frame& a, const Frame& b) {
  a.validate();
  b.validate();
  if (a.width != b.width || a.height != b.height)
    throw UsageError("histogram_difference: dimension mismatch");
  const auto ha = luma_histogram(a);
  const auto hb = luma_histogram(b);
  long long acc = 0;
  for (int i = 0; i < 256; ++i) acc += std::abs(ha[i] - hb[i]);
  return static_cast<double>(acc) /
         (2.0 * static_cast<double>(a.width) * a.height);
}

SceneSegmentation detect_scenes(const VideoClip& clip, double threshold) {
  if (clip.frames.empty()) throw UsageError("detect_scenes: empty clip");
  if (!(threshold > 0.0 && threshold <= 1.0))
    throw UsageError("detect_scenes: threshold must be in (0, 1]");

  SceneSegmentation seg;
  seg.method = SceneMethod::HISTOGRAM_DIFF;
  seg.total_frames = clip.frame_count();
  seg.covered_end = seg.total_frames;
  int begin = 0;
  for (int k = 1; k < clip.frame_count(); ++k) {
    if (histogram_difference(clip.frames[k - 1], clip.frames[k]) > threshold) {
      seg.scenes.emplace_back(begin, k);
      begin = k;
    }
  }
  seg.scenes.emplace_back(begin, clip.frame_count());
  return seg;
}

SceneSegmentation wms_segments(const VideoClip& clip, int segment_len) {
  if (segment_len < 2) throw UsageError("wms_segments: segment length >= 2");
  if (clip.frame_count() < segment_len)
    throw CapacityError("wms_segments: clip shorter than one segment");

  SceneSegmentation seg;
  seg.method = SceneMethod::FIXED_LENGTH;
  seg.total_frames = clip.frame_count();
  const int full = clip.frame_count() / segment_len;
  for (int s = 0; s < full; ++s)
    seg.scenes.emplace_back(s * segment_len, (s + 1) * segment_len);
  seg.covered_end = full * segment_len;
  return seg;
}

std::vector<int> key_frames(const SceneSegmentation& seg) {
  std::vector<int> out;
  out.reserve(seg.scenes.size());
  for (const auto& [begin, end] : seg.scenes) out.push_back(begin);
  return out;
}

}  // namespace vwmark
