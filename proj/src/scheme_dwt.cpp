#include "vwmark/scheme_dwt.hpp"

#include <algorithm>
#include <cmath>

#include "vwmark/scene.hpp"

namespace vwmark {

int BitplaneWatermark::pattern_bit(int t, int j) const {
  // Pattern image: 8 bit planes side by side, row-major; plane 0 holds the
  // most significant bit.
  const int pw = 8 * tile_side;
  const int y = j / pw, x = j % pw;
  const int plane = x / tile_side, px = x % tile_side;
  const uint8_t g = tiles[t][static_cast<size_t>(y) * tile_side + px];
  return (g >> (7 - plane)) & 1;
}

std::vector<uint8_t> BitplaneWatermark::assemble_tile(
    const std::vector<uint8_t>& bits, int side) {
  std::vector<uint8_t> tile(static_cast<size_t>(side) * side, 0);
  const int pw = 8 * side;
  for (size_t j = 0; j < bits.size(); ++j) {
    const int y = static_cast<int>(j) / pw, x = static_cast<int>(j) % pw;
    const int plane = x / side, px = x % side;
    if (bits[j])
      tile[static_cast<size_t>(y) * side + px] |=
          static_cast<uint8_t>(1u << (7 - plane));
  }
  return tile;
}

namespace {

std::vector<uint8_t> resize_nearest(const std::vector<uint8_t>& src, int sw,
                                    int sh, int dw, int dh) {
  std::vector<uint8_t> dst(static_cast<size_t>(dw) * dh);
  for (int y = 0; y < dh; ++y) {
    const int sy = std::min(sh - 1, y * sh / dh);
    for (int x = 0; x < dw; ++x) {
      const int sx = std::min(sw - 1, x * sw / dw);
      dst[static_cast<size_t>(y) * dw + x] =
          src[static_cast<size_t>(sy) * sw + sx];
    }
  }
  return dst;
}

void validate_params(const DwtParams& params) {
  if (params.levels < 1) throw UsageError("dwt scheme: levels >= 1");
  if (params.window < 3 || params.window % 2 == 0)
    throw UsageError("dwt scheme: window must be odd and >= 3");
  if (params.target_bands.empty())
    throw UsageError("dwt scheme: no target bands");
  for (const SubbandRef& b : params.target_bands) {
    if (b.kind == SubbandKind::LL)
      throw UsageError("dwt scheme: LL band not embeddable");
    if (b.level < 1 || b.level > params.levels)
      throw UsageError("dwt scheme: band level outside decomposition");
  }
  if (params.tile_side < 2 || params.tile_side > 64)
    throw UsageError("dwt scheme: tile side must be in [2,64]");
}

std::vector<double> flatten(const DwtPyramid& pyr, const DwtParams& params) {
  std::vector<double> flat;
  for (const SubbandRef& b : params.target_bands) {
    const Mat& m = pyr.band(b);
    flat.insert(flat.end(), m.data(), m.data() + m.size());
  }
  return flat;
}

void unflatten(DwtPyramid& pyr, const DwtParams& params,
               const std::vector<double>& flat) {
  size_t pos = 0;
  for (const SubbandRef& b : params.target_bands) {
    Mat& m = pyr.band(b);
    std::copy_n(flat.begin() + pos, m.size(), m.data());
    pos += m.size();
  }
}

}  // namespace

BitplaneWatermark watermark_preprocess(const Plane& image, int scene_count,
                                       int tile_side) {
  if (scene_count < 1) throw UsageError("watermark_preprocess: scene count >= 1");
  if (image.width < 1 || image.height < 1)
    throw UsageError("watermark_preprocess: empty image");
  if (tile_side < 2 || tile_side > 64)
    throw UsageError("watermark_preprocess: tile side must be in [2,64]");

  BitplaneWatermark wm;
  wm.tile_side = tile_side;
  wm.n = scene_count > 1 ? static_cast<int>(std::floor(std::log2(scene_count)))
                         : 0;
  wm.p = (wm.n + 1) / 2;
  wm.q = wm.n - wm.p;
  wm.source_width = image.width;
  wm.source_height = image.height;

  const int w = tile_side << wm.p, h = tile_side << wm.q;
  const std::vector<uint8_t> scaled =
      resize_nearest(image.samples, image.width, image.height, w, h);

  const int tiles = 1 << wm.n;
  const int grid_w = 1 << wm.p;
  for (int t = 0; t < tiles; ++t) {
    const int tx = t % grid_w, ty = t / grid_w;
    std::vector<uint8_t> tile(static_cast<size_t>(tile_side) * tile_side);
    for (int y = 0; y < tile_side; ++y)
      for (int x = 0; x < tile_side; ++x)
        tile[static_cast<size_t>(y) * tile_side + x] =
            scaled[static_cast<size_t>(ty * tile_side + y) * w +
                   (tx * tile_side + x)];
    wm.tiles.push_back(std::move(tile));
    wm.scene_assignment.push_back(t % scene_count);
  }
  return wm;
}

std::vector<int> dwt_coefficient_order(const WatermarkKey& key, int count) {
  if (count < 1) throw UsageError("dwt_coefficient_order: count >= 1");
  std::vector<int> order(count);
  for (int i = 0; i < count; ++i) order[i] = i;
  uint64_t state = key.stream_seed("dwt-order");
  for (int i = 0; i < count - 1; ++i) {
    const int j = i + static_cast<int>(splitmix64_next(state) %
                                       static_cast<uint64_t>(count - i));
    std::swap(order[i], order[j]);
  }
  return order;
}

void dwt_window_rule(std::vector<double>& flat, const std::vector<int>& order,
                     const std::vector<uint8_t>& bits, int window) {
  if (window < 3 || window % 2 == 0)
    throw UsageError("dwt_window_rule: window must be odd and >= 3");
  if (bits.size() * static_cast<size_t>(window) > order.size())
    throw UsageError("dwt_window_rule: order too short for bit count");
  for (size_t j = 0; j < bits.size(); ++j) {
    if (bits[j] > 1) throw UsageError("dwt_window_rule: bits must be 0/1");
    const int* win = order.data() + j * static_cast<size_t>(window);
    int target = 0;
    for (int k = 1; k < window; ++k) {
      const bool better = bits[j] ? flat[win[k]] > flat[win[target]]
                                  : flat[win[k]] < flat[win[target]];
      if (better) target = k;
    }
    std::swap(flat[win[0]], flat[win[target]]);
  }
}

VideoClip dwt_embed(const VideoClip& clip, const BitplaneWatermark& wm,
                    const WatermarkKey& key, const DwtParams& params) {
  clip.validate();
  if (clip.frames.empty()) throw UsageError("dwt_embed: empty clip");
  validate_params(params);
  if (wm.tiles.empty()) throw UsageError("dwt_embed: empty watermark");

  const SceneSegmentation seg = detect_scenes(clip, params.scene_threshold);
  const int nbits = wm.pattern_bits();

  VideoClip out = clip;
  std::vector<int> order;  // built lazily once the band size is known
  for (int s = 0; s < seg.scene_count(); ++s) {
    // Scene s carries tile s when one exists; later scenes stay clean.
    if (s >= wm.tile_count()) break;
    std::vector<uint8_t> bits(static_cast<size_t>(nbits));
    for (int j = 0; j < nbits; ++j)
      bits[static_cast<size_t>(j)] = static_cast<uint8_t>(wm.pattern_bit(s, j));
    const auto [begin, end] = seg.scenes[s];
    for (int fi = begin; fi < end; ++fi) {
      Mat luma = luma_matrix(out.frames[fi]);
      DwtPyramid pyr = dwt2(luma, params.levels);
      std::vector<double> flat = flatten(pyr, params);
      if (order.empty()) {
        const int need = params.window * nbits;
        if (static_cast<int>(flat.size()) < need)
          throw CapacityError(
              "dwt_embed: target bands hold " + std::to_string(flat.size()) +
              " coefficients, pattern needs " + std::to_string(need));
        order = dwt_coefficient_order(key, static_cast<int>(flat.size()));
      }
      dwt_window_rule(flat, order, bits, params.window);
      unflatten(pyr, params, flat);
      out.frames[fi] = with_luma(out.frames[fi], idwt2(pyr));
    }
  }
  return out;
}

DwtDetection dwt_detect(const VideoClip& clip, const WatermarkKey& key,
                        const DwtParams& params, int scene_count, int wm_width,
                        int wm_height, const BitplaneWatermark* truth) {
  clip.validate();
  if (clip.frames.empty()) throw UsageError("dwt_detect: empty clip");
  validate_params(params);
  if (scene_count < 1) throw UsageError("dwt_detect: scene count >= 1");
  if (wm_width < 1 || wm_height < 1)
    throw UsageError("dwt_detect: watermark dims required");

  const int n = scene_count > 1
                    ? static_cast<int>(std::floor(std::log2(scene_count)))
                    : 0;
  const int tiles = 1 << n;
  const int p = (n + 1) / 2, q = n - p;
  const int side = params.tile_side;
  const int nbits = 8 * side * side;
  if (truth && (truth->tile_count() < tiles || truth->tile_side != side))
    throw UsageError("dwt_detect: truth watermark disagrees with scene_count");

  const SceneSegmentation seg = detect_scenes(clip, params.scene_threshold);
  DwtDetection det;
  det.sync_warning = seg.scene_count() != scene_count;
  det.scenes_used = std::min(tiles, seg.scene_count());

  std::vector<int> order;
  std::vector<std::vector<uint8_t>> tile_bits(
      tiles, std::vector<uint8_t>(nbits, 0));
  std::vector<double> median_buf(params.window);

  for (int t = 0; t < det.scenes_used; ++t) {
    const auto [begin, end] = seg.scenes[t];
    std::vector<int> votes(nbits, 0);
    int frames = 0;
    for (int fi = begin; fi < end; ++fi) {
      const Mat luma = luma_matrix(clip.frames[fi]);
      if (luma.rows() < (1 << params.levels) ||
          luma.cols() < (1 << params.levels))
        throw UsageError("dwt_detect: frames too small for decomposition");
      DwtPyramid pyr = dwt2(luma, params.levels);
      std::vector<double> flat = flatten(pyr, params);
      if (order.empty()) {
        if (static_cast<int>(flat.size()) < params.window * nbits)
          throw CapacityError("dwt_detect: band budget below pattern size");
        order = dwt_coefficient_order(key, static_cast<int>(flat.size()));
      }
      ++frames;
      for (int j = 0; j < nbits; ++j) {
        const int* win = order.data() + static_cast<size_t>(j) * params.window;
        for (int k = 0; k < params.window; ++k) median_buf[k] = flat[win[k]];
        std::nth_element(median_buf.begin(),
                         median_buf.begin() + params.window / 2,
                         median_buf.end());
        if (flat[win[0]] > median_buf[params.window / 2]) ++votes[j];
      }
    }
    for (int j = 0; j < nbits; ++j)
      tile_bits[t][j] = votes[j] * 2 > frames ? 1 : 0;
  }

  // Reassemble: tiles -> mosaic -> source-scale image.
  const int mw = side << p, mh = side << q;
  std::vector<uint8_t> mosaic(static_cast<size_t>(mw) * mh, 0);
  const int grid_w = 1 << p;
  det.tile_ber.resize(tiles, 0.0);
  double ber_sum = 0.0;
  for (int t = 0; t < tiles; ++t) {
    const std::vector<uint8_t> tile =
        BitplaneWatermark::assemble_tile(tile_bits[t], side);
    const int tx = t % grid_w, ty = t / grid_w;
    for (int y = 0; y < side; ++y)
      for (int x = 0; x < side; ++x)
        mosaic[static_cast<size_t>(ty * side + y) * mw + tx * side + x] =
            tile[static_cast<size_t>(y) * side + x];
    if (truth) {
      int errors = 0;
      for (int j = 0; j < nbits; ++j)
        errors += (tile_bits[t][j] != truth->pattern_bit(t, j));
      det.tile_ber[t] = static_cast<double>(errors) / nbits;
    }
    ber_sum += det.tile_ber[t];
  }
  det.mean_ber = truth ? ber_sum / tiles : 0.0;

  det.image = Plane(wm_width, wm_height);
  det.image.samples = resize_nearest(mosaic, mw, mh, wm_width, wm_height);
  return det;
}

}  // namespace vwmark
