#include "vwmark/scheme_wms.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>

#include "vwmark/mat.hpp"
#include "vwmark/metrics.hpp"
#include "vwmark/scene.hpp"

namespace vwmark {

namespace {

void validate_params(const WmsParams& p) {
  const int n = p.segment_frames;
  if (n < 2 || (n & (n - 1)) != 0)
    throw UsageError("wms scheme: N must be a power of two >= 2");
  if (p.chips_per_bit < 1 || n % p.chips_per_bit != 0)
    throw UsageError("wms scheme: M must divide N");
  if (p.template_count < 3) throw UsageError("wms scheme: template_count >= 3");
  if (p.payload_positions < 1)
    throw UsageError("wms scheme: payload_positions >= 1");
  if (p.sync_copies < 0) throw UsageError("wms scheme: sync_copies >= 0");
  if (p.beta < 0.0) throw UsageError("wms scheme: beta >= 0");
  if (p.detect_threshold <= 0.0 || p.detect_threshold > 1.0)
    throw UsageError("wms scheme: detect_threshold in (0,1]");
  if (p.search_radius < 0) throw UsageError("wms scheme: search_radius >= 0");
}

void check_segment(const VideoClip& clip, int begin, int end,
                   const WmsParams& params) {
  if (begin < 0 || end > clip.frame_count() || begin >= end)
    throw UsageError("wms scheme: bad segment bounds");
  if (end - begin != params.segment_frames)
    throw UsageError("wms scheme: segment length must equal N");
}

double luma_at(const Frame& f, int x, int y) {
  if (f.colorspace == Colorspace::RGB8)
    return 0.299 * f.planes[0].at(x, y) + 0.587 * f.planes[1].at(x, y) +
           0.114 * f.planes[2].at(x, y);
  return f.planes[0].at(x, y);
}

// Luma shift that leaves chroma alone: equal shift of R,G,B moves BT.601 luma
// by exactly the shift, Y plane carries it directly otherwise.
void add_luma(Frame& f, int x, int y, double delta) {
  if (f.colorspace == Colorspace::RGB8) {
    for (Plane& p : f.planes) p.at(x, y) = quantize_u8(p.at(x, y) + delta);
  } else {
    f.planes[0].at(x, y) = quantize_u8(f.planes[0].at(x, y) + delta);
  }
}

std::vector<ChipSequence> wms_sequences(const WatermarkKey& key,
                                        const WmsParams& params) {
  return orthogonal_set(key, "wms-orth",
                        params.template_count + params.sync_copies,
                        params.segment_frames);
}

// x' = a x + b y + c, y' = d x + e y + f. Defaults to identity.
struct AffineMap {
  double a = 1, b = 0, c = 0;
  double d = 0, e = 1, f = 0;
};

std::pair<int, int> apply_affine(const AffineMap& m, int x, int y) {
  return {static_cast<int>(std::lround(m.a * x + m.b * y + m.c)),
          static_cast<int>(std::lround(m.d * x + m.e * y + m.f))};
}

bool solve3(double mat[3][3], double rhs[3], double out[3]) {
  int perm[3] = {0, 1, 2};
  for (int col = 0; col < 3; ++col) {
    int pivot = col;
    for (int r = col + 1; r < 3; ++r)
      if (std::abs(mat[perm[r]][col]) > std::abs(mat[perm[pivot]][col]))
        pivot = r;
    std::swap(perm[col], perm[pivot]);
    const double p = mat[perm[col]][col];
    if (std::abs(p) < 1e-9) return false;
    for (int r = col + 1; r < 3; ++r) {
      const double factor = mat[perm[r]][col] / p;
      for (int c = col; c < 3; ++c) mat[perm[r]][c] -= factor * mat[perm[col]][c];
      rhs[perm[r]] -= factor * rhs[perm[col]];
    }
  }
  for (int col = 2; col >= 0; --col) {
    double s = rhs[perm[col]];
    for (int c = col + 1; c < 3; ++c) s -= mat[perm[col]][c] * out[c];
    out[col] = s / mat[perm[col]][col];
  }
  return true;
}

// Least-squares affine from nominal -> detected correspondences. Fewer than
// three points, or a collinear configuration, falls back to the mean
// translation.
AffineMap fit_affine(const std::vector<std::pair<int, int>>& nominal,
                     const std::vector<std::pair<int, int>>& detected) {
  AffineMap m;
  const size_t n = nominal.size();
  if (n == 0) return m;
  if (n >= 3) {
    double g[3][3] = {};
    double rx[3] = {}, ry[3] = {};
    for (size_t i = 0; i < n; ++i) {
      const double x = nominal[i].first, y = nominal[i].second;
      const double u = detected[i].first, v = detected[i].second;
      g[0][0] += x * x; g[0][1] += x * y; g[0][2] += x;
      g[1][1] += y * y; g[1][2] += y;
      g[2][2] += 1;
      rx[0] += x * u; rx[1] += y * u; rx[2] += u;
      ry[0] += x * v; ry[1] += y * v; ry[2] += v;
    }
    g[1][0] = g[0][1]; g[2][0] = g[0][2]; g[2][1] = g[1][2];
    double gx[3][3], gy[3][3];
    std::copy(&g[0][0], &g[0][0] + 9, &gx[0][0]);
    std::copy(&g[0][0], &g[0][0] + 9, &gy[0][0]);
    double ox[3], oy[3];
    if (solve3(gx, rx, ox) && solve3(gy, ry, oy)) {
      m.a = ox[0]; m.b = ox[1]; m.c = ox[2];
      m.d = oy[0]; m.e = oy[1]; m.f = oy[2];
      return m;
    }
  }
  double dx = 0, dy = 0;
  for (size_t i = 0; i < n; ++i) {
    dx += detected[i].first - nominal[i].first;
    dy += detected[i].second - nominal[i].second;
  }
  m.c = dx / static_cast<double>(n);
  m.f = dy / static_cast<double>(n);
  return m;
}

}  // namespace

std::string TemplateDetection::to_json() const {
  nlohmann::ordered_json j;
  j["found"] = found;
  j["start_offset"] = start_offset;
  j["hits"] = nlohmann::ordered_json::array();
  for (const Hit& h : hits) {
    nlohmann::ordered_json hj;
    hj["x"] = h.x;
    hj["y"] = h.y;
    hj["template"] = h.template_index;
    hj["offset"] = h.offset;
    hj["score"] = h.score;
    j["hits"].push_back(hj);
  }
  return j.dump();
}

double temporal_sigma(const VideoClip& clip, int begin, int end, int x, int y) {
  if (begin < 0 || end > clip.frame_count() || end - begin < 2)
    throw UsageError("temporal_sigma: need at least 2 frames");
  if (x < 0 || y < 0 || x >= clip.width() || y >= clip.height())
    throw UsageError("temporal_sigma: pixel out of bounds");
  double mean = 0.0;
  for (int k = begin; k < end; ++k) mean += luma_at(clip.frames[k], x, y);
  mean /= end - begin;
  double var = 0.0;
  for (int k = begin; k < end; ++k) {
    const double d = luma_at(clip.frames[k], x, y) - mean;
    var += d * d;
  }
  return std::sqrt(var / (end - begin));
}

std::vector<double> temporal_residual(const VideoClip& clip, int begin, int end,
                                      int x, int y) {
  if (begin < 0 || end > clip.frame_count() || end - begin < 2)
    throw UsageError("temporal_residual: need at least 2 frames");
  if (x < 0 || y < 0 || x >= clip.width() || y >= clip.height())
    throw UsageError("temporal_residual: pixel out of bounds");
  std::vector<double> f(end - begin);
  double mean = 0.0;
  for (int k = begin; k < end; ++k) mean += luma_at(clip.frames[k], x, y);
  mean /= end - begin;
  for (int k = begin; k < end; ++k)
    f[k - begin] = luma_at(clip.frames[k], x, y) - mean;
  return f;
}

VideoClip embed_template(const VideoClip& clip, int begin, int end,
                         const WatermarkKey& key, const WmsParams& params) {
  clip.validate();
  validate_params(params);
  check_segment(clip, begin, end, params);
  const std::vector<std::pair<int, int>> positions = select_positions(
      key, "template", params.template_count, clip.width(), clip.height());
  const std::vector<ChipSequence> seqs = wms_sequences(key, params);

  VideoClip out = clip;
  for (int t = 0; t < params.template_count; ++t) {
    const auto [x, y] = positions[t];
    const double sigma = temporal_sigma(clip, begin, end, x, y);
    for (int k = 0; k < params.segment_frames; ++k)
      add_luma(out.frames[begin + k], x, y,
               params.beta * (sigma + 1.0) * seqs[t].chips[k]);
  }
  return out;
}

TemplateDetection detect_template(const VideoClip& clip, int begin, int end,
                                  const WatermarkKey& key,
                                  const WmsParams& params) {
  clip.validate();
  validate_params(params);
  check_segment(clip, begin, end, params);
  const int n = params.segment_frames;
  const std::vector<std::pair<int, int>> positions = select_positions(
      key, "template", params.template_count, clip.width(), clip.height());
  const std::vector<ChipSequence> seqs = wms_sequences(key, params);
  const double seq_norm = std::sqrt(static_cast<double>(n));

  TemplateDetection det;
  for (int t = 0; t < params.template_count; ++t) {
    const auto [nx, ny] = positions[t];
    const int x0 = std::max(0, nx - params.search_radius);
    const int x1 = std::min(clip.width() - 1, nx + params.search_radius);
    const int y0 = std::max(0, ny - params.search_radius);
    const int y1 = std::min(clip.height() - 1, ny + params.search_radius);
    for (int cy = y0; cy <= y1; ++cy)
      for (int cx = x0; cx <= x1; ++cx) {
        const std::vector<double> f =
            temporal_residual(clip, begin, end, cx, cy);
        double norm2 = 0.0;
        for (double v : f) norm2 += v * v;
        if (norm2 <= 0.0) continue;
        const double denom = std::sqrt(norm2) * seq_norm;
        int best_l = 0;
        double best = -2.0;
        for (int l = 0; l < n; ++l) {
          double s = 0.0;
          for (int k = 0; k < n; ++k)
            s += f[(k + l) % n] * seqs[t].chips[k];
          s /= denom;
          if (s > best) {
            best = s;
            best_l = l;
          }
        }
        if (best > params.detect_threshold)
          det.hits.push_back({cx, cy, t, best_l, best});
      }
  }

  if (!det.hits.empty()) {
    // Consensus offset: one vote per template (its best hit), weighted by
    // score. Cover structure shared by many pixels (a scene cut inside the
    // segment) can push whole neighbourhoods over the threshold at a common
    // false offset, so free-for-all voting is not safe. found needs at
    // least 3 templates agreeing.
    std::vector<const TemplateDetection::Hit*> best_of(
        params.template_count, nullptr);
    for (const TemplateDetection::Hit& h : det.hits) {
      const TemplateDetection::Hit*& slot = best_of[h.template_index];
      if (slot == nullptr || h.score > slot->score) slot = &h;
    }
    std::vector<double> weight(n, 0.0);
    std::vector<int> count(n, 0);
    for (const TemplateDetection::Hit* h : best_of) {
      if (h == nullptr) continue;
      weight[h->offset] += h->score;
      ++count[h->offset];
    }
    int best_l = 0;
    for (int l = 1; l < n; ++l)
      if (weight[l] > weight[best_l]) best_l = l;
    det.start_offset = best_l;
    det.found = count[best_l] >= 3;
  }
  return det;
}

std::vector<double> cdma_encode(const std::vector<int>& bits,
                                const WatermarkKey& key,
                                const WmsParams& params) {
  validate_params(params);
  for (int b : bits)
    if (b != 1 && b != -1) throw UsageError("cdma_encode: bits are +-1");
  const int n = params.segment_frames, m = params.chips_per_bit;
  if (static_cast<int>(bits.size()) * m != n)
    throw UsageError("cdma_encode: bits * M must equal N");
  const ChipSequence c = pn_sequence(key, "cdma-chips", n);
  std::vector<double> w(n);
  for (int k = 0; k < n; ++k) w[k] = bits[k / m] * c.chips[k];
  return w;
}

std::vector<std::vector<std::pair<int, int>>> wms_position_sets(
    const WatermarkKey& key, const WmsParams& params, int width, int height) {
  validate_params(params);
  if (width < 1 || height < 1)
    throw UsageError("wms_position_sets: empty frame");

  std::vector<std::pair<std::string, int>> streams = {
      {"template", params.template_count},
      {"payload", params.payload_positions}};
  for (int s = 0; s < params.sync_copies; ++s)
    streams.emplace_back("sync-" + std::to_string(s), params.template_count);

  int total = 0;
  for (const auto& [id, need] : streams) total += need;
  if (total > width * height)
    throw CapacityError("wms_position_sets: " + std::to_string(total) +
                        " positions exceed " +
                        std::to_string(width * height) + " pixels");

  // Later streams skip pixels earlier streams took, so the sets are disjoint
  // while each stream's own order stays purely key-determined.
  std::vector<char> taken(static_cast<size_t>(width) * height, 0);
  std::vector<std::vector<std::pair<int, int>>> sets;
  for (const auto& [id, need] : streams) {
    const std::vector<std::pair<int, int>> perm =
        select_positions(key, id, width * height, width, height);
    std::vector<std::pair<int, int>> set;
    for (const auto& [x, y] : perm) {
      if (static_cast<int>(set.size()) == need) break;
      const size_t cell = static_cast<size_t>(y) * width + x;
      if (taken[cell]) continue;
      taken[cell] = 1;
      set.emplace_back(x, y);
    }
    sets.push_back(std::move(set));
  }
  return sets;
}

VideoClip wms_embed(const VideoClip& clip, const std::vector<int>& bits,
                    const WatermarkKey& key, const WmsParams& params) {
  clip.validate();
  validate_params(params);
  if (bits.empty()) throw UsageError("wms_embed: empty payload");
  for (int b : bits)
    if (b != 1 && b != -1) throw UsageError("wms_embed: payload bits are +-1");
  const int n = params.segment_frames;
  const int slots_per_pos = n / params.chips_per_bit;
  const int capacity = params.payload_positions * slots_per_pos;
  const int nbits = static_cast<int>(bits.size());
  if (nbits > capacity)
    throw CapacityError("wms_embed: payload of " + std::to_string(nbits) +
                        " bits exceeds " + std::to_string(capacity) +
                        " slots per segment");

  const SceneSegmentation seg = wms_segments(clip, n);
  const std::vector<std::vector<std::pair<int, int>>> sets =
      wms_position_sets(key, params, clip.width(), clip.height());
  const std::vector<ChipSequence> seqs = wms_sequences(key, params);

  VideoClip out = clip;
  for (const auto& [begin, end] : seg.scenes) {
    for (int t = 0; t < params.template_count; ++t) {
      const auto [x, y] = sets[0][t];
      const double sigma = temporal_sigma(clip, begin, end, x, y);
      for (int k = 0; k < n; ++k)
        add_luma(out.frames[begin + k], x, y,
                 params.beta * (sigma + 1.0) * seqs[t].chips[k]);
    }
    for (int p = 0; p < params.payload_positions; ++p) {
      const auto [x, y] = sets[1][p];
      std::vector<int> slot_bits(slots_per_pos);
      for (int j = 0; j < slots_per_pos; ++j)
        slot_bits[j] = bits[(p * slots_per_pos + j) % nbits];
      const std::vector<double> w = cdma_encode(slot_bits, key, params);
      const double sigma = temporal_sigma(clip, begin, end, x, y);
      for (int k = 0; k < n; ++k)
        add_luma(out.frames[begin + k], x, y,
                 params.beta * (sigma + 1.0) * w[k]);
    }
    for (int s = 0; s < params.sync_copies; ++s) {
      const ChipSequence& ref = seqs[params.template_count + s];
      for (int i = 0; i < params.template_count; ++i) {
        const auto [x, y] = sets[2 + s][i];
        const double sigma = temporal_sigma(clip, begin, end, x, y);
        for (int k = 0; k < n; ++k)
          add_luma(out.frames[begin + k], x, y,
                   params.beta * (sigma + 1.0) * ref.chips[k]);
      }
    }
  }
  return out;
}

DetectionResult wms_detect(const VideoClip& clip, const WatermarkKey& key,
                           const WmsParams& params, int nbits,
                           const std::optional<std::vector<int>>& ground_truth) {
  clip.validate();
  validate_params(params);
  if (nbits < 1) throw UsageError("wms_detect: nbits >= 1");
  const int n = params.segment_frames;
  const int slots_per_pos = n / params.chips_per_bit;
  if (nbits > params.payload_positions * slots_per_pos)
    throw CapacityError("wms_detect: nbits exceeds per-segment slot capacity");

  const SceneSegmentation seg = wms_segments(clip, n);
  const std::vector<std::vector<std::pair<int, int>>> sets =
      wms_position_sets(key, params, clip.width(), clip.height());

  struct LiveSegment {
    int begin = 0, end = 0, offset = 0;
    AffineMap map;
  };
  std::vector<LiveSegment> live;
  for (const auto& [begin, end] : seg.scenes) {
    const TemplateDetection td =
        detect_template(clip, begin, end, key, params);
    if (!td.found) continue;
    // Per template: its best hit at the consensus offset, if any, becomes an
    // affine correspondence.
    std::vector<std::pair<int, int>> nominal, detected;
    for (int t = 0; t < params.template_count; ++t) {
      const TemplateDetection::Hit* best = nullptr;
      for (const TemplateDetection::Hit& h : td.hits)
        if (h.template_index == t && h.offset == td.start_offset &&
            (!best || h.score > best->score))
          best = &h;
      if (best) {
        nominal.push_back(sets[0][t]);
        detected.emplace_back(best->x, best->y);
      }
    }
    live.push_back({begin, end, td.start_offset, fit_affine(nominal, detected)});
  }

  DetectionResult res;
  if (live.empty()) {
    res.threshold = std::max(params.presence_threshold, 0.0);
    res.present = false;
    return res;
  }

  const auto run = [&](const std::vector<std::pair<int, int>>& positions,
                       const std::vector<int>& chips,
                       std::vector<double>* bit_sums) {
    double abs_sum = 0.0;
    int slots = 0;
    for (const LiveSegment& ls : live) {
      for (int p = 0; p < params.payload_positions; ++p) {
        const auto [x, y] =
            apply_affine(ls.map, positions[p].first, positions[p].second);
        if (x < 0 || y < 0 || x >= clip.width() || y >= clip.height())
          continue;
        const std::vector<double> f =
            temporal_residual(clip, ls.begin, ls.end, x, y);
        for (int j = 0; j < slots_per_pos; ++j) {
          double d = 0.0;
          for (int k = j * params.chips_per_bit;
               k < (j + 1) * params.chips_per_bit; ++k)
            d += f[(k + ls.offset) % n] * chips[k];
          d /= params.chips_per_bit;
          abs_sum += std::abs(d);
          ++slots;
          if (bit_sums)
            (*bit_sums)[(p * slots_per_pos + j) % nbits] += d;
        }
      }
    }
    return slots ? abs_sum / slots : 0.0;
  };

  std::vector<double> bit_sums(nbits, 0.0);
  const ChipSequence c = pn_sequence(key, "cdma-chips", n);
  const double aggregate = run(sets[1], c.chips, &bit_sums);

  res.correlations = bit_sums;
  for (double s : bit_sums) res.bits.push_back(s >= 0.0 ? 1 : 0);

  double threshold = params.presence_threshold;
  if (threshold <= 0.0) {
    // Null distribution of the aggregate under keys derived from (but unequal
    // to) the detection key, at the same segment alignment.
    const int trials = 100;
    const uint64_t calib = key.stream_seed("wms-calibration");
    std::vector<double> null_aggs;
    null_aggs.reserve(trials);
    for (int t = 0; t < trials; ++t) {
      const WatermarkKey wrong{splitmix64_at(calib, static_cast<uint64_t>(t))};
      const std::vector<std::vector<std::pair<int, int>>> wsets =
          wms_position_sets(wrong, params, clip.width(), clip.height());
      const ChipSequence wc = pn_sequence(wrong, "cdma-chips", n);
      null_aggs.push_back(run(wsets[1], wc.chips, nullptr));
    }
    double mean = 0.0;
    for (double v : null_aggs) mean += v;
    mean /= trials;
    double var = 0.0;
    for (double v : null_aggs) var += (v - mean) * (v - mean);
    threshold = mean + 4.0 * std::sqrt(var / trials);
  }

  res.threshold = threshold;
  res.present = aggregate > threshold;
  if (ground_truth) res.ber_vs_truth = ber(res.bits, *ground_truth);
  return res;
}

}  // namespace vwmark
