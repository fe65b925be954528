#include "vwmark/scheme_pca.hpp"

#include <cmath>
#include <string>

#include "vwmark/errors.hpp"
#include "vwmark/pca.hpp"
#include "vwmark/scene.hpp"

namespace vwmark {

namespace {

void validate_params(const PcaParams& params) {
  if (params.alpha <= 0.0) throw UsageError("pca scheme: alpha must be positive");
  if (params.block < 2) throw UsageError("pca scheme: block >= 2");
  if (params.chip_count < 1) throw UsageError("pca scheme: chip_count >= 1");
  if (params.components.empty())
    throw UsageError("pca scheme: no components selected");
  for (int c : params.components)
    if (c < 0 || c >= params.block * params.block)
      throw UsageError("pca scheme: component outside block dimension");
}

struct BlockView {
  int bw = 0, bh = 0;  // padded dims, multiples of block
  std::vector<double> padded;
};

BlockView pad_plane(const Plane& plane, int block) {
  BlockView v;
  v.bw = (plane.width + block - 1) / block * block;
  v.bh = (plane.height + block - 1) / block * block;
  v.padded.resize(static_cast<size_t>(v.bw) * v.bh);
  for (int y = 0; y < v.bh; ++y) {
    const int sy = std::min(y, plane.height - 1);
    for (int x = 0; x < v.bw; ++x)
      v.padded[static_cast<size_t>(y) * v.bw + x] =
          plane.at(std::min(x, plane.width - 1), sy);
  }
  return v;
}

std::vector<std::vector<double>> blocks_of(const BlockView& v, int block) {
  std::vector<std::vector<double>> blocks;
  for (int by = 0; by < v.bh; by += block)
    for (int bx = 0; bx < v.bw; bx += block) {
      std::vector<double> b(static_cast<size_t>(block) * block);
      for (int y = 0; y < block; ++y)
        for (int x = 0; x < block; ++x)
          b[static_cast<size_t>(y) * block + x] =
              v.padded[static_cast<size_t>(by + y) * v.bw + bx + x];
      blocks.push_back(std::move(b));
    }
  return blocks;
}

void store_block(BlockView& v, int block, int index,
                 const std::vector<double>& b) {
  const int per_row = v.bw / block;
  const int bx = (index % per_row) * block, by = (index / per_row) * block;
  for (int y = 0; y < block; ++y)
    for (int x = 0; x < block; ++x)
      v.padded[static_cast<size_t>(by + y) * v.bw + bx + x] =
          b[static_cast<size_t>(y) * block + x];
}

void require_rgb(const VideoClip& clip, const char* who) {
  if (clip.colorspace() != Colorspace::RGB8)
    throw UsageError(std::string(who) + ": RGB input required");
}

}  // namespace

PcaEmbedRecord pca_embed(const VideoClip& clip, const WatermarkKey& key,
                         const PcaParams& params) {
  clip.validate();
  if (clip.frames.empty()) throw UsageError("pca_embed: empty clip");
  require_rgb(clip, "pca_embed");
  validate_params(params);

  const SceneSegmentation seg = detect_scenes(clip, params.scene_threshold);
  PcaEmbedRecord rec;
  rec.key_frames = key_frames(seg);
  rec.chips = pn_sequence(key, "pca", params.chip_count).chips;
  rec.clip = clip;

  for (int fi : rec.key_frames) {
    Frame& frame = rec.clip.frames[fi];
    for (Plane& plane : frame.planes) {
      BlockView view = pad_plane(plane, params.block);
      const std::vector<std::vector<double>> blocks =
          blocks_of(view, params.block);
      if (params.chip_count > static_cast<int>(blocks.size()))
        throw CapacityError(
            "pca_embed: " + std::to_string(params.chip_count) +
            " chips exceed " + std::to_string(blocks.size()) + " blocks");
      const PcaModel model = pca_fit(blocks);
      for (int i = 0; i < params.chip_count; ++i) {
        std::vector<double> coords = pca_project(model, blocks[i]);
        for (int c : params.components)
          coords[c] += params.alpha * std::abs(coords[c]) * rec.chips[i];
        store_block(view, params.block, i, pca_reconstruct(model, coords));
      }
      for (int y = 0; y < plane.height; ++y)
        for (int x = 0; x < plane.width; ++x)
          plane.at(x, y) = quantize_u8(
              view.padded[static_cast<size_t>(y) * view.bw + x]);
    }
  }
  return rec;
}

DetectionResult pca_detect(const VideoClip& clip, const WatermarkKey& key,
                           const PcaParams& params) {
  clip.validate();
  if (clip.frames.empty()) throw UsageError("pca_detect: empty clip");
  require_rgb(clip, "pca_detect");
  validate_params(params);

  const SceneSegmentation seg = detect_scenes(clip, params.scene_threshold);
  const std::vector<int> frames = key_frames(seg);

  // Per (key frame, channel): the re-projected coordinates of the chip-bearing
  // blocks, flattened (chip index, component) so calibration can rescore them
  // under other chip sequences without refitting.
  struct PairCoords {
    std::vector<double> values;  // chip_count * components.size()
  };
  std::vector<PairCoords> pairs;
  for (int fi : frames) {
    const Frame& frame = clip.frames[fi];
    for (const Plane& plane : frame.planes) {
      const BlockView view = pad_plane(plane, params.block);
      const std::vector<std::vector<double>> blocks =
          blocks_of(view, params.block);
      if (params.chip_count > static_cast<int>(blocks.size()))
        throw CapacityError(
            "pca_detect: " + std::to_string(params.chip_count) +
            " chips exceed " + std::to_string(blocks.size()) + " blocks");
      const PcaModel model = pca_fit(blocks);
      PairCoords pc;
      for (int i = 0; i < params.chip_count; ++i) {
        const std::vector<double> coords = pca_project(model, blocks[i]);
        for (int c : params.components) pc.values.push_back(coords[c]);
      }
      pairs.push_back(std::move(pc));
    }
  }

  const int ncomp = static_cast<int>(params.components.size());
  const auto pair_scores = [&](const std::vector<int>& chips) {
    std::vector<double> cvs;
    cvs.reserve(pairs.size());
    for (const PairCoords& pc : pairs) {
      double sum = 0.0;
      int used = 0;
      for (int i = 0; i < params.chip_count; ++i)
        for (int c = 0; c < ncomp; ++c) {
          const double y = pc.values[static_cast<size_t>(i) * ncomp + c];
          if (y == 0.0) continue;  // erased coordinate
          sum += chips[i] * y;
          ++used;
        }
      cvs.push_back(used ? sum / used : 0.0);
    }
    return cvs;
  };
  const auto mean_of = [](const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
  };

  DetectionResult result;
  result.correlations =
      pair_scores(pn_sequence(key, "pca", params.chip_count).chips);
  const double aggregate = mean_of(result.correlations);

  double threshold = params.correlation_threshold;
  if (threshold <= 0.0) {
    // Empirical null: rescore under keys derived from (but unequal to) the
    // detection key, take 3 sigma.
    const int trials = 100;
    const uint64_t calib = key.stream_seed("pca-calibration");
    std::vector<double> null_scores;
    null_scores.reserve(trials);
    for (int t = 0; t < trials; ++t) {
      const WatermarkKey wrong{splitmix64_at(calib, static_cast<uint64_t>(t))};
      null_scores.push_back(
          mean_of(pair_scores(pn_sequence(wrong, "pca", params.chip_count).chips)));
    }
    double mean = 0.0;
    for (double s : null_scores) mean += s;
    mean /= trials;
    double var = 0.0;
    for (double s : null_scores) var += (s - mean) * (s - mean);
    threshold = 3.0 * std::sqrt(var / trials);
  }

  result.threshold = threshold;
  result.present = aggregate > threshold;
  return result;
}

}  // namespace vwmark
