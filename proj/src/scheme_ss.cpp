#include "vwmark/scheme_ss.hpp"

#include <cmath>

#include "vwmark/metrics.hpp"

namespace vwmark {

std::vector<double> line_scan(const VideoClip& clip) {
  clip.validate();
  if (clip.frames.empty()) throw UsageError("line_scan: empty clip");
  if (clip.colorspace() != Colorspace::GRAY8)
    throw UsageError("line_scan: GRAY8 clip required (convert first)");
  std::vector<double> out;
  out.reserve(static_cast<size_t>(clip.frame_count()) * clip.width() *
              clip.height());
  for (const Frame& f : clip.frames)
    for (uint8_t s : f.planes[0].samples) out.push_back(s);
  return out;
}

VideoClip line_unscan(const std::vector<double>& samples, int width,
                      int height, int frame_count, double fps) {
  if (width < 1 || height < 1 || frame_count < 1)
    throw UsageError("line_unscan: empty geometry");
  const size_t per_frame = static_cast<size_t>(width) * height;
  if (samples.size() != per_frame * frame_count)
    throw DimensionError("line_unscan: sample count does not match geometry");
  VideoClip clip;
  clip.fps = fps;
  for (int i = 0; i < frame_count; ++i) {
    Frame f = Frame::make(width, height, Colorspace::GRAY8);
    for (size_t k = 0; k < per_frame; ++k)
      f.planes[0].samples[k] = quantize_u8(samples[i * per_frame + k]);
    clip.frames.push_back(std::move(f));
  }
  return clip;
}

std::vector<int> spread_bits(const std::vector<int>& bits, int chip_rate) {
  if (bits.empty()) throw UsageError("spread_bits: empty payload");
  if (chip_rate < 1) throw UsageError("spread_bits: chip rate must be >= 1");
  for (int b : bits)
    if (b != 1 && b != -1)
      throw UsageError("spread_bits: bits must be +-1");
  std::vector<int> y;
  y.reserve(bits.size() * chip_rate);
  for (int b : bits)
    for (int i = 0; i < chip_rate; ++i) y.push_back(b);
  return y;
}

namespace {

// Total luma sample count.
size_t sample_count(const VideoClip& clip) {
  return static_cast<size_t>(clip.frame_count()) * clip.width() * clip.height();
}

}  // namespace

VideoClip ss_embed(const VideoClip& clip, const std::vector<int>& bits,
                   const WatermarkKey& key, const SpreadParams& params) {
  clip.validate();
  if (clip.frames.empty()) throw UsageError("ss_embed: empty clip");
  if (params.chip_rate < 1) throw UsageError("ss_embed: chip rate >= 1");
  if (params.amplitude < 0) throw UsageError("ss_embed: amplitude >= 0");
  const std::vector<int> y = spread_bits(bits, params.chip_rate);
  if (y.size() > sample_count(clip))
    throw CapacityError("ss_embed: payload of " + std::to_string(y.size()) +
                        " chips exceeds " + std::to_string(sample_count(clip)) +
                        " samples");
  const ChipSequence p = pn_sequence(key, "ss", static_cast<int>(y.size()));

  VideoClip out = clip;
  const size_t per_frame = static_cast<size_t>(clip.width()) * clip.height();
  const bool gray = clip.colorspace() == Colorspace::GRAY8;
  size_t i = 0;
  for (int fi = 0; fi < clip.frame_count() && i < y.size(); ++fi) {
    if (gray) {
      auto& samples = out.frames[fi].planes[0].samples;
      for (size_t k = 0; k < per_frame && i < y.size(); ++k, ++i)
        samples[k] = quantize_u8(static_cast<double>(samples[k]) +
                                 params.amplitude * y[i] * p.chips[i]);
    } else {
      Mat luma = luma_matrix(out.frames[fi]);
      for (size_t k = 0; k < per_frame && i < y.size(); ++k, ++i)
        luma.data()[k] += params.amplitude * y[i] * p.chips[i];
      out.frames[fi] = with_luma(out.frames[fi], luma);
    }
  }
  return out;
}

std::vector<double> ss_filtered_signal(const VideoClip& clip,
                                       const SpreadParams& params) {
  clip.validate();
  if (clip.frames.empty()) throw UsageError("ss_filtered_signal: empty clip");
  const int w = clip.width(), h = clip.height();
  const size_t per_frame = static_cast<size_t>(w) * h;
  std::vector<double> out;
  out.reserve(per_frame * clip.frame_count());

  if (params.highpass == HighpassKind::LAPLACIAN3X3) {
    // 3x3 Laplacian (center 4, cross -1), zero padding outside the frame.
    for (const Frame& f : clip.frames) {
      const Mat luma = luma_matrix(f);
      for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
          double acc = 4.0 * luma.at(y, x);
          if (x > 0) acc -= luma.at(y, x - 1);
          if (x + 1 < w) acc -= luma.at(y, x + 1);
          if (y > 0) acc -= luma.at(y - 1, x);
          if (y + 1 < h) acc -= luma.at(y + 1, x);
          out.push_back(acc);
        }
      }
    }
    return out;
  }

  // TEMPORAL_DIFF: frame minus previous frame. The first frame has no
  // predecessor; its residual is zero so it simply drops out of the
  // correlations instead of leaking the cover.
  Mat prev;
  for (int fi = 0; fi < clip.frame_count(); ++fi) {
    const Mat luma = luma_matrix(clip.frames[fi]);
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x)
        out.push_back(fi == 0 ? 0.0 : luma.at(y, x) - prev.at(y, x));
    prev = luma;
  }
  return out;
}

DetectionResult ss_detect(const VideoClip& clip, const WatermarkKey& key,
                          const SpreadParams& params, int nbits,
                          const std::optional<std::vector<int>>& ground_truth) {
  if (nbits < 1) throw UsageError("ss_detect: nbits must be >= 1");
  const size_t need =
      static_cast<size_t>(nbits) * static_cast<size_t>(params.chip_rate);
  if (need > sample_count(clip))
    throw CapacityError("ss_detect: " + std::to_string(nbits) +
                        " bits at cr=" + std::to_string(params.chip_rate) +
                        " exceed the clip's sample count");

  const std::vector<double> filtered = ss_filtered_signal(clip, params);
  const ChipSequence p = pn_sequence(key, "ss", static_cast<int>(need));

  DetectionResult result;
  result.correlations.reserve(nbits);
  result.bits.reserve(nbits);
  double abs_sum = 0.0;
  for (int j = 0; j < nbits; ++j) {
    double s = 0.0;
    const size_t base = static_cast<size_t>(j) * params.chip_rate;
    for (int i = 0; i < params.chip_rate; ++i)
      s += p.chips[base + i] * filtered[base + i];
    result.correlations.push_back(s);
    result.bits.push_back(s >= 0.0 ? 1 : 0);  // sign(0) = +1
    abs_sum += std::abs(s);
  }

  // Presence: mean |s_j| against 4 sigma of the correlation under a
  // chip-free signal model (std over the filtered samples actually used).
  double var = 0.0, mean = 0.0;
  for (size_t i = 0; i < need; ++i) mean += filtered[i];
  mean /= static_cast<double>(need);
  for (size_t i = 0; i < need; ++i) {
    const double d = filtered[i] - mean;
    var += d * d;
  }
  var /= static_cast<double>(need);
  result.threshold = 4.0 * std::sqrt(static_cast<double>(params.chip_rate)) *
                     std::sqrt(var);
  const double mean_abs = abs_sum / nbits;
  result.present = result.threshold > 0.0 && mean_abs >= result.threshold;

  if (ground_truth) result.ber_vs_truth = ber(*ground_truth, result.bits);
  return result;
}

}  // namespace vwmark
