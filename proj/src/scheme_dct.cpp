#include "vwmark/scheme_dct.hpp"

#include <cmath>

#include "vwmark/dct.hpp"
#include "vwmark/metrics.hpp"
#include "vwmark/scheme_ss.hpp"

namespace vwmark {

namespace {

void validate_params(const DctParams& params) {
  if (params.chip_rate < 1) throw UsageError("dct scheme: chip rate >= 1");
  if (params.amplitude <= 0) throw UsageError("dct scheme: amplitude > 0");
  if (params.band.empty()) throw UsageError("dct scheme: empty band");
  for (int idx : params.band)
    if (idx < 1 || idx > 63)
      throw UsageError("dct scheme: band indices must be in [1,63]");
}

struct BlockGrid {
  int bw = 0;  // blocks per row
  int bh = 0;
};

BlockGrid grid_for(const VideoClip& clip) {
  return {(clip.width() + 7) / 8, (clip.height() + 7) / 8};
}

// Loads one 8x8 block from a luma matrix with edge replication.
void load_block(const Mat& luma, int bx, int by, double* block) {
  for (int y = 0; y < 8; ++y)
    for (int x = 0; x < 8; ++x) {
      const int sx = std::min(bx * 8 + x, luma.cols() - 1);
      const int sy = std::min(by * 8 + y, luma.rows() - 1);
      block[y * 8 + x] = luma.at(sy, sx);
    }
}

void store_block(Mat& luma, int bx, int by, const double* block) {
  for (int y = 0; y < 8; ++y)
    for (int x = 0; x < 8; ++x) {
      const int dx = bx * 8 + x, dy = by * 8 + y;
      if (dx < luma.cols() && dy < luma.rows())
        luma.at(dy, dx) = block[y * 8 + x];
    }
}

// Flat row-major offsets of the band coefficients, in zig-zag order.
std::vector<int> band_offsets(const DctParams& params) {
  const std::vector<int> zz = zigzag_order(8);
  std::vector<int> out;
  out.reserve(params.band.size());
  for (int idx : params.band) out.push_back(zz[idx]);
  return out;
}

}  // namespace

long long dct_capacity(const VideoClip& clip, const DctParams& params) {
  validate_params(params);
  const BlockGrid g = grid_for(clip);
  return static_cast<long long>(clip.frame_count()) * g.bw * g.bh *
         static_cast<long long>(params.band.size());
}

VideoClip dct_embed(const VideoClip& clip, const std::vector<int>& bits,
                    const WatermarkKey& key, const DctParams& params) {
  clip.validate();
  if (clip.frames.empty()) throw UsageError("dct_embed: empty clip");
  validate_params(params);
  const std::vector<int> y = spread_bits(bits, params.chip_rate);
  const long long need = static_cast<long long>(y.size());
  if (need > dct_capacity(clip, params))
    throw CapacityError("dct_embed: payload needs " + std::to_string(need) +
                        " coefficients, capacity is " +
                        std::to_string(dct_capacity(clip, params)));
  const ChipSequence p = pn_sequence(key, "dct", static_cast<int>(need));
  const std::vector<int> offsets = band_offsets(params);
  const BlockGrid g = grid_for(clip);

  VideoClip out = clip;
  long long i = 0;
  for (int fi = 0; fi < clip.frame_count() && i < need; ++fi) {
    Mat luma = luma_matrix(out.frames[fi]);
    for (int by = 0; by < g.bh && i < need; ++by) {
      for (int bx = 0; bx < g.bw && i < need; ++bx) {
        double block[64];
        load_block(luma, bx, by, block);
        dct8_forward(block);
        for (int oi : offsets) {
          if (i >= need) break;
          block[oi] += params.amplitude * y[i] * p.chips[i];
          ++i;
        }
        dct8_inverse(block);
        store_block(luma, bx, by, block);
      }
    }
    out.frames[fi] = with_luma(out.frames[fi], luma);
  }
  return out;
}

std::vector<double> dct_walk_coefficients(const VideoClip& clip,
                                          const DctParams& params,
                                          long long n) {
  clip.validate();
  if (clip.frames.empty())
    throw UsageError("dct_walk_coefficients: empty clip");
  validate_params(params);
  if (n > dct_capacity(clip, params))
    throw CapacityError("dct_walk_coefficients: walk longer than capacity");
  const std::vector<int> offsets = band_offsets(params);
  const BlockGrid g = grid_for(clip);

  std::vector<double> out;
  out.reserve(static_cast<size_t>(n));
  long long i = 0;
  for (int fi = 0; fi < clip.frame_count() && i < n; ++fi) {
    const Mat luma = luma_matrix(clip.frames[fi]);
    for (int by = 0; by < g.bh && i < n; ++by) {
      for (int bx = 0; bx < g.bw && i < n; ++bx) {
        double block[64];
        load_block(luma, bx, by, block);
        dct8_forward(block);
        for (int oi : offsets) {
          if (i >= n) break;
          out.push_back(block[oi]);
          ++i;
        }
      }
    }
  }
  return out;
}

DetectionResult dct_detect(const VideoClip& clip, const WatermarkKey& key,
                           const DctParams& params, int nbits,
                           const std::optional<std::vector<int>>&
                               ground_truth) {
  if (nbits < 1) throw UsageError("dct_detect: nbits must be >= 1");
  validate_params(params);
  const long long need =
      static_cast<long long>(nbits) * params.chip_rate;
  if (need > dct_capacity(clip, params))
    throw CapacityError("dct_detect: " + std::to_string(nbits) +
                        " bits at cr=" + std::to_string(params.chip_rate) +
                        " exceed the coefficient budget");

  const std::vector<double> coeffs = dct_walk_coefficients(clip, params, need);
  const ChipSequence p = pn_sequence(key, "dct", static_cast<int>(need));

  DetectionResult result;
  double abs_sum = 0.0;
  for (int j = 0; j < nbits; ++j) {
    double s = 0.0;
    const size_t base = static_cast<size_t>(j) * params.chip_rate;
    for (int i = 0; i < params.chip_rate; ++i)
      s += p.chips[base + i] * coeffs[base + i];
    result.correlations.push_back(s);
    result.bits.push_back(s >= 0.0 ? 1 : 0);
    abs_sum += std::abs(s);
  }

  double mean = 0.0, var = 0.0;
  for (double c : coeffs) mean += c;
  mean /= static_cast<double>(coeffs.size());
  for (double c : coeffs) {
    const double d = c - mean;
    var += d * d;
  }
  var /= static_cast<double>(coeffs.size());
  result.threshold = 4.0 * std::sqrt(static_cast<double>(params.chip_rate)) *
                     std::sqrt(var);
  result.present =
      result.threshold > 0.0 && (abs_sum / nbits) >= result.threshold;

  if (ground_truth) result.ber_vs_truth = ber(*ground_truth, result.bits);
  return result;
}

}  // namespace vwmark
