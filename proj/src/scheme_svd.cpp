#include "vwmark/scheme_svd.hpp"

#include <cmath>
#include <string>

#include "vwmark/errors.hpp"
#include "vwmark/scene.hpp"
#include "vwmark/svd.hpp"

namespace vwmark {

double set_bit7(double x, int bit) {
  if (!std::isfinite(x)) throw NumericError("set_bit7: non-finite input");
  if (bit != 0 && bit != 1) throw UsageError("set_bit7: bit must be 0 or 1");
  const double mag = std::abs(x);
  const double n = std::trunc(mag);
  const int current = std::fmod(n, 128.0) >= 64.0 ? 1 : 0;
  const double adjusted = n + (bit - current) * 64.0 + (mag - n);
  return std::copysign(adjusted, x);
}

int get_bit7(double x) {
  if (!std::isfinite(x)) throw NumericError("get_bit7: non-finite input");
  return std::fmod(std::trunc(std::abs(x)), 128.0) >= 64.0 ? 1 : 0;
}

namespace {

Mat pad_square(const Mat& m) {
  const int side = std::max(m.rows(), m.cols());
  if (side == m.rows() && side == m.cols()) return m;
  Mat out(side, side);
  for (int r = 0; r < side; ++r) {
    const int sr = std::min(r, m.rows() - 1);
    for (int c = 0; c < side; ++c)
      out.at(r, c) = m.at(sr, std::min(c, m.cols() - 1));
  }
  return out;
}

Mat crop(const Mat& m, int rows, int cols) {
  if (m.rows() == rows && m.cols() == cols) return m;
  Mat out(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) out.at(r, c) = m.at(r, c);
  return out;
}

void validate_params(const SvdParams& params) {
  if (params.per_frame_bits < 1)
    throw UsageError("svd scheme: per_frame_bits >= 1");
  if (params.skip_epsilon <= 0.0)
    throw UsageError("svd scheme: skip_epsilon must be positive");
}

}  // namespace

VideoClip svd_embed(const VideoClip& clip, const std::vector<int>& bits,
                    const WatermarkKey&, const SvdParams& params) {
  clip.validate();
  if (clip.frames.empty()) throw UsageError("svd_embed: empty clip");
  validate_params(params);
  if (bits.empty()) throw UsageError("svd_embed: empty payload");
  for (int b : bits)
    if (b != 0 && b != 1) throw UsageError("svd_embed: payload bits are 0/1");

  const SceneSegmentation seg = detect_scenes(clip, params.scene_threshold);
  const int nbits = static_cast<int>(bits.size());
  const int capacity = seg.scene_count() * params.per_frame_bits;
  if (nbits > capacity)
    throw CapacityError("svd_embed: payload of " + std::to_string(nbits) +
                        " bits exceeds " + std::to_string(capacity) + " (" +
                        std::to_string(seg.scene_count()) + " scenes x " +
                        std::to_string(params.per_frame_bits) + " bits)");

  VideoClip out = clip;
  for (int s = 0; s < seg.scene_count(); ++s) {
    const auto [begin, end] = seg.scenes[s];
    for (int fi = begin; fi < end; ++fi) {
      const Mat luma = luma_matrix(out.frames[fi]);
      const Mat square = pad_square(luma);
      if (params.per_frame_bits > square.rows())
        throw CapacityError("svd_embed: frame diagonal shorter than " +
                            std::to_string(params.per_frame_bits));
      SvdFactors f = svd(square);
      for (int j = 0; j < params.per_frame_bits; ++j) {
        const int bit = bits[(s * params.per_frame_bits + j) % nbits];
        switch (params.matrix_choice) {
          case SvdMatrixChoice::S:
            f.sigma[j] = set_bit7(f.sigma[j], bit);
            break;
          case SvdMatrixChoice::U: {
            double& e = f.u.at(j, j);
            if (std::abs(e) >= params.skip_epsilon)
              e = 1.0 / set_bit7(1.0 / e, bit);
            break;
          }
          case SvdMatrixChoice::V: {
            double& e = f.v.at(j, j);
            if (std::abs(e) >= params.skip_epsilon)
              e = 1.0 / set_bit7(1.0 / e, bit);
            break;
          }
        }
      }
      out.frames[fi] = with_luma(
          out.frames[fi], crop(svd_compose(f), luma.rows(), luma.cols()));
    }
  }
  return out;
}

SvdExtraction svd_extract(const VideoClip& clip, const WatermarkKey&,
                          const SvdParams& params, int nbits) {
  clip.validate();
  if (clip.frames.empty()) throw UsageError("svd_extract: empty clip");
  validate_params(params);
  if (nbits < 1) throw UsageError("svd_extract: nbits >= 1");

  const SceneSegmentation seg = detect_scenes(clip, params.scene_threshold);
  SvdExtraction ex;
  for (int s = 0; s < seg.scene_count(); ++s) {
    const auto [begin, end] = seg.scenes[s];
    std::vector<int> ones(params.per_frame_bits, 0);
    std::vector<int> zeros(params.per_frame_bits, 0);
    for (int fi = begin; fi < end; ++fi) {
      const Mat square = pad_square(luma_matrix(clip.frames[fi]));
      if (params.per_frame_bits > square.rows())
        throw CapacityError("svd_extract: frame diagonal shorter than " +
                            std::to_string(params.per_frame_bits));
      const SvdFactors f = svd(square);
      for (int j = 0; j < params.per_frame_bits; ++j) {
        int vote = -1;
        switch (params.matrix_choice) {
          case SvdMatrixChoice::S:
            vote = get_bit7(f.sigma[j]);
            break;
          case SvdMatrixChoice::U:
            if (std::abs(f.u.at(j, j)) >= params.skip_epsilon)
              vote = get_bit7(1.0 / f.u.at(j, j));
            break;
          case SvdMatrixChoice::V:
            if (std::abs(f.v.at(j, j)) >= params.skip_epsilon)
              vote = get_bit7(1.0 / f.v.at(j, j));
            break;
        }
        if (vote == 1)
          ++ones[j];
        else if (vote == 0)
          ++zeros[j];
      }
    }
    std::vector<int> slice(params.per_frame_bits);
    for (int j = 0; j < params.per_frame_bits; ++j)
      slice[j] = ones[j] > zeros[j] ? 1 : 0;
    ex.scene_bits.push_back(std::move(slice));
  }

  for (const std::vector<int>& slice : ex.scene_bits)
    for (int b : slice) {
      if (static_cast<int>(ex.bits.size()) == nbits) return ex;
      ex.bits.push_back(b);
    }
  return ex;
}

}  // namespace vwmark
