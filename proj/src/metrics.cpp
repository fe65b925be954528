#include "vwmark/metrics.hpp"

#include <cmath>
#include <limits>

namespace vwmark {

FidelityScore psnr(const VideoClip& reference, const VideoClip& test) {
  reference.validate();
  test.validate();
  if (reference.frame_count() != test.frame_count())
    throw DimensionError("psnr: frame count mismatch");
  if (reference.width() != test.width() ||
      reference.height() != test.height() ||
      reference.colorspace() != test.colorspace())
    throw DimensionError("psnr: clip shapes disagree");
  if (reference.frames.empty()) throw UsageError("psnr: empty clips");

  const double inf = std::numeric_limits<double>::infinity();
  FidelityScore score;
  double mse_sum = 0.0;
  for (int i = 0; i < reference.frame_count(); ++i) {
    const Frame& a = reference.frames[i];
    const Frame& b = test.frames[i];
    double acc = 0.0;
    size_t n = 0;
    for (size_t p = 0; p < a.planes.size(); ++p) {
      const auto& sa = a.planes[p].samples;
      const auto& sb = b.planes[p].samples;
      for (size_t k = 0; k < sa.size(); ++k) {
        const double d = static_cast<double>(sa[k]) - static_cast<double>(sb[k]);
        acc += d * d;
      }
      n += sa.size();
    }
    const double mse = acc / static_cast<double>(n);
    score.per_frame_mse.push_back(mse);
    score.per_frame_psnr.push_back(
        mse == 0.0 ? inf : 10.0 * std::log10(255.0 * 255.0 / mse));
    mse_sum += mse;
  }
  score.mean_mse = mse_sum / reference.frame_count();
  score.mean_psnr = score.mean_mse == 0.0
                        ? inf
                        : 10.0 * std::log10(255.0 * 255.0 / score.mean_mse);
  return score;
}

double ber(const std::vector<int>& a, const std::vector<int>& b) {
  if (a.size() != b.size()) throw UsageError("ber: length mismatch");
  if (a.empty()) throw UsageError("ber: empty sequences");
  size_t errors = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    const int x = a[i] > 0 ? 1 : 0;
    const int y = b[i] > 0 ? 1 : 0;
    errors += (x != y);
  }
  return static_cast<double>(errors) / static_cast<double>(a.size());
}

}  // namespace vwmark
