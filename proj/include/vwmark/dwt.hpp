#pragma once

#include <string>
#include <vector>

#include "vwmark/mat.hpp"

namespace vwmark {

// Orthonormal Haar analysis/synthesis. Odd lengths extend symmetrically by
// repeating the last sample; the reconstruction inverts that exactly.
void haar_forward_1d(const double* in, int n, double* approx, double* detail);
void haar_inverse_1d(const double* approx, const double* detail, int n,
                     double* out);

enum class SubbandKind { LL, LH, HL, HH };

struct SubbandRef {
  int level = 1;             // 1-based, level L halves the grid L times
  SubbandKind kind = SubbandKind::LH;

  bool operator==(const SubbandRef&) const = default;
};

std::string subband_name(const SubbandRef& b);   // e.g. "LH3"
SubbandRef parse_subband(const std::string& s);  // inverse of subband_name

// Multi-level 2-D Haar pyramid of one matrix. Level k stores the detail
// subbands produced by the k-th halving; `approx` is the final LL band.
struct DwtPyramid {
  int levels = 0;
  int width = 0;   // original dimensions
  int height = 0;
  Mat approx;      // LL at the deepest level
  struct DetailSet {
    Mat lh;  // horizontal lowpass, vertical highpass
    Mat hl;
    Mat hh;
  };
  std::vector<DetailSet> details;  // index 0 = level 1

  const Mat& band(const SubbandRef& b) const;
  Mat& band(const SubbandRef& b);
};

// levels >= 1 and the image must stay non-empty at every level, else
// UsageError.
DwtPyramid dwt2(const Mat& image, int levels);
Mat idwt2(const DwtPyramid& pyramid);

}  // namespace vwmark
