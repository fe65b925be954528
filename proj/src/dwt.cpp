#include "vwmark/dwt.hpp"

#include <cmath>

namespace vwmark {

namespace {
constexpr double kInvSqrt2 = 0.70710678118654752440084436210485;
}

void haar_forward_1d(const double* in, int n, double* approx, double* detail) {
  const int pairs = (n + 1) / 2;
  for (int i = 0; i < pairs; ++i) {
    const double a = in[2 * i];
    // Odd length: the last sample pairs with itself (symmetric extension).
    const double b = (2 * i + 1 < n) ? in[2 * i + 1] : in[2 * i];
    approx[i] = (a + b) * kInvSqrt2;
    detail[i] = (a - b) * kInvSqrt2;
  }
}

void haar_inverse_1d(const double* approx, const double* detail, int n,
                     double* out) {
  const int pairs = (n + 1) / 2;
  for (int i = 0; i < pairs; ++i) {
    const double a = (approx[i] + detail[i]) * kInvSqrt2;
    const double b = (approx[i] - detail[i]) * kInvSqrt2;
    if (2 * i + 1 < n) {
      out[2 * i] = a;
      out[2 * i + 1] = b;
    } else {
      // The extended pair was (x, x): approx = x*sqrt(2), detail = 0 for
      // consistent inputs; recover x from the approx term alone.
      out[2 * i] = approx[i] * kInvSqrt2;
    }
  }
}

std::string subband_name(const SubbandRef& b) {
  const char* k = "";
  switch (b.kind) {
    case SubbandKind::LL: k = "LL"; break;
    case SubbandKind::LH: k = "LH"; break;
    case SubbandKind::HL: k = "HL"; break;
    case SubbandKind::HH: k = "HH"; break;
  }
  return std::string(k) + std::to_string(b.level);
}

SubbandRef parse_subband(const std::string& s) {
  if (s.size() < 3) throw UsageError("parse_subband: bad name '" + s + "'");
  const std::string kind = s.substr(0, 2);
  SubbandRef ref;
  if (kind == "LL") ref.kind = SubbandKind::LL;
  else if (kind == "LH") ref.kind = SubbandKind::LH;
  else if (kind == "HL") ref.kind = SubbandKind::HL;
  else if (kind == "HH") ref.kind = SubbandKind::HH;
  else throw UsageError("parse_subband: bad name '" + s + "'");
  try {
    ref.level = std::stoi(s.substr(2));
  } catch (const std::exception&) {
    throw UsageError("parse_subband: bad level in '" + s + "'");
  }
  if (ref.level < 1) throw UsageError("parse_subband: level must be >= 1");
  return ref;
}

const Mat& DwtPyramid::band(const SubbandRef& b) const {
  if (b.kind == SubbandKind::LL) {
    if (b.level != levels)
      throw UsageError("DwtPyramid: LL kept only at the deepest level");
    return approx;
  }
  if (b.level < 1 || b.level > levels)
    throw UsageError("DwtPyramid: no level " + std::to_string(b.level));
  const DetailSet& d = details[b.level - 1];
  switch (b.kind) {
    case SubbandKind::LH: return d.lh;
    case SubbandKind::HL: return d.hl;
    default: return d.hh;
  }
}

Mat& DwtPyramid::band(const SubbandRef& b) {
  return const_cast<Mat&>(static_cast<const DwtPyramid&>(*this).band(b));
}

namespace {

// One analysis level: rows then columns.
void analyze_level(const Mat& in, Mat& ll, Mat& lh, Mat& hl, Mat& hh) {
  const int h = in.rows(), w = in.cols();
  const int hw = (w + 1) / 2, hh_rows = (h + 1) / 2;

  // Row pass: per row, low half | high half.
  Mat low(h, hw), high(h, hw);
  std::vector<double> a(hw), d(hw);
  for (int y = 0; y < h; ++y) {
    haar_forward_1d(in.row(y), w, a.data(), d.data());
    for (int x = 0; x < hw; ++x) {
      low.at(y, x) = a[x];
      high.at(y, x) = d[x];
    }
  }
  // Column pass on both halves.
  ll = Mat(hh_rows, hw);
  lh = Mat(hh_rows, hw);
  hl = Mat(hh_rows, hw);
  hh = Mat(hh_rows, hw);
  std::vector<double> col(h), ca(hh_rows), cd(hh_rows);
  for (int x = 0; x < hw; ++x) {
    for (int y = 0; y < h; ++y) col[y] = low.at(y, x);
    haar_forward_1d(col.data(), h, ca.data(), cd.data());
    for (int y = 0; y < hh_rows; ++y) {
      ll.at(y, x) = ca[y];
      lh.at(y, x) = cd[y];
    }
    for (int y = 0; y < h; ++y) col[y] = high.at(y, x);
    haar_forward_1d(col.data(), h, ca.data(), cd.data());
    for (int y = 0; y < hh_rows; ++y) {
      hl.at(y, x) = ca[y];
      hh.at(y, x) = cd[y];
    }
  }
}

Mat synthesize_level(const Mat& ll, const Mat& lh, const Mat& hl,
                     const Mat& hh, int out_h, int out_w) {
  const int hw = ll.cols(), hrows = ll.rows();
  Mat low(out_h, hw), high(out_h, hw);
  std::vector<double> ca(hrows), cd(hrows), col(out_h);
  for (int x = 0; x < hw; ++x) {
    for (int y = 0; y < hrows; ++y) {
      ca[y] = ll.at(y, x);
      cd[y] = lh.at(y, x);
    }
    haar_inverse_1d(ca.data(), cd.data(), out_h, col.data());
    for (int y = 0; y < out_h; ++y) low.at(y, x) = col[y];
    for (int y = 0; y < hrows; ++y) {
      ca[y] = hl.at(y, x);
      cd[y] = hh.at(y, x);
    }
    haar_inverse_1d(ca.data(), cd.data(), out_h, col.data());
    for (int y = 0; y < out_h; ++y) high.at(y, x) = col[y];
  }
  Mat out(out_h, out_w);
  std::vector<double> ra(hw), rd(hw);
  for (int y = 0; y < out_h; ++y) {
    for (int x = 0; x < hw; ++x) {
      ra[x] = low.at(y, x);
      rd[x] = high.at(y, x);
    }
    haar_inverse_1d(ra.data(), rd.data(), out_w, out.row(y));
  }
  return out;
}

}  // namespace

DwtPyramid dwt2(const Mat& image, int levels) {
  if (image.empty()) throw UsageError("dwt2: empty input");
  if (levels < 1) throw UsageError("dwt2: levels must be >= 1");
  const int need = 1 << levels;
  if (image.rows() < need || image.cols() < need)
    throw UsageError("dwt2: image smaller than 2^levels per axis");

  DwtPyramid pyr;
  pyr.levels = levels;
  pyr.width = image.cols();
  pyr.height = image.rows();
  pyr.details.resize(levels);
  Mat current = image;
  for (int l = 0; l < levels; ++l) {
    Mat ll;
    analyze_level(current, ll, pyr.details[l].lh, pyr.details[l].hl,
                  pyr.details[l].hh);
    current = std::move(ll);
  }
  pyr.approx = std::move(current);
  return pyr;
}

Mat idwt2(const DwtPyramid& pyramid) {
  if (pyramid.levels < 1) throw UsageError("idwt2: empty pyramid");
  // Dimensions at each level, derived from the original size.
  std::vector<int> ws(pyramid.levels + 1), hs(pyramid.levels + 1);
  ws[0] = pyramid.width;
  hs[0] = pyramid.height;
  for (int l = 1; l <= pyramid.levels; ++l) {
    ws[l] = (ws[l - 1] + 1) / 2;
    hs[l] = (hs[l - 1] + 1) / 2;
  }
  Mat current = pyramid.approx;
  for (int l = pyramid.levels; l >= 1; --l) {
    current = synthesize_level(current, pyramid.details[l - 1].lh,
                               pyramid.details[l - 1].hl,
                               pyramid.details[l - 1].hh, hs[l - 1], ws[l - 1]);
  }
  return current;
}

}  // namespace vwmark
