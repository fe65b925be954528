#include "vwmark/dct.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace vwmark {

namespace {

// Orthonormal DCT-II basis: T[k][n] = s(k) * cos(pi*(2n+1)*k / (2N)),
// s(0) = sqrt(1/N), s(k>0) = sqrt(2/N). Rows of T are orthonormal, so the
// inverse (DCT-III) is multiplication by T^T.
std::vector<double> cosine_table(int n) {
  std::vector<double> t(static_cast<size_t>(n) * n);
  const double pi = std::numbers::pi;
  for (int k = 0; k < n; ++k) {
    const double s = std::sqrt((k == 0 ? 1.0 : 2.0) / n);
    for (int j = 0; j < n; ++j)
      t[static_cast<size_t>(k) * n + j] =
          s * std::cos(pi * (2.0 * j + 1.0) * k / (2.0 * n));
  }
  return t;
}

// out = T * in * T^T (forward) or T^T * in * T (inverse), separable.
Mat apply_separable(const Mat& in, const std::vector<double>& trow,
                    const std::vector<double>& tcol, bool transpose) {
  const int h = in.rows(), w = in.cols();
  // Columns first: tmp(k, x) = sum_y T(k, y) * in(y, x).
  Mat tmp(h, w);
  for (int k = 0; k < h; ++k) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int y = 0; y < h; ++y) {
        const double t = transpose ? tcol[static_cast<size_t>(y) * h + k]
                                   : tcol[static_cast<size_t>(k) * h + y];
        acc += t * in.at(y, x);
      }
      tmp.at(k, x) = acc;
    }
  }
  Mat out(h, w);
  for (int y = 0; y < h; ++y) {
    for (int k = 0; k < w; ++k) {
      double acc = 0.0;
      for (int x = 0; x < w; ++x) {
        const double t = transpose ? trow[static_cast<size_t>(x) * w + k]
                                   : trow[static_cast<size_t>(k) * w + x];
        acc += t * tmp.at(y, x);
      }
      out.at(y, k) = acc;
    }
  }
  return out;
}

}  // namespace

Mat dct2(const Mat& block) {
  if (block.empty()) throw UsageError("dct2: empty input");
  const auto tc = cosine_table(block.rows());
  const auto tr = cosine_table(block.cols());
  return apply_separable(block, tr, tc, false);
}

Mat idct2(const Mat& coeffs) {
  if (coeffs.empty()) throw UsageError("idct2: empty input");
  const auto tc = cosine_table(coeffs.rows());
  const auto tr = cosine_table(coeffs.cols());
  return apply_separable(coeffs, tr, tc, true);
}

namespace {

const std::vector<double>& table8() {
  static const std::vector<double> t = cosine_table(8);
  return t;
}

}  // namespace

void dct8_forward(double* io) {
  const auto& t = table8();
  double tmp[64];
  // Rows.
  for (int r = 0; r < 8; ++r) {
    for (int k = 0; k < 8; ++k) {
      double acc = 0.0;
      for (int j = 0; j < 8; ++j) acc += t[k * 8 + j] * io[r * 8 + j];
      tmp[r * 8 + k] = acc;
    }
  }
  // Columns.
  for (int c = 0; c < 8; ++c) {
    for (int k = 0; k < 8; ++k) {
      double acc = 0.0;
      for (int j = 0; j < 8; ++j) acc += t[k * 8 + j] * tmp[j * 8 + c];
      io[k * 8 + c] = acc;
    }
  }
}

void dct8_inverse(double* io) {
  const auto& t = table8();
  double tmp[64];
  for (int r = 0; r < 8; ++r) {
    for (int k = 0; k < 8; ++k) {
      double acc = 0.0;
      for (int j = 0; j < 8; ++j) acc += t[j * 8 + k] * io[r * 8 + j];
      tmp[r * 8 + k] = acc;
    }
  }
  for (int c = 0; c < 8; ++c) {
    for (int k = 0; k < 8; ++k) {
      double acc = 0.0;
      for (int j = 0; j < 8; ++j) acc += t[j * 8 + k] * tmp[j * 8 + c];
      io[k * 8 + c] = acc;
    }
  }
}

std::vector<int> zigzag_order(int n) {
  if (n < 1) throw UsageError("zigzag_order: n must be >= 1");
  std::vector<int> order;
  order.reserve(static_cast<size_t>(n) * n);
  for (int s = 0; s <= 2 * (n - 1); ++s) {
    if (s % 2 == 0) {
      // Walk up-right: rows decreasing.
      for (int r = std::min(s, n - 1); r >= std::max(0, s - n + 1); --r)
        order.push_back(r * n + (s - r));
    } else {
      for (int r = std::max(0, s - n + 1); r <= std::min(s, n - 1); ++r)
        order.push_back(r * n + (s - r));
    }
  }
  return order;
}

}  // namespace vwmark
