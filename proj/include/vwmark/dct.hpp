#pragma once

#include "vwmark/mat.hpp"

namespace vwmark {

// Orthonormal 2-D DCT-II (forward) and DCT-III (inverse), separable,
// precomputed cosine tables. Empty input throws UsageError.
Mat dct2(const Mat& block);
Mat idct2(const Mat& coeffs);

// Fixed-size 8x8 fast path sharing the same convention; used by the block
// schemes and the lossy-compression attack. `io` is 64 doubles, row-major,
// transformed in place.
void dct8_forward(double* io);
void dct8_inverse(double* io);

// Zig-zag scan order for an n x n block: zigzag_index(n)[k] gives the flat
// row-major position of the k-th coefficient along the standard 8x8-style
// diagonal walk.
std::vector<int> zigzag_order(int n);

}  // namespace vwmark
