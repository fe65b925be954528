#pragma once

#include <vector>

#include "vwmark/mat.hpp"

namespace vwmark {

struct SvdFactors {
  Mat u;                       // n x n, orthonormal columns
  std::vector<double> sigma;   // descending, non-negative
  Mat v;                       // n x n, orthonormal columns (A = U S V^T)
};

// One-sided Jacobi (Hestenes) SVD for square matrices. Rotations stop when
// every off-diagonal Gram term satisfies |c| <= 1e-12 * sqrt(a*b); more than
// 60 sweeps throws NumericError naming the sweep count. Non-square input
// throws UsageError. Columns with norm negligible at the matrix's scale
// count as zero and are left unrotated; zero columns get their U columns
// completed to an orthonormal basis.
SvdFactors svd(const Mat& a);

// U * diag(sigma) * V^T.
Mat svd_compose(const SvdFactors& f);

}  // namespace vwmark
