#pragma once

#include <vector>

#include "vwmark/mat.hpp"

namespace vwmark {

// Eigendecomposition of a symmetric matrix by cyclic two-sided Jacobi
// rotations. Returns eigenvalues descending; eigenvectors are the matching
// columns of `vectors`. Sign convention: in each eigenvector the entry of
// largest magnitude is positive. Non-symmetric input throws UsageError,
// non-convergence within 60 sweeps throws NumericError.
struct SymmetricEigen {
  std::vector<double> values;
  Mat vectors;  // column j pairs with values[j]
};
SymmetricEigen jacobi_symmetric_eigen(const Mat& a);

struct PcaModel {
  std::vector<double> mean;
  Mat basis;                    // columns = principal directions, descending
  std::vector<double> eigenvalues;
};

// Fit on rows-as-samples. Covariance normalizes by (m - 1). Fewer than two
// samples or ragged rows throw UsageError.
PcaModel pca_fit(const std::vector<std::vector<double>>& samples);

// Coordinates of one sample in the principal basis (sample minus mean,
// projected). Dimension mismatch throws UsageError.
std::vector<double> pca_project(const PcaModel& model,
                                const std::vector<double>& sample);

// Inverse of pca_project (mean + basis * coords).
std::vector<double> pca_reconstruct(const PcaModel& model,
                                    const std::vector<double>& coords);

}  // namespace vwmark
