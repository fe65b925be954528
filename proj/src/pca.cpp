#include "vwmark/pca.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace vwmark {

SymmetricEigen jacobi_symmetric_eigen(const Mat& a) {
  if (a.rows() != a.cols()) throw UsageError("eigen: square input required");
  const int n = a.rows();
  if (n == 0) throw UsageError("eigen: empty input");
  double max_abs = 0.0;
  for (size_t i = 0; i < a.size(); ++i)
    max_abs = std::max(max_abs, std::abs(a.data()[i]));
  for (int r = 0; r < n; ++r)
    for (int c = r + 1; c < n; ++c)
      if (std::abs(a.at(r, c) - a.at(c, r)) > 1e-9 * std::max(1.0, max_abs))
        throw UsageError("eigen: input not symmetric");

  Mat m = a;
  Mat vecs(n, n);
  for (int i = 0; i < n; ++i) vecs.at(i, i) = 1.0;

  constexpr int kMaxSweeps = 60;
  const double stop = 1e-14 * std::max(1.0, max_abs);
  for (int sweep = 0;; ++sweep) {
    double off = 0.0;
    for (int r = 0; r < n; ++r)
      for (int c = r + 1; c < n; ++c) off = std::max(off, std::abs(m.at(r, c)));
    if (off <= stop) break;
    if (sweep >= kMaxSweeps)
      throw NumericError("eigen: not converged after " +
                         std::to_string(kMaxSweeps) + " sweeps");
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = m.at(p, q);
        if (std::abs(apq) <= stop) continue;
        const double app = m.at(p, p), aqq = m.at(q, q);
        const double tau = (aqq - app) / (2.0 * apq);
        const double t = (tau >= 0 ? 1.0 : -1.0) /
                         (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double cs = 1.0 / std::sqrt(1.0 + t * t);
        const double sn = t * cs;
        for (int i = 0; i < n; ++i) {
          const double mip = m.at(i, p), miq = m.at(i, q);
          m.at(i, p) = cs * mip - sn * miq;
          m.at(i, q) = sn * mip + cs * miq;
        }
        for (int i = 0; i < n; ++i) {
          const double mpi = m.at(p, i), mqi = m.at(q, i);
          m.at(p, i) = cs * mpi - sn * mqi;
          m.at(q, i) = sn * mpi + cs * mqi;
        }
        for (int i = 0; i < n; ++i) {
          const double vip = vecs.at(i, p), viq = vecs.at(i, q);
          vecs.at(i, p) = cs * vip - sn * viq;
          vecs.at(i, q) = sn * vip + cs * viq;
        }
      }
    }
  }

  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::stable_sort(perm.begin(), perm.end(),
                   [&](int x, int y) { return m.at(x, x) > m.at(y, y); });

  SymmetricEigen out;
  out.values.resize(n);
  out.vectors = Mat(n, n);
  for (int c = 0; c < n; ++c) {
    out.values[c] = m.at(perm[c], perm[c]);
    // Sign convention: largest-magnitude entry positive.
    int arg = 0;
    double best = -1.0;
    for (int r = 0; r < n; ++r) {
      const double mag = std::abs(vecs.at(r, perm[c]));
      if (mag > best) {
        best = mag;
        arg = r;
      }
    }
    const double flip = vecs.at(arg, perm[c]) < 0.0 ? -1.0 : 1.0;
    for (int r = 0; r < n; ++r) out.vectors.at(r, c) = flip * vecs.at(r, perm[c]);
  }
  return out;
}

PcaModel pca_fit(const std::vector<std::vector<double>>& samples) {
  if (samples.size() < 2) throw UsageError("pca_fit: need at least 2 samples");
  const size_t dim = samples[0].size();
  if (dim == 0) throw UsageError("pca_fit: zero-dimensional samples");
  for (const auto& s : samples)
    if (s.size() != dim) throw UsageError("pca_fit: ragged samples");

  const int n = static_cast<int>(dim);
  const int m = static_cast<int>(samples.size());

  PcaModel model;
  model.mean.assign(dim, 0.0);
  for (const auto& s : samples)
    for (size_t i = 0; i < dim; ++i) model.mean[i] += s[i];
  for (double& v : model.mean) v /= m;

  Mat cov(n, n);
  for (const auto& s : samples) {
    for (int i = 0; i < n; ++i) {
      const double di = s[i] - model.mean[i];
      for (int j = i; j < n; ++j) cov.at(i, j) += di * (s[j] - model.mean[j]);
    }
  }
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      cov.at(i, j) /= (m - 1);
      cov.at(j, i) = cov.at(i, j);
    }

  SymmetricEigen eig = jacobi_symmetric_eigen(cov);
  model.basis = std::move(eig.vectors);
  model.eigenvalues = std::move(eig.values);
  return model;
}

std::vector<double> pca_project(const PcaModel& model,
                                const std::vector<double>& sample) {
  const int n = model.basis.rows();
  if (static_cast<int>(sample.size()) != n)
    throw UsageError("pca_project: dimension mismatch");
  std::vector<double> y(model.basis.cols(), 0.0);
  for (int c = 0; c < model.basis.cols(); ++c) {
    double acc = 0.0;
    for (int r = 0; r < n; ++r)
      acc += model.basis.at(r, c) * (sample[r] - model.mean[r]);
    y[c] = acc;
  }
  return y;
}

std::vector<double> pca_reconstruct(const PcaModel& model,
                                    const std::vector<double>& coords) {
  if (static_cast<int>(coords.size()) != model.basis.cols())
    throw UsageError("pca_reconstruct: dimension mismatch");
  std::vector<double> z(model.mean);
  for (int r = 0; r < model.basis.rows(); ++r) {
    double acc = 0.0;
    for (int c = 0; c < model.basis.cols(); ++c)
      acc += model.basis.at(r, c) * coords[c];
    z[r] += acc;
  }
  return z;
}

}  // namespace vwmark
