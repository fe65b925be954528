#include "vwmark/svd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace vwmark {

SvdFactors svd(const Mat& a) {
  if (a.rows() != a.cols()) throw UsageError("svd: square input required");
  const int n = a.rows();
  if (n == 0) throw UsageError("svd: empty input");
  for (size_t i = 0; i < a.size(); ++i)
    if (!std::isfinite(a.data()[i])) throw UsageError("svd: non-finite entry");

  // Work on columns of A (one-sided Jacobi orthogonalizes columns); store
  // column-major for contiguous access.
  std::vector<double> w(static_cast<size_t>(n) * n);
  std::vector<double> v(static_cast<size_t>(n) * n, 0.0);
  for (int c = 0; c < n; ++c) {
    for (int r = 0; r < n; ++r) w[static_cast<size_t>(c) * n + r] = a.at(r, c);
    v[static_cast<size_t>(c) * n + c] = 1.0;
  }

  constexpr double kTol = 1e-12;
  constexpr int kMaxSweeps = 60;
  // Columns whose norm is rounding residue at the matrix's scale are
  // numerically zero; rotating them against real columns never settles.
  double frob2 = 0.0;
  for (size_t i = 0; i < a.size(); ++i) frob2 += a.data()[i] * a.data()[i];
  const double eps_n = n * std::numeric_limits<double>::epsilon();
  const double dead_col2 = frob2 * eps_n * eps_n;
  int sweep = 0;
  bool rotated = true;
  while (rotated) {
    if (++sweep > kMaxSweeps)
      throw NumericError("svd: not converged after " +
                         std::to_string(kMaxSweeps) + " sweeps");
    rotated = false;
    for (int p = 0; p < n - 1; ++p) {
      double* cp = w.data() + static_cast<size_t>(p) * n;
      for (int q = p + 1; q < n; ++q) {
        double* cq = w.data() + static_cast<size_t>(q) * n;
        double app = 0.0, aqq = 0.0, apq = 0.0;
        for (int i = 0; i < n; ++i) {
          app += cp[i] * cp[i];
          aqq += cq[i] * cq[i];
          apq += cp[i] * cq[i];
        }
        if (app <= dead_col2 || aqq <= dead_col2) continue;
        if (std::abs(apq) <= kTol * std::sqrt(app * aqq)) continue;
        rotated = true;
        const double theta = 0.5 * std::atan2(2.0 * apq, app - aqq);
        const double cs = std::cos(theta), sn = std::sin(theta);
        double* vp = v.data() + static_cast<size_t>(p) * n;
        double* vq = v.data() + static_cast<size_t>(q) * n;
        for (int i = 0; i < n; ++i) {
          const double xp = cp[i], xq = cq[i];
          cp[i] = cs * xp + sn * xq;
          cq[i] = -sn * xp + cs * xq;
          const double yp = vp[i], yq = vq[i];
          vp[i] = cs * yp + sn * yq;
          vq[i] = -sn * yp + cs * yq;
        }
      }
    }
  }

  std::vector<double> sigma(n);
  for (int c = 0; c < n; ++c) {
    const double* col = w.data() + static_cast<size_t>(c) * n;
    sigma[c] = std::sqrt(std::inner_product(col, col + n, col, 0.0));
  }

  // Descending order.
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::stable_sort(perm.begin(), perm.end(),
                   [&](int x, int y) { return sigma[x] > sigma[y]; });

  SvdFactors f;
  f.sigma.resize(n);
  f.u = Mat(n, n);
  f.v = Mat(n, n);
  const double tiny = 1e-300;
  std::vector<int> zero_cols;
  for (int c = 0; c < n; ++c) {
    const int src = perm[c];
    f.sigma[c] = sigma[src];
    const double* wc = w.data() + static_cast<size_t>(src) * n;
    const double* vc = v.data() + static_cast<size_t>(src) * n;
    for (int r = 0; r < n; ++r) f.v.at(r, c) = vc[r];
    if (sigma[src] > tiny) {
      for (int r = 0; r < n; ++r) f.u.at(r, c) = wc[r] / sigma[src];
    } else {
      f.sigma[c] = 0.0;
      zero_cols.push_back(c);
    }
  }

  // Complete U on zero columns: Gram-Schmidt canonical candidates against
  // the columns already in place.
  for (int zc : zero_cols) {
    for (int cand = 0; cand < n; ++cand) {
      std::vector<double> e(n, 0.0);
      e[cand] = 1.0;
      for (int c = 0; c < n; ++c) {
        if (c == zc) continue;
        bool filled = std::find(zero_cols.begin(), zero_cols.end(), c) ==
                          zero_cols.end() ||
                      c < zc;
        if (!filled) continue;
        double dot = 0.0;
        for (int r = 0; r < n; ++r) dot += e[r] * f.u.at(r, c);
        for (int r = 0; r < n; ++r) e[r] -= dot * f.u.at(r, c);
      }
      double norm = std::sqrt(std::inner_product(e.begin(), e.end(), e.begin(), 0.0));
      if (norm > 1e-6) {
        for (int r = 0; r < n; ++r) f.u.at(r, zc) = e[r] / norm;
        break;
      }
    }
  }
  return f;
}

Mat svd_compose(const SvdFactors& f) {
  const int n = f.u.rows();
  Mat us(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) us.at(r, c) = f.u.at(r, c) * f.sigma[c];
  return matmul(us, f.v.transposed());
}

}  // namespace vwmark
