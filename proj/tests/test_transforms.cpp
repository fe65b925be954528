#include <doctest.h>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <vector>

#include "vwmark/dct.hpp"
#include "vwmark/dwt.hpp"
#include "vwmark/errors.hpp"
#include "vwmark/prng.hpp"
#include "vwmark/svd.hpp"

using namespace vwmark;

namespace {

Mat random_mat(int rows, int cols, uint64_t seed, double lo = -100.0,
               double hi = 155.0) {
  Mat m(rows, cols);
  uint64_t state = seed;
  for (size_t i = 0; i < m.size(); ++i)
    m.data()[i] = lo + (hi - lo) * uniform01(state);
  return m;
}

// Textbook O(n^4) orthonormal DCT-II, no factorization tricks. The product
// code must agree with this to be trusted.
Mat dct2_naive(const Mat& x) {
  const int R = x.rows(), C = x.cols();
  const double pi = std::acos(-1.0);
  Mat out(R, C);
  for (int u = 0; u < R; ++u) {
    for (int v = 0; v < C; ++v) {
      double acc = 0.0;
      for (int i = 0; i < R; ++i)
        for (int j = 0; j < C; ++j)
          acc += x.at(i, j) * std::cos((2 * i + 1) * u * pi / (2.0 * R)) *
                 std::cos((2 * j + 1) * v * pi / (2.0 * C));
      const double au = u == 0 ? std::sqrt(1.0 / R) : std::sqrt(2.0 / R);
      const double av = v == 0 ? std::sqrt(1.0 / C) : std::sqrt(2.0 / C);
      out.at(u, v) = au * av * acc;
    }
  }
  return out;
}

double frob2(const Mat& m) {
  double s = 0;
  for (size_t i = 0; i < m.size(); ++i) s += m.data()[i] * m.data()[i];
  return s;
}

// Singular values via the eigendecomposition of A^T A, computed by Eigen —
// a wholly independent code path from the Jacobi sweep under test.
std::vector<double> singular_values_eigen(const Mat& a) {
  const int n = a.rows();
  Eigen::MatrixXd m(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) m(r, c) = a.at(r, c);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.transpose() * m);
  std::vector<double> sv(n);
  for (int i = 0; i < n; ++i)
    sv[i] = std::sqrt(std::max(0.0, es.eigenvalues()[n - 1 - i]));
  return sv;
}

double ortho_error(const Mat& q) {
  const Mat gram = matmul(q.transposed(), q);
  double worst = 0;
  for (int r = 0; r < gram.rows(); ++r)
    for (int c = 0; c < gram.cols(); ++c)
      worst = std::max(worst,
                       std::abs(gram.at(r, c) - (r == c ? 1.0 : 0.0)));
  return worst;
}

}  // namespace

TEST_SUITE("transforms") {

TEST_CASE("dct2 agrees with the quartic definition") {
  for (auto [rows, cols, seed] : {std::tuple{8, 8, 1ULL},
                                  std::tuple{16, 16, 2ULL},
                                  std::tuple{8, 12, 3ULL},
                                  std::tuple{5, 7, 4ULL}}) {
    const Mat x = random_mat(rows, cols, seed);
    CHECK(max_abs_diff(dct2(x), dct2_naive(x)) <= 1e-9);
  }
}

TEST_CASE("dct2/idct2 round trip and energy") {
  for (uint64_t seed : {10ULL, 11ULL, 12ULL}) {
    const Mat x = random_mat(16, 16, seed);
    const Mat coeffs = dct2(x);
    CHECK(max_abs_diff(idct2(coeffs), x) <= 1e-9);
    // Orthonormal transform: Parseval holds to rounding.
    CHECK(frob2(coeffs) == doctest::Approx(frob2(x)).epsilon(1e-9));
  }
  CHECK_THROWS_AS(dct2(Mat()), UsageError);
}

TEST_CASE("dct8 fast path matches dct2") {
  const Mat x = random_mat(8, 8, 42);
  double io[64];
  std::copy(x.data(), x.data() + 64, io);
  dct8_forward(io);
  const Mat full = dct2(x);
  for (int i = 0; i < 64; ++i)
    CHECK(std::abs(io[i] - full.data()[i]) <= 1e-9);
  dct8_inverse(io);
  for (int i = 0; i < 64; ++i) CHECK(std::abs(io[i] - x.data()[i]) <= 1e-9);
}

TEST_CASE("zigzag order walks the standard diagonals") {
  const std::vector<int> z8 = zigzag_order(8);
  REQUIRE(z8.size() == 64);
  const std::vector<int> head = {0, 1, 8, 16, 9, 2, 3, 10, 17, 24};
  CHECK(std::equal(head.begin(), head.end(), z8.begin()));
  CHECK(z8.back() == 63);
  for (int n : {3, 5, 8}) {
    const std::vector<int> z = zigzag_order(n);
    std::set<int> seen(z.begin(), z.end());
    CHECK(static_cast<int>(seen.size()) == n * n);
    CHECK(*seen.begin() == 0);
    CHECK(*seen.rbegin() == n * n - 1);
    // Every step stays on the adjacent anti-diagonal or moves to the next.
    for (size_t k = 1; k < z.size(); ++k) {
      const int d0 = z[k - 1] / n + z[k - 1] % n;
      const int d1 = z[k] / n + z[k] % n;
      CHECK(d1 - d0 >= 0);
      CHECK(d1 - d0 <= 1);
    }
  }
}

TEST_CASE("haar 1d round trips for even and odd lengths") {
  for (int n : {2, 7, 8, 13, 64}) {
    std::vector<double> in(n), approx((n + 1) / 2), detail((n + 1) / 2), out(n);
    uint64_t state = 77 + n;
    for (double& v : in) v = 255.0 * uniform01(state);
    haar_forward_1d(in.data(), n, approx.data(), detail.data());
    haar_inverse_1d(approx.data(), detail.data(), n, out.data());
    for (int i = 0; i < n; ++i) CHECK(out[i] == doctest::Approx(in[i]).epsilon(1e-12));
  }
}

TEST_CASE("haar of a constant signal is flat") {
  const int n = 8;
  std::vector<double> in(n, 5.0), approx(n / 2), detail(n / 2);
  haar_forward_1d(in.data(), n, approx.data(), detail.data());
  for (int i = 0; i < n / 2; ++i) {
    CHECK(approx[i] == doctest::Approx(5.0 * std::sqrt(2.0)));
    CHECK(detail[i] == doctest::Approx(0.0));
  }
}

TEST_CASE("dwt2/idwt2 round trip") {
  for (auto [rows, cols, levels] : {std::tuple{16, 16, 1}, std::tuple{16, 16, 4},
                                    std::tuple{13, 9, 2}, std::tuple{64, 48, 3}}) {
    const Mat x = random_mat(rows, cols, rows * 100 + cols + levels, 0, 255);
    const DwtPyramid pyr = dwt2(x, levels);
    CHECK(pyr.levels == levels);
    CHECK(max_abs_diff(idwt2(pyr), x) <= 1e-9);
  }
  CHECK_THROWS_AS(dwt2(random_mat(4, 4, 1), 0), UsageError);
  CHECK_THROWS_AS(dwt2(random_mat(4, 4, 1), 5), UsageError);
}

TEST_CASE("dwt2 conserves energy on even grids") {
  const Mat x = random_mat(32, 32, 5, 0, 255);
  const DwtPyramid pyr = dwt2(x, 3);
  double total = frob2(pyr.approx);
  for (const auto& d : pyr.details)
    total += frob2(d.lh) + frob2(d.hl) + frob2(d.hh);
  CHECK(total == doctest::Approx(frob2(x)).epsilon(1e-9));
}

TEST_CASE("subband names round trip") {
  for (int level : {1, 2, 3, 5}) {
    for (SubbandKind kind : {SubbandKind::LL, SubbandKind::LH, SubbandKind::HL,
                             SubbandKind::HH}) {
      const SubbandRef ref{level, kind};
      CHECK(parse_subband(subband_name(ref)) == ref);
    }
  }
  CHECK(subband_name({3, SubbandKind::LH}) == "LH3");
  CHECK_THROWS_AS(parse_subband("XX1"), UsageError);
  CHECK_THROWS_AS(parse_subband("LH"), UsageError);
  CHECK_THROWS_AS(parse_subband("LH0"), UsageError);
}

TEST_CASE("pyramid band accessor addresses every level") {
  const Mat x = random_mat(16, 16, 9, 0, 255);
  const DwtPyramid pyr = dwt2(x, 2);
  CHECK(&pyr.band({1, SubbandKind::LH}) == &pyr.details[0].lh);
  CHECK(&pyr.band({2, SubbandKind::HH}) == &pyr.details[1].hh);
  CHECK(&pyr.band({2, SubbandKind::LL}) == &pyr.approx);
  CHECK_THROWS_AS(pyr.band({1, SubbandKind::LL}), UsageError);
  CHECK_THROWS_AS(pyr.band({3, SubbandKind::LH}), UsageError);
}

TEST_CASE("svd singular values match the eigen oracle") {
  for (auto [n, seed] : {std::pair{8, 21ULL}, std::pair{16, 22ULL},
                         std::pair{32, 23ULL}}) {
    const Mat a = random_mat(n, n, seed);
    const SvdFactors f = svd(a);
    const std::vector<double> oracle = singular_values_eigen(a);
    REQUIRE(static_cast<int>(f.sigma.size()) == n);
    const double scale = std::max(1.0, oracle[0]);
    for (int i = 0; i < n; ++i)
      CHECK(std::abs(f.sigma[i] - oracle[i]) <= 1e-8 * scale);
  }
}

TEST_CASE("svd factors reconstruct and are orthonormal") {
  for (auto [n, seed] : {std::pair{8, 31ULL}, std::pair{16, 32ULL}}) {
    const Mat a = random_mat(n, n, seed);
    const SvdFactors f = svd(a);
    CHECK(ortho_error(f.u) <= 1e-10);
    CHECK(ortho_error(f.v) <= 1e-10);
    CHECK(max_abs_diff(svd_compose(f), a) <= 1e-9 * std::max(1.0, f.sigma[0]));
    for (int i = 0; i + 1 < n; ++i) CHECK(f.sigma[i] >= f.sigma[i + 1]);
    CHECK(f.sigma[n - 1] >= 0.0);
  }
}

TEST_CASE("svd handles degenerate matrices") {
  const SvdFactors zero = svd(Mat(6, 6));
  for (double s : zero.sigma) CHECK(s == 0.0);
  CHECK(ortho_error(zero.u) <= 1e-12);

  Mat eye(5, 5);
  for (int i = 0; i < 5; ++i) eye.at(i, i) = 1.0;
  const SvdFactors id = svd(eye);
  for (double s : id.sigma) CHECK(s == doctest::Approx(1.0));

  // Rank-1 outer product: one nonzero singular value, known magnitude.
  Mat r1(4, 4);
  const double u[4] = {1, 2, 3, 4}, v[4] = {4, 3, 2, 1};
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) r1.at(r, c) = u[r] * v[c];
  const SvdFactors f = svd(r1);
  const double norm_u = std::sqrt(1.0 + 4 + 9 + 16);
  CHECK(f.sigma[0] == doctest::Approx(norm_u * norm_u));  // |u| == |v| here
  for (int i = 1; i < 4; ++i) CHECK(f.sigma[i] <= 1e-9);

  CHECK_THROWS_AS(svd(Mat(3, 4)), UsageError);
}

TEST_CASE("quantize_u8 rounds half away from zero and clamps") {
  CHECK(quantize_u8(-5.0) == 0);
  CHECK(quantize_u8(-0.4) == 0);
  CHECK(quantize_u8(0.5) == 1);
  CHECK(quantize_u8(127.5) == 128);
  CHECK(quantize_u8(254.4) == 254);
  CHECK(quantize_u8(255.5) == 255);
  CHECK(quantize_u8(300.0) == 255);
}

}  // TEST_SUITE
