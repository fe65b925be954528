#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "vwmark/errors.hpp"
#include "vwmark/prng.hpp"

using namespace vwmark;

TEST_SUITE("prng") {

TEST_CASE("splitmix64 matches the reference sequence") {
  // First outputs of the standard splitmix64 with seed 0.
  uint64_t state = 0;
  CHECK(splitmix64_next(state) == 0xE220A8397B1DCDAFULL);
  CHECK(splitmix64_next(state) == 0x6E789E6AA1B965F4ULL);
  CHECK(splitmix64_next(state) == 0x06C45D188009454FULL);
}

TEST_CASE("splitmix64_at is one step seeded at seed+index") {
  for (uint64_t seed : {0ULL, 42ULL, 0xDEADBEEFULL}) {
    for (uint64_t idx : {0ULL, 1ULL, 1000ULL}) {
      uint64_t state = seed + idx;
      CHECK(splitmix64_at(seed, idx) == splitmix64_next(state));
    }
  }
}

TEST_CASE("fnv1a64 known vectors") {
  CHECK(fnv1a64("") == 0xCBF29CE484222325ULL);
  CHECK(fnv1a64("a") == 0xAF63DC4C8601EC8CULL);
  CHECK(fnv1a64("foobar") == 0x85944171F73967E8ULL);
}

TEST_CASE("stream_seed separates streams and keys") {
  WatermarkKey a{1}, b{2};
  CHECK(a.stream_seed("ss") != a.stream_seed("dct"));
  CHECK(a.stream_seed("ss") != b.stream_seed("ss"));
  CHECK(a.stream_seed("ss") == WatermarkKey{1}.stream_seed("ss"));
}

TEST_CASE("derive_keys is the splitmix64 schedule") {
  const WatermarkKey master{0x1234};
  const auto keys = derive_keys(master, 8);
  REQUIRE(keys.size() == 8);
  std::set<uint64_t> seen;
  for (int i = 0; i < 8; ++i) {
    CHECK(keys[i].seed == splitmix64_at(master.seed, i));
    seen.insert(keys[i].seed);
  }
  CHECK(seen.size() == 8);
  CHECK_THROWS_AS(derive_keys(master, -1), UsageError);
}

TEST_CASE("pn_sequence is deterministic, +-1, near-balanced") {
  const WatermarkKey key{7};
  const ChipSequence a = pn_sequence(key, "ss", 4096);
  const ChipSequence b = pn_sequence(key, "ss", 4096);
  CHECK(a.stream_id == "ss");
  CHECK(a.chips == b.chips);
  double sum = 0;
  for (int c : a.chips) {
    CHECK((c == 1 || c == -1));
    sum += c;
  }
  CHECK(std::abs(sum / 4096.0) < 0.1);

  CHECK(pn_sequence(key, "dct", 4096).chips != a.chips);
  CHECK(pn_sequence(WatermarkKey{8}, "ss", 4096).chips != a.chips);
  CHECK_THROWS_AS(pn_sequence(key, "ss", 0), UsageError);
}

TEST_CASE("pn_sequence prefix property") {
  const WatermarkKey key{99};
  const auto longer = pn_sequence(key, "x", 256).chips;
  const auto shorter = pn_sequence(key, "x", 64).chips;
  CHECK(std::equal(shorter.begin(), shorter.end(), longer.begin()));
}

TEST_CASE("orthogonal_set has exact integer orthogonality") {
  const WatermarkKey key{5};
  const int L = 32;
  const auto seqs = orthogonal_set(key, "wms-orth", 7, L);
  REQUIRE(seqs.size() == 7);
  for (const auto& s : seqs) {
    REQUIRE(static_cast<int>(s.chips.size()) == L);
    for (int c : s.chips) CHECK((c == 1 || c == -1));
  }
  for (size_t i = 0; i < seqs.size(); ++i) {
    for (size_t j = 0; j < seqs.size(); ++j) {
      long long dot = 0;
      for (int k = 0; k < L; ++k)
        dot += static_cast<long long>(seqs[i].chips[k]) * seqs[j].chips[k];
      CHECK(dot == (i == j ? L : 0));
    }
  }
}

TEST_CASE("orthogonal_set limits") {
  const WatermarkKey key{5};
  CHECK_THROWS_AS(orthogonal_set(key, "x", 32, 32), CapacityError);
  CHECK_NOTHROW(orthogonal_set(key, "x", 31, 32));
  CHECK_THROWS_AS(orthogonal_set(key, "x", 3, 24), UsageError);
  CHECK_THROWS_AS(orthogonal_set(key, "x", 0, 32), UsageError);
}

TEST_CASE("select_positions: distinct, in bounds, prefix-stable") {
  const WatermarkKey key{11};
  const auto pos = select_positions(key, "payload", 50, 16, 9);
  REQUIRE(pos.size() == 50);
  std::set<std::pair<int, int>> seen;
  for (auto [x, y] : pos) {
    CHECK(x >= 0); CHECK(x < 16);
    CHECK(y >= 0); CHECK(y < 9);
    seen.insert({x, y});
  }
  CHECK(seen.size() == 50);

  const auto prefix = select_positions(key, "payload", 20, 16, 9);
  CHECK(std::equal(prefix.begin(), prefix.end(), pos.begin()));

  CHECK_THROWS_AS(select_positions(key, "payload", 145, 16, 9), CapacityError);
  CHECK_NOTHROW(select_positions(key, "payload", 144, 16, 9));
  CHECK_THROWS_AS(select_positions(key, "payload", 1, 0, 9), UsageError);
}

TEST_CASE("uniform01 range and mean") {
  uint64_t state = 123;
  double sum = 0;
  for (int i = 0; i < 10000; ++i) {
    const double u = uniform01(state);
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    sum += u;
  }
  CHECK(std::abs(sum / 10000 - 0.5) < 0.02);
}

TEST_CASE("GaussianSource moments and determinism") {
  GaussianSource a(77), b(77);
  for (int i = 0; i < 16; ++i) CHECK(a.next() == b.next());

  GaussianSource g(42);
  const int n = 50000;
  double sum = 0, sum2 = 0;
  for (int i = 0; i < n; ++i) {
    const double x = g.next();
    sum += x;
    sum2 += x * x;
  }
  const double mean = sum / n;
  const double var = sum2 / n - mean * mean;
  CHECK(std::abs(mean) < 0.02);
  CHECK(std::abs(var - 1.0) < 0.05);
}

}  // TEST_SUITE
