#include "vwmark/prng.hpp"

#include <bit>
#include <cmath>

namespace vwmark {

uint64_t splitmix64_next(uint64_t& state) {
  uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

uint64_t splitmix64_at(uint64_t seed, uint64_t index) {
  uint64_t state = seed + index;
  return splitmix64_next(state);
}

uint64_t fnv1a64(const std::string& s) {
  uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

uint64_t WatermarkKey::stream_seed(const std::string& stream_id) const {
  return seed ^ fnv1a64(stream_id);
}

std::vector<WatermarkKey> derive_keys(WatermarkKey master, int count) {
  if (count < 0) throw UsageError("derive_keys: negative count");
  std::vector<WatermarkKey> keys;
  keys.reserve(count);
  for (int i = 0; i < count; ++i)
    keys.push_back({splitmix64_at(master.seed, static_cast<uint64_t>(i))});
  return keys;
}

ChipSequence pn_sequence(const WatermarkKey& key, const std::string& stream_id,
                         int length) {
  if (length < 1) throw UsageError("pn_sequence: length must be >= 1");
  ChipSequence seq;
  seq.stream_id = stream_id;
  seq.chips.resize(length);
  uint64_t state = key.stream_seed(stream_id);
  for (int i = 0; i < length; ++i) {
    uint64_t r = splitmix64_next(state);
    seq.chips[i] = (static_cast<int64_t>(r) < 0) ? -1 : +1;
  }
  return seq;
}

std::vector<ChipSequence> orthogonal_set(const WatermarkKey& key,
                                         const std::string& stream_id,
                                         int count, int length) {
  if (length < 2 || (length & (length - 1)) != 0)
    throw UsageError("orthogonal_set: length must be a power of two >= 2");
  if (count < 1) throw UsageError("orthogonal_set: count must be >= 1");
  if (count > length - 1)
    throw CapacityError("orthogonal_set: at most length-1 sequences available");

  // Shared scrambler: elementwise sign flips keep all pairwise dot products
  // exact while hiding the Hadamard structure.
  ChipSequence scramble = pn_sequence(key, stream_id + "/scramble", length);

  std::vector<ChipSequence> out;
  out.reserve(count);
  for (int r = 1; r <= count; ++r) {
    ChipSequence seq;
    seq.stream_id = stream_id + "/hadamard-" + std::to_string(r);
    seq.chips.resize(length);
    for (int i = 0; i < length; ++i) {
      // Sylvester construction: entry sign = parity of popcount(r & i).
      int h = (std::popcount(static_cast<unsigned>(r & i)) & 1) ? -1 : +1;
      seq.chips[i] = h * scramble.chips[i];
    }
    out.push_back(std::move(seq));
  }
  return out;
}

std::vector<std::pair<int, int>> select_positions(const WatermarkKey& key,
                                                  const std::string& stream_id,
                                                  int count, int width,
                                                  int height) {
  if (width < 1 || height < 1)
    throw UsageError("select_positions: empty grid");
  if (count < 0) throw UsageError("select_positions: negative count");
  const long long total = static_cast<long long>(width) * height;
  if (count > total)
    throw CapacityError("select_positions: count exceeds pixel count");

  // Partial Fisher-Yates over the flattened raster.
  std::vector<std::pair<int, int>> out;
  out.reserve(count);
  std::vector<long long> raster(total);
  for (long long i = 0; i < total; ++i) raster[i] = i;
  uint64_t state = key.stream_seed(stream_id);
  for (int i = 0; i < count; ++i) {
    uint64_t r = splitmix64_next(state);
    long long j = i + static_cast<long long>(r % static_cast<uint64_t>(total - i));
    std::swap(raster[i], raster[j]);
    const long long flat = raster[i];
    out.emplace_back(static_cast<int>(flat % width),
                     static_cast<int>(flat / width));
  }
  return out;
}

double uniform01(uint64_t& state) {
  return static_cast<double>(splitmix64_next(state) >> 11) * 0x1.0p-53;
}

double GaussianSource::next() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // Box-Muller; u clamped away from 0 so the log stays finite.
  double u = uniform01(state_);
  if (u < 1e-300) u = 1e-300;
  const double v = uniform01(state_);
  const double r = std::sqrt(-2.0 * std::log(u));
  const double a = 6.283185307179586476925286766559 * v;
  spare_ = r * std::sin(a);
  has_spare_ = true;
  return r * std::cos(a);
}

}  // namespace vwmark
