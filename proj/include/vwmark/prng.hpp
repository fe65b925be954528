#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "vwmark/errors.hpp"

namespace vwmark {

// splitmix64 step. Advances the state and returns the next 64-bit output.
uint64_t splitmix64_next(uint64_t& state);

// Single value: output of one splitmix64 step seeded with `seed + index`
// mixed through the finalizer. Used for key schedules.
uint64_t splitmix64_at(uint64_t seed, uint64_t index);

// FNV-1a over the bytes of a string; used to fold stream ids into seeds.
uint64_t fnv1a64(const std::string& s);

struct WatermarkKey {
  uint64_t seed = 0;

  // Deterministic sub-seed for a named stream.
  uint64_t stream_seed(const std::string& stream_id) const;
};

// key_i = splitmix64(master, i), the schedule used everywhere multiple keys
// are needed.
std::vector<WatermarkKey> derive_keys(WatermarkKey master, int count);

struct ChipSequence {
  std::string stream_id;
  std::vector<int> chips;  // each chip is -1 or +1
};

// Keyed +-1 pseudo-noise sequence. length >= 1 or UsageError.
ChipSequence pn_sequence(const WatermarkKey& key, const std::string& stream_id,
                         int length);

// `count` mutually orthogonal +-1 sequences of power-of-two `length`
// (exact integer orthogonality: <v_i, v_j> == length * delta_ij).
// Walsh-Hadamard rows (row 0, the all-ones row, excluded) scrambled
// elementwise by a shared keyed PN stream. count > length-1 throws
// CapacityError; non-power-of-two length throws UsageError.
std::vector<ChipSequence> orthogonal_set(const WatermarkKey& key,
                                         const std::string& stream_id,
                                         int count, int length);

// `count` distinct keyed positions inside a width x height grid, as (x, y).
// Partial Fisher-Yates over the flattened grid. count > width*height throws
// CapacityError.
std::vector<std::pair<int, int>> select_positions(const WatermarkKey& key,
                                                  const std::string& stream_id,
                                                  int count, int width,
                                                  int height);

// Uniform double in [0, 1) from a splitmix64 stream (top 53 bits).
double uniform01(uint64_t& state);

// Standard normal via Box-Muller on uniform01. Generates pairs; the struct
// caches the second value so consecutive calls alternate.
class GaussianSource {
 public:
  explicit GaussianSource(uint64_t seed) : state_(seed) {}
  double next();

 private:
  uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace vwmark
