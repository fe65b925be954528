#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "vwmark/frame.hpp"

namespace vwmark {

enum class AttackKind {
  FRAME_DROP,
  FRAME_AVERAGE,
  FRAME_SWAP,
  GAUSSIAN_NOISE,
  SALT_PEPPER,
  LOSSY_COMPRESS,
  CROP,
  SCALE,
  ROTATE,
  MEDIAN_FILTER,
  LOW_PASS,
  ROW_COL_REMOVAL,
  IDENTITY,
};

std::string attack_kind_name(AttackKind k);
AttackKind parse_attack_kind(const std::string& name);

// One parameterized attack. Parameters live in an ordered map so the JSON
// form round-trips stably. Kind-specific keys:
//   FRAME_DROP p | FRAME_AVERAGE w | FRAME_SWAP p | GAUSSIAN_NOISE sigma |
//   SALT_PEPPER d | LOSSY_COMPRESS q | CROP x,y,w,h | SCALE s | ROTATE theta |
//   MEDIAN_FILTER k | LOW_PASS k | ROW_COL_REMOVAL n | IDENTITY (none)
struct AttackSpec {
  AttackKind kind = AttackKind::IDENTITY;
  std::map<std::string, double> params;
  uint64_t rng_seed = 0;

  double param(const std::string& key) const;             // UsageError if absent
  double param_or(const std::string& key, double d) const;

  // Flat JSON object: {"kind":"GAUSSIAN_NOISE","sigma":5,"seed":7}.
  std::string to_json() const;
  static AttackSpec from_json(const std::string& text);

  // Display form for report rows: KIND or KIND(key=value,...), seed omitted.
  std::string display_name() const;
};

// Parse a JSON array of attack specs (a single object is accepted too).
std::vector<AttackSpec> load_attack_list(const std::string& json_text);

// Apply one attack. Deterministic given (clip, spec); stochastic kinds draw
// exclusively from rng_seed. Output dims equal input dims except FRAME_DROP
// (fewer frames). Invalid parameters throw UsageError.
VideoClip apply_attack(const VideoClip& clip, const AttackSpec& spec);

}  // namespace vwmark
