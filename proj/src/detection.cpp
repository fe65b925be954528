#include "vwmark/detection.hpp"

#include <json.hpp>

namespace vwmark {

std::string DetectionResult::to_json() const {
  nlohmann::ordered_json j;
  j["present"] = present;
  j["threshold"] = threshold;
  j["bits"] = bits;
  j["correlations"] = correlations;
  if (ber_vs_truth) j["ber_vs_truth"] = *ber_vs_truth;
  return j.dump();
}

}  // namespace vwmark
