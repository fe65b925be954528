#pragma once

#include <optional>
#include <string>
#include <vector>

namespace vwmark {

// Common result shape for every detector.
struct DetectionResult {
  std::vector<int> bits;                 // recovered payload, 0/1
  std::vector<double> correlations;      // per-symbol detection statistics
  double threshold = 0.0;                // presence threshold actually used
  bool present = false;
  std::optional<double> ber_vs_truth;    // set when ground truth was supplied

  std::string to_json() const;
};

}  // namespace vwmark
