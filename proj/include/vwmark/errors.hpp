#pragma once

#include <stdexcept>
#include <string>

namespace vwmark {

// Error taxonomy shared by the library and the CLI.
// The CLI maps these to process exit codes (see tools/).
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Caller passed inconsistent or out-of-contract arguments.
struct UsageError : Error {
  using Error::Error;
};

// Payload does not fit the cover at the requested settings.
struct CapacityError : Error {
  using Error::Error;
};

// Byte stream does not parse as the claimed container/format.
struct FormatError : Error {
  using Error::Error;
};

// Parsed fine but dimensions/relationships are inconsistent.
struct DimensionError : Error {
  using Error::Error;
};

// Iterative numeric routine failed to converge.
struct NumericError : Error {
  using Error::Error;
};

}  // namespace vwmark
