#pragma once

#include <stdexcept>
#include <string>

namespace lsrm {

// All recoverable failures surface as one of these; nothing in the library
// calls abort() or prints to stderr on bad input.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct DimensionMismatch : Error {
  using Error::Error;
};
struct NotPositiveDefinite : Error {
  using Error::Error;
};
struct NonpositiveVariance : Error {
  using Error::Error;
};
struct InvalidDegreesOfFreedom : Error {
  using Error::Error;
};
struct NonpositiveHyperparameter : Error {
  using Error::Error;
};
struct NonstationaryCoefficients : Error {
  using Error::Error;
};
struct PanelInvalid : Error {
  using Error::Error;
};
struct ParseError : Error {
  using Error::Error;
};
struct ConfigInvalid : Error {
  using Error::Error;
};
struct EmptyChain : Error {
  using Error::Error;
};
struct IoFailure : Error {
  using Error::Error;
};

}  // namespace lsrm
