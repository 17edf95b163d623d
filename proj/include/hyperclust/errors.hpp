#pragma once

#include <stdexcept>
#include <string>

namespace hyperclust {

// Base class for everything this library throws on purpose.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed input file; carries a 1-based line number when one is known.
struct ParseError : Error {
  explicit ParseError(const std::string& msg, long line = -1)
      : Error(line >= 0 ? "line " + std::to_string(line) + ": " + msg : msg),
        line_number(line) {}
  long line_number;
};

struct InvalidHyperedgeError : ParseError {
  using ParseError::ParseError;
};

// Model parameters that cannot describe a probability model
// (tuple probability above one, empty community, bad shapes...).
struct InvalidModelError : Error {
  using Error::Error;
};

// Model whose population core matrix is rank deficient, so the planted
// subspace is not identified.
struct DegenerateModelError : Error {
  using Error::Error;
};

// Shape or argument violation detected at an API boundary.
struct DimensionError : Error {
  using Error::Error;
};

}  // namespace hyperclust
