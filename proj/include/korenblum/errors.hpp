#pragma once

#include <stdexcept>
#include <string>

namespace korenblum {

/// Malformed user input (spec strings, arc syntax, config files).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerical procedure could not reach its stated tolerance.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Explicit enumeration requested beyond the supported size.
class ResolutionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace korenblum
