#pragma once

#include <stdexcept>
#include <string>

namespace capnet {

// Every failure raised by the library derives from Error. The CLI maps the
// concrete type onto its exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad argument value (negative radius, p < 1, out-of-range index, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Dimensions that do not chain or do not match.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Malformed network / dataset file. The message names the offending field.
class ParseError : public Error {
 public:
  using Error::Error;
};

// An iterative routine hit its iteration cap, or produced non-finite values.
class NumericalError : public Error {
 public:
  using Error::Error;
};

// A quantity is undefined because a layer is identically zero.
class DegenerateLayer : public Error {
 public:
  using Error::Error;
};

// Input exceeds a documented enumeration cap (2^m signs, cover size, ...).
class CapExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace capnet
