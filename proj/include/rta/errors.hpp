#pragma once

#include <stdexcept>
#include <string>

namespace rta {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Raised when an explicit step would run with |nu| > 1.
class CflViolation : public Error {
 public:
  using Error::Error;
};

/// Two objects were built on different meshes or time steps.
class IncompatibleDiscretization : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

/// A persisted file is internally inconsistent (truncated, bad checksum, ...).
class IntegrityError : public Error {
 public:
  using Error::Error;
};

class NotFound : public Error {
 public:
  using Error::Error;
};

/// A ratio whose denominator vanished.
class DegenerateDivision : public Error {
 public:
  using Error::Error;
};

}  // namespace rta
