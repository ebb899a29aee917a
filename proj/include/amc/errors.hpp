#pragma once

#include <stdexcept>
#include <string>

namespace amc {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside an operation's domain (non-finite entries, bad index, ...).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// A linear system expected to be nonsingular turned out singular at tolerance.
class DegenerateSystem : public Error {
 public:
  using Error::Error;
};

/// Input too large for an exhaustive routine.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// Instance file could not be parsed or violates instance invariants.
class MalformedFile : public Error {
 public:
  using Error::Error;
};

/// Generator could not produce an instance satisfying its invariants.
class GenerationError : public Error {
 public:
  using Error::Error;
};

/// A caller broke an internal sequencing contract (e.g. reading unobserved cells).
class ContractError : public Error {
 public:
  using Error::Error;
};

}  // namespace amc
