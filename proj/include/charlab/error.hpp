#pragma once

#include <stdexcept>
#include <string>

namespace charlab {

// Base of every error thrown by the library. The CLI maps these to exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An argument outside an operation's documented domain.
class ParameterError : public Error {
 public:
  using Error::Error;
};

// A generator or search outgrew a configured size limit.
class CapacityError : public Error {
 public:
  using Error::Error;
};

// Tuple lengths disagree with a formula's declared arities.
class ArityError : public Error {
 public:
  using Error::Error;
};

// An exact search would exceed its enumeration budget; use the heuristic route.
class BudgetError : public Error {
 public:
  using Error::Error;
};

// A named inequality required by a construction does not hold. The message
// carries the inequality and the numbers that violated it.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Malformed or invariant-violating input file.
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace charlab
