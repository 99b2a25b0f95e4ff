#pragma once

#include <stdexcept>
#include <string>

namespace prbox {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (bad width, empty list, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// The inputs are well formed but the requested quantity does not exist
/// numerically: non-normalizable state, empty post-selection, singular
/// matrix, unreachable target.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace prbox
