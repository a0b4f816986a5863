#pragma once

#include <stdexcept>
#include <string>

namespace sgmsup {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// File could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

/// File content does not follow the expected format.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// A precondition on arguments was violated (sizes, ranges, parameters).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A masked reduction had no contributing pixel.
class EmptyMaskError : public Error {
 public:
  using Error::Error;
};

}  // namespace sgmsup
