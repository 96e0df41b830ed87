#pragma once

#include <stdexcept>
#include <string>

namespace gstk {

/// Base of every exception thrown by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or truncated input (files, kernel text, JSON documents).
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Filesystem failures.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Inputs that are well-formed but violate an operation's preconditions,
/// e.g. a zero-variance band passed to OIF ranking.
class DomainError : public Error {
 public:
  using Error::Error;
};

}  // namespace gstk
