#pragma once

#include <stdexcept>
#include <string>

namespace inbl {

/// Invalid argument to a sampling, protocol or experiment operation.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A protocol precondition was violated (duplicate draw, nothing drawn, ...).
class ProtocolError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Alice and Bob do not share the same reference noises.
class ReferenceMismatch : public ProtocolError {
 public:
  using ProtocolError::ProtocolError;
};

}  // namespace inbl
