#pragma once

#include <stdexcept>
#include <string>

namespace corpuskit {

// Base error for all corpuskit failures that are not recoverable data
// violations (those are returned as values, see FilterVerdict et al.).
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed input text: tags, token sequences, model files.
struct ParseError : Error {
  using Error::Error;
};

// Inputs that violate an operation's preconditions.
struct InvalidArgument : Error {
  using Error::Error;
};

}  // namespace corpuskit
