#pragma once

#include <stdexcept>
#include <string>

namespace rulegraph {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when an input document cannot be turned into an event.
class IngestError : public Error {
 public:
  using Error::Error;
};

/// Raised by keyed lookups (missing slot, dead vertex, unknown node).
class LookupError : public Error {
 public:
  using Error::Error;
};

/// Raised for malformed regex text outside the supported language.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Raised for invalid parameters, configs or preconditions.
class ValidationError : public Error {
 public:
  using Error::Error;
};

}  // namespace rulegraph
