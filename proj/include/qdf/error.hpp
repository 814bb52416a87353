#pragma once

#include <stdexcept>
#include <string>

namespace qdf {

// Bad shapes, out-of-range indices, malformed files, violated preconditions.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Malformed JSON or a document that does not match the expected layout.
class ParseError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

// Well-formed input outside the domain of a query, e.g. a complex value where
// a real one is required.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// The numerics failed to deliver (eigensolver did not converge, singular system).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qdf
