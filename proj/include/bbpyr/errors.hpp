#pragma once

#include <stdexcept>
#include <string>

namespace bbpyr {

/// Argument outside the mathematical domain of an operation
/// (index out of range, point outside the reference element, ...).
class DomainError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

/// Degenerate or inverted element geometry.
class GeometryError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Caller-side misuse: mismatched dimensions, unsupported combinations.
class UsageError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Malformed input files.
class ParseError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

} // namespace bbpyr
