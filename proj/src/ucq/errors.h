#pragma once

#include <stdexcept>
#include <string>

namespace ucq {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A requested object would exceed a configured size cap (Hilbert-space
/// dimension, type-class size, integer range).
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// An argument lies outside the domain of the operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A numerical routine failed to converge or produced an inconsistent result.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Codebook search could not satisfy the packing condition.
class PackingError : public Error {
 public:
  using Error::Error;
};

/// Malformed user input (channel files, configuration).
class ValidationError : public Error {
 public:
  using Error::Error;
};

}  // namespace ucq
