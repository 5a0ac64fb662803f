#pragma once

#include <stdexcept>
#include <string>

namespace rbm {

// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Parameters that violate the existence/stationarity conditions, or are not finite.
class InvalidParams : public Error {
 public:
  using Error::Error;
};

// Input outside the domain where an operation is defined (on a cut, too close
// to a contour, wrong special case, ...). The message carries the diagnostic.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Evaluation requested at (or too close to) a pole of the evaluated function.
class PoleError : public DomainError {
 public:
  using DomainError::DomainError;
};

// A numerical procedure failed to certify its result: a tail bound that could
// not be met, or two independent routes that disagree.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace rbm
