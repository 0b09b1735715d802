#pragma once

#include <stdexcept>
#include <string>

namespace godds {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller-supplied argument violates a documented precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Input data (CSV rows, config files, fold contents) is malformed or unusable.
class DataError : public Error {
 public:
  using Error::Error;
};

// A numerical routine could not produce a trustworthy answer.
class NumericalError : public Error {
 public:
  using Error::Error;
};

// Unpenalized logistic fit on (quasi-)separable data.
class SeparationError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace godds
