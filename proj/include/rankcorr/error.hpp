#pragma once

#include <stdexcept>
#include <string>

namespace rankcorr {

// Base of every error raised by the library. `exit_code()` is the process
// status the command-line front end reports for the error.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual int exit_code() const noexcept { return 1; }
};

class InputError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 2; }
};

class LengthMismatch : public InputError {
 public:
  using InputError::InputError;
};

class TiesPresent : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 3; }
};

class DegenerateSample : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 3; }
};

class ParameterOutOfRange : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 4; }
};

class MismatchedConfig : public ParameterOutOfRange {
 public:
  using ParameterOutOfRange::ParameterOutOfRange;
};

class NonFiniteIntegrand : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 5; }
};

class QuadratureNotConverged : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 5; }
};

}  // namespace rankcorr
