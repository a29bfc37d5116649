#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mras {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid arguments: empty domains, zero-sized grids, mismatched fields.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Malformed or inconsistent experiment configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A time stepper produced non-finite values.
class BlowUpError : public Error {
 public:
  BlowUpError(const std::string& what, std::size_t step)
      : Error(what + " (step " + std::to_string(step) + ")"), step_(step) {}
  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace mras
