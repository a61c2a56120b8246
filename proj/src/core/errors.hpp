#pragma once

#include <stdexcept>
#include <string>

namespace superres {

/// Base of every error raised by the core. The C API maps each subclass onto
/// one status code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the mathematical domain of the operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The geometry collapses (s = 0) and the requested quantity is undefined.
class DegenerateError : public Error {
 public:
  using Error::Error;
};

/// Requested concurrence exceeds the maximum reachable at this separation.
class OutOfReachError : public Error {
 public:
  OutOfReachError(double requested, double c_max);
  double requested() const { return requested_; }
  double c_max() const { return c_max_; }

 private:
  double requested_;
  double c_max_;
};

/// A caller-supplied object breaks the contract of the operation, e.g. a
/// state family that is not normalized.
class ContractError : public Error {
 public:
  using Error::Error;
};

/// Oracle grid or finite-difference configuration is unusable.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class UsageError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace superres
