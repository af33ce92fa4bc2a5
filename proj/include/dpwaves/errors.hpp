#pragma once

#include <stdexcept>
#include <string>

namespace dpwaves {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of the operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// 2k*pi/P <= sqrt(2): the requested mode does not bifurcate.
class NoBifurcation : public Error {
 public:
  using Error::Error;
};

/// The wave touched or crossed the speed, so mu^2 + 2a - 3L(phi^2) is no
/// longer positive.
class SingularHeight : public Error {
 public:
  using Error::Error;
};

class NewtonFailure : public Error {
 public:
  using Error::Error;
};

class WindowTooSmall : public Error {
 public:
  using Error::Error;
};

/// Malformed branch or profile file.
class SchemaError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A condition that should be impossible off the kernel direction.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace dpwaves
