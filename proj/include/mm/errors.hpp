#pragma once

#include <stdexcept>
#include <string>

namespace mm {

/// Coordinates or windows that fall outside a frame.
class BoundsError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// A call-site argument that violates an operation's precondition.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Invalid configuration. `field()` holds the dotted path of the offending
/// field, e.g. "detector.area_min".
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string field, const std::string& what)
      : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Malformed fixture files or frame sources.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Socket-level failures in the service and its clients.
class TransportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mm
