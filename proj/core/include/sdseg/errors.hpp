#pragma once

#include <stdexcept>
#include <string>

namespace sdseg {

/// Invalid configuration value (block size, basis count, threshold, ...).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Vector or image dimensions that do not agree with the operator.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Non-finite or otherwise unusable input data.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Soft-threshold called with a negative threshold.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Something that should be impossible given validated inputs.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// File could not be read, decoded, or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace sdseg
