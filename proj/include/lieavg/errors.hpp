#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lieavg {

/// Malformed expression text; offset is the byte position of the problem.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, std::size_t offset)
      : std::runtime_error(msg + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

/// Identifier that does not resolve to a state, phase, parameter or definition.
class BindError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// log of a non-positive value, sqrt of a negative value, division by zero.
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration or API usage (bad sizes, out-of-range orders, ...).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace lieavg
