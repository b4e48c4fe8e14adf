#pragma once

#include <stdexcept>
#include <string>

namespace regada {

// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Tensor shape / dimension mismatches.
class ShapeError : public Error {
 public:
  explicit ShapeError(const std::string& msg) : Error(msg) {}
};

// Invalid configuration values (hyperparameters, flags, schema).
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& msg) : Error(msg) {}
};

// Malformed files: bad magic, truncated payloads, non-finite values.
// Messages include the byte offset or element index where parsing failed.
class FormatError : public Error {
 public:
  explicit FormatError(const std::string& msg) : Error(msg) {}
};

// Cross-reference failures in loaded data: unknown labels, missing
// embeddings, broken antonym maps. Messages name the first offender.
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& msg) : Error(msg) {}
};

}  // namespace regada
