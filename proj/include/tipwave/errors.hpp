#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace tipwave {

/// Error categories. The numeric values of the first four double as CLI
/// exit codes.
enum class ErrorCode {
  ok = 0,
  config = 1,
  blow_up = 2,
  threshold = 3,
  io = 4,
  parameter = 5,
  structural = 6,
  hypothesis = 7,
  numerical = 8,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class ParameterError : public Error {
 public:
  explicit ParameterError(const std::string& what)
      : Error(ErrorCode::parameter, what) {}
};

/// Array shape mismatches, grids too coarse for a stencil.
class StructuralError : public Error {
 public:
  explicit StructuralError(const std::string& what)
      : Error(ErrorCode::structural, what) {}
};

/// A stability hypothesis (gamma != 1, m != a) required by an operation fails.
class HypothesisError : public Error {
 public:
  explicit HypothesisError(const std::string& what)
      : Error(ErrorCode::hypothesis, what) {}
};

class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what)
      : Error(ErrorCode::numerical, what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorCode::io, what) {}
};

class BlowUpError : public Error {
 public:
  BlowUpError(std::size_t step, const std::string& what)
      : Error(ErrorCode::blow_up, what), step_(step) {}
  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

/// Carries every violation found while validating a configuration.
class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<std::string> violations);
  const std::vector<std::string>& violations() const noexcept {
    return violations_;
  }

 private:
  std::vector<std::string> violations_;
};

}  // namespace tipwave
