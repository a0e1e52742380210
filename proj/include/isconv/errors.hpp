#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace isconv {

/// Extents of tensors, kernels or parameters disagree.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A value is outside its admissible range (negative extent, sparsity > 1, NaN, ...).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed layer-spec text. Carries the 1-based line number and the offending field.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::string field, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ", field '" + field + "': " + what),
        line_(line),
        field_(std::move(field)) {}

  std::size_t line() const noexcept { return line_; }
  const std::string& field() const noexcept { return field_; }

 private:
  std::size_t line_;
  std::string field_;
};

/// A convolution kernel disagreed with the direct-convolution reference.
class CorrectnessError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The clock produced an unusable reading.
class MeasurementError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace isconv
