#pragma once

#include <stdexcept>
#include <string>

namespace itca {

// Base type for all library errors. Specific subclasses carry the
// condition name so callers (and the CLI) can map them to exit codes.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Configuration / input errors: bad arguments, unreadable files, caps.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Errors raised while computing on valid inputs.
class ComputeError : public Error {
 public:
  using Error::Error;
};

class EmptyAssignment : public ConfigError {
 public:
  EmptyAssignment() : ConfigError("EmptyAssignment: partition assignment is empty") {}
};

class LabelOutOfRange : public ConfigError {
 public:
  explicit LabelOutOfRange(int label, int k0)
      : ConfigError("LabelOutOfRange: label " + std::to_string(label) +
                    " outside [1, " + std::to_string(k0) + "]") {}
};

class TooManyClasses : public ConfigError {
 public:
  explicit TooManyClasses(int k0, int cap)
      : ConfigError("TooManyClasses: k0 = " + std::to_string(k0) +
                    " exceeds enumeration cap " + std::to_string(cap)) {}
};

class NotOrdinal : public ConfigError {
 public:
  explicit NotOrdinal(const std::string& text)
      : ConfigError("NotOrdinal: partition " + text + " merges non-adjacent classes") {}
};

class LengthMismatch : public ConfigError {
 public:
  LengthMismatch(std::size_t a, std::size_t b)
      : ConfigError("LengthMismatch: encodings of length " + std::to_string(a) +
                    " and " + std::to_string(b)) {}
};

class ParseFailure : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class FileNotFound : public ConfigError {
 public:
  explicit FileNotFound(const std::string& path)
      : ConfigError("FileNotFound: " + path) {}
};

class ParseError : public ConfigError {
 public:
  ParseError(const std::string& path, std::size_t row, std::size_t column,
             const std::string& what)
      : ConfigError("ParseError: " + path + " row " + std::to_string(row) +
                    " column " + std::to_string(column) + ": " + what),
        row(row),
        column(column) {}
  std::size_t row;
  std::size_t column;
};

class NonNumericFeature : public ConfigError {
 public:
  NonNumericFeature(const std::string& path, std::size_t row, const std::string& column)
      : ConfigError("NonNumericFeature: " + path + " row " + std::to_string(row) +
                    " column '" + column + "'") {}
};

class SingleClass : public ConfigError {
 public:
  SingleClass() : ConfigError("SingleClass: dataset has fewer than two classes") {}
};

class TooFewPoints : public ConfigError {
 public:
  TooFewPoints(int n, int r)
      : ConfigError("TooFewPoints: n = " + std::to_string(n) +
                    " is smaller than fold count r = " + std::to_string(r)) {}
};

class CenterGenerationTimeout : public ComputeError {
 public:
  explicit CenterGenerationTimeout(int attempts)
      : ComputeError("CenterGenerationTimeout: no admissible centers after " +
                     std::to_string(attempts) + " attempts") {}
};

class DegenerateClass : public ComputeError {
 public:
  explicit DegenerateClass(int label)
      : ComputeError("DegenerateClass: combined class " + std::to_string(label) +
                     " has no training points") {}
};

class DimensionMismatch : public ConfigError {
 public:
  DimensionMismatch(long got, long expected)
      : ConfigError("DimensionMismatch: feature width " + std::to_string(got) +
                    " != training width " + std::to_string(expected)) {}
};

class NonPositiveDefinite : public ComputeError {
 public:
  NonPositiveDefinite() : ComputeError("NonPositiveDefinite: component covariance") {}
};

class OutOfOmega : public ConfigError {
 public:
  OutOfOmega(double p1, double p2)
      : ConfigError("OutOfOmega: (p1, p2) = (" + std::to_string(p1) + ", " +
                    std::to_string(p2) + ") not in {p1,p2 > 0, p1+p2 < 1}") {}
};

}  // namespace itca
