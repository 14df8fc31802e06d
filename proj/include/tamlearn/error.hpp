#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tamlearn {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed corpus line. `line()` is 1-based.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class EncodingError : public Error {
 public:
  EncodingError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class DescriptorError : public Error {
 public:
  using Error::Error;
};

class ArgumentError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class ModelError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Raised by learners that fail to fit. Solvers that stop at their
/// iteration cap attach the best objective value they reached.
class TrainingError : public Error {
 public:
  explicit TrainingError(const std::string& what, double best_objective = 0.0)
      : Error(what), best_objective_(best_objective) {}
  double best_objective() const noexcept { return best_objective_; }

 private:
  double best_objective_;
};

}  // namespace tamlearn
