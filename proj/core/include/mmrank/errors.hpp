#pragma once

#include <cstddef>
#include <exception>
#include <optional>
#include <string>

namespace mmrank {

// Base for every error raised by the library. The message can be extended
// with context (line numbers, iteration indices) as the error propagates.
class Error : public std::exception {
 public:
  explicit Error(std::string message) : message_(std::move(message)) {}

  const char* what() const noexcept override { return message_.c_str(); }
  void prepend(const std::string& context) { message_ = context + ": " + message_; }

 private:
  std::string message_;
};

// Malformed input text. `line` is 1-based.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& message);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// A precondition on arguments or configuration was violated.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// The model family cannot be evaluated on the dataset kind.
class ModelMismatch : public Error {
 public:
  using Error::Error;
};

// The rescaling transform needs alpha > 1 and beta > 0.
class AccelerationUnavailable : public Error {
 public:
  using Error::Error;
};

// Raised by iterative steps; carries the iteration index once a solver
// loop has seen it.
class NumericalError : public Error {
 public:
  using Error::Error;
  std::optional<std::size_t> iteration() const { return iteration_; }
  void set_iteration(std::size_t t);

 private:
  std::optional<std::size_t> iteration_;
};

// An MM update for `item` has a zero numerator (no wins and alpha == 1) or a
// zero denominator (item never compared and beta == 0).
class NonconvergentItem : public NumericalError {
 public:
  NonconvergentItem(std::size_t item, const std::string& message);
  std::size_t item() const { return item_; }

 private:
  std::size_t item_;
};

// Iterates left the overflow box, or the maximum-likelihood estimate does
// not exist for the data.
class DivergenceSuspected : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace mmrank
