#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sre {

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
  virtual const char* kind() const noexcept { return "Error"; }
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& msg)
      : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + msg),
        line_(line),
        column_(column),
        message_(msg) {}
  const char* kind() const noexcept override { return "ParseError"; }
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  const std::string& message() const { return message_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::string message_;
};

// Raised when an operation would exceed a configured size guard.
class ExplosionGuard : public Error {
 public:
  ExplosionGuard(const std::string& what, std::size_t limit, std::size_t observed)
      : Error(what + " (limit " + std::to_string(limit) + ", observed " + std::to_string(observed) + ")"),
        limit_(limit),
        observed_(observed) {}
  const char* kind() const noexcept override { return "ExplosionGuard"; }
  std::size_t limit() const { return limit_; }
  std::size_t observed() const { return observed_; }

 private:
  std::size_t limit_;
  std::size_t observed_;
};

class PreconditionError : public Error {
 public:
  explicit PreconditionError(const std::string& what) : Error(what) {}
  const char* kind() const noexcept override { return "PreconditionError"; }
};

class GenerationFailed : public Error {
 public:
  explicit GenerationFailed(const std::string& what) : Error(what) {}
  const char* kind() const noexcept override { return "GenerationFailed"; }
};

class HallViolatorMissing : public Error {
 public:
  explicit HallViolatorMissing(const std::string& what) : Error(what) {}
  const char* kind() const noexcept override { return "HallViolatorMissing"; }
};

class OrderingStuck : public Error {
 public:
  explicit OrderingStuck(const std::string& what) : Error(what) {}
  const char* kind() const noexcept override { return "OrderingStuck"; }
};

class TypeClassificationImpossible : public Error {
 public:
  explicit TypeClassificationImpossible(const std::string& what) : Error(what) {}
  const char* kind() const noexcept override { return "TypeClassificationImpossible"; }
};

}  // namespace sre
