#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace trepan {

// Broad failure classes; the CLI maps them onto exit codes.
enum class ErrorKind {
  Usage,     // bad flags / missing required inputs
  Data,      // malformed or inconsistent input files
  NotFound,  // missing input file
  Internal,  // numerical failure, broken invariant
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& msg)
      : Error(ErrorKind::Data,
              "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + msg),
        line_(line),
        column_(column),
        message_(msg) {}
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }
  const std::string& message() const noexcept { return message_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::string message_;
};

class SchemaMismatch : public Error {
 public:
  explicit SchemaMismatch(const std::string& msg) : Error(ErrorKind::Data, msg) {}
};

class UnsatisfiableConstraint : public Error {
 public:
  explicit UnsatisfiableConstraint(const std::string& msg) : Error(ErrorKind::Data, msg) {}
};

class InconsistentTBox : public Error {
 public:
  InconsistentTBox() : Error(ErrorKind::Data, "TBox entails TOP SUBCLASSOF BOTTOM") {}
};

class UnknownConcept : public Error {
 public:
  explicit UnknownConcept(const std::string& msg) : Error(ErrorKind::Data, msg) {}
};

class UnlistedInstance : public Error {
 public:
  explicit UnlistedInstance(const std::string& msg) : Error(ErrorKind::Data, msg) {}
};

class TrainingDiverged : public Error {
 public:
  explicit TrainingDiverged(std::size_t epoch)
      : Error(ErrorKind::Internal,
              "training diverged: non-finite loss at epoch " + std::to_string(epoch)),
        epoch_(epoch) {}
  std::size_t epoch() const noexcept { return epoch_; }

 private:
  std::size_t epoch_;
};

}  // namespace trepan
